#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polylap/calculus.hpp"
#include "support/testutil.hpp"

using namespace polylap;
using testutil::near;

namespace {
const double INV_SQRT2 = 1.0 / std::sqrt(2.0);

// Independent edge-list evaluation of the odd-order pairing:
//   sum over edges of (w/2) (W(a) + W(b)) (U(b) - U(a)) (P(b) - P(a))
// with U = L^k u, P = L^k phi, W = |grad^m u|^{p-2}. Algebraically equal to
// the vertex-sum form, so the two implementations must agree to roundoff.
double edge_sum_pairing(const WeightedGraph& g, unsigned m, double p,
                        const VertexFunction& u, const VertexFunction& phi) {
    const unsigned k = (m - 1) / 2;
    VertexFunction U = laplacian_power(g, u, k);
    VertexFunction P = laplacian_power(g, phi, k);
    VertexFunction W = grad_norm(g, u, m);
    for (double& t : W) t = t == 0.0 ? (p == 2.0 ? 1.0 : 0.0) : std::pow(t, p - 2.0);
    double s = 0.0;
    for (const Edge& e : g.edges())
        s += 0.5 * e.w * (W[e.a] + W[e.b]) * (U[e.b] - U[e.a]) * (P[e.b] - P[e.a]);
    return s;
}
}  // namespace

TEST_CASE("two vertex laplacian, gamma, gradient magnitudes") {
    auto g = testutil::two_vertex();
    VertexFunction psi{0.0, 1.0};

    auto L = laplacian(g, psi);
    CHECK(L[0] == 1.0);
    CHECK(L[1] == -1.0);

    auto G = gamma(g, psi, psi);
    CHECK(G[0] == 0.5);
    CHECK(G[1] == 0.5);

    auto n1 = grad_norm(g, psi, 1);
    CHECK(near(n1[0], INV_SQRT2, 1e-15));
    CHECK(near(n1[1], INV_SQRT2, 1e-15));

    // order 2 is the plain Laplacian magnitude
    auto n2 = grad_norm(g, psi, 2);
    CHECK(n2[0] == 1.0);
    CHECK(n2[1] == 1.0);

    auto n0 = grad_norm(g, VertexFunction{-3.0, 4.0}, 0);
    CHECK(n0[0] == 3.0);
    CHECK(n0[1] == 4.0);
}

TEST_CASE("two vertex p-laplacian and pairing, p = 3") {
    auto g = testutil::two_vertex();
    VertexFunction psi{0.0, 1.0};

    auto L3 = p_laplacian(g, psi, 3.0);
    CHECK(near(L3[0], INV_SQRT2, 1e-15));
    CHECK(near(L3[1], -INV_SQRT2, 1e-15));

    CHECK(near(poly_pairing(g, 1, 3.0, psi, psi), INV_SQRT2, 1e-15));
    // p = 2 pairing is the Dirichlet form
    CHECK(near(poly_pairing(g, 1, 2.0, psi, psi), 1.0, 1e-15));
}

TEST_CASE("laplacian of a constant vanishes exactly") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        auto g = testutil::random_connected(rng);
        VertexFunction c(g.size(), 3.7251);
        for (double v : laplacian(g, c)) CHECK(v == 0.0);
        for (double v : gamma(g, c, c)) CHECK(v == 0.0);
    }
}

TEST_CASE("laplacian integrates to zero") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 50; ++t) {
        auto g = testutil::random_connected(rng);
        auto psi = testutil::random_function(rng, g.size());
        CHECK(near(integrate(g, laplacian(g, psi)), 0.0, 1e-12));
    }
}

TEST_CASE("iterated laplacian composes") {
    std::mt19937_64 rng(13);
    auto g = testutil::random_connected(rng);
    auto psi = testutil::random_function(rng, g.size());
    auto once = laplacian(g, psi);
    auto twice = laplacian(g, once);
    auto composed = laplacian_power(g, psi, 2);
    for (std::size_t i = 0; i < psi.size(); ++i) CHECK(twice[i] == composed[i]);
    auto identity = laplacian_power(g, psi, 0);
    for (std::size_t i = 0; i < psi.size(); ++i) CHECK(identity[i] == psi[i]);
}

TEST_CASE("odd order gradient magnitude is the gradient of the iterated laplacian") {
    std::mt19937_64 rng(14);
    auto g = testutil::random_connected(rng);
    auto psi = testutil::random_function(rng, g.size());
    auto direct = grad_norm(g, psi, 3);
    auto base = laplacian(g, psi);
    auto expected = grad_norm(g, base, 1);
    for (std::size_t i = 0; i < psi.size(); ++i) CHECK(near(direct[i], expected[i], 1e-14));
}

TEST_CASE("pairing against the p-laplacian is integration by parts") {
    std::mt19937_64 rng(15);
    for (double p : {2.0, 2.5, 3.0}) {
        for (int t = 0; t < 30; ++t) {
            auto g = testutil::random_connected(rng);
            auto u = testutil::random_function(rng, g.size());
            auto phi = testutil::random_function(rng, g.size());
            VertexFunction lpu = p_laplacian(g, u, p);
            const double lhs = integrate(
                g, [&] {
                    VertexFunction f(g.size());
                    for (std::size_t i = 0; i < f.size(); ++i) f[i] = lpu[i] * phi[i];
                    return f;
                }());
            const double rhs = -poly_pairing(g, 1, p, u, phi);
            CHECK(near(lhs, rhs, 1e-10 * (1.0 + std::fabs(lhs) + std::fabs(rhs))));
        }
    }
}

TEST_CASE("odd order pairing agrees with the independent edge sum") {
    std::mt19937_64 rng(16);
    for (unsigned m : {1u, 3u}) {
        for (double p : {2.0, 3.0}) {
            for (int t = 0; t < 20; ++t) {
                auto g = testutil::random_connected(rng);
                auto u = testutil::random_function(rng, g.size());
                auto phi = testutil::random_function(rng, g.size());
                const double a = poly_pairing(g, m, p, u, phi);
                const double b = edge_sum_pairing(g, m, p, u, phi);
                CHECK(near(a, b, 1e-12 * (1.0 + std::fabs(a) + std::fabs(b))));
            }
        }
    }
}

TEST_CASE("even order pairing is symmetric when p = 2") {
    std::mt19937_64 rng(17);
    auto g = testutil::random_connected(rng);
    auto u = testutil::random_function(rng, g.size());
    auto phi = testutil::random_function(rng, g.size());
    const double a = poly_pairing(g, 2, 2.0, u, phi);
    const double b = poly_pairing(g, 2, 2.0, phi, u);
    CHECK(near(a, b, 1e-13 * (1.0 + std::fabs(a))));
    // and equals the integral of the product of Laplacians
    VertexFunction lu = laplacian(g, u), lp = laplacian(g, phi);
    VertexFunction prod(g.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = lu[i] * lp[i];
    CHECK(near(a, integrate(g, prod), 1e-13 * (1.0 + std::fabs(a))));
}

TEST_CASE("shifting by a constant leaves higher order magnitudes unchanged") {
    std::mt19937_64 rng(18);
    for (int t = 0; t < 50; ++t) {
        auto g = testutil::random_connected(rng);
        auto psi = testutil::random_function(rng, g.size());
        std::uniform_real_distribution<double> cd(-10.0, 10.0);
        const double c = cd(rng);
        std::uniform_int_distribution<unsigned> md(1, 5);
        const unsigned m = md(rng);
        VertexFunction shifted(psi);
        for (double& v : shifted) v += c;
        auto a = grad_norm(g, psi, m);
        auto b = grad_norm(g, shifted, m);
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(near(a[i], b[i], 1e-12 * (1.0 + std::fabs(c) + std::fabs(a[i]))));
    }
}

TEST_CASE("degenerate weight singularity for p < 2") {
    auto g = testutil::path3();
    // flat around vertex c: gradient vanishes there
    VertexFunction psi{0.0, 1.0, 1.0};
    CHECK_THROWS_AS(p_laplacian(g, psi, 1.5), SingularGradientError);
    CHECK_THROWS_AS(poly_pairing(g, 1, 1.5, psi, psi), SingularGradientError);
    // epsilon regularization lifts the pole
    auto reg = p_laplacian(g, psi, 1.5, 0.1);
    for (double v : reg) CHECK(std::isfinite(v));
    CHECK(std::isfinite(poly_pairing(g, 1, 1.5, psi, psi, nullptr, 0.1)));
    // p >= 2 needs no guard
    auto ok = p_laplacian(g, psi, 3.0);
    CHECK(std::isfinite(ok[2]));
}

TEST_CASE("pairing rejects order zero") {
    auto g = testutil::two_vertex();
    VertexFunction psi{0.0, 1.0};
    CHECK_THROWS_AS(poly_pairing(g, 0, 2.0, psi, psi), std::invalid_argument);
}

TEST_CASE("domain pairing sums over the closure with zero extension") {
    auto g = testutil::path3();
    auto dom = compute_boundary_ids(g, {"b"});
    VertexFunction u{0.0, 5.0, 0.0};
    VertexFunction phi{0.0, 1.0, 0.0};
    // closure is the whole path here, so domain and whole-graph sums agree
    CHECK(poly_pairing(g, 1, 2.0, u, phi, &dom) == poly_pairing(g, 1, 2.0, u, phi));

    // a 5-path where the closure of {b} is {a, b, c}; at order 3 the iterated
    // Laplacian of u = 5 at b reaches vertex d, so the closure-restricted and
    // whole-graph pairings differ by exactly mu(d) Gamma(Lu, Lu)(d):
    //   Lu = (5, -10, 5, 0, 0), Gamma(Lu, Lu) = (112.5, 225, 125, 12.5, 0)
    //   whole graph: 475, closure: 462.5
    WeightedGraph g5({{"a", 1.0, {}, {}, {}},
                      {"b", 1.0, {}, {}, {}},
                      {"c", 1.0, {}, {}, {}},
                      {"d", 1.0, {}, {}, {}},
                      {"e", 1.0, {}, {}, {}}},
                     {{"a", "b", 1.0}, {"b", "c", 1.0}, {"c", "d", 1.0}, {"d", "e", 1.0}},
                     1.0);
    auto dom5 = compute_boundary_ids(g5, {"b"});
    CHECK(dom5.closure().size() == 3);
    VertexFunction u5{0.0, 5.0, 0.0, 0.0, 0.0};
    CHECK(near(poly_pairing(g5, 3, 2.0, u5, u5), 475.0, 1e-12));
    CHECK(near(poly_pairing(g5, 3, 2.0, u5, u5, &dom5), 462.5, 1e-12));
}
