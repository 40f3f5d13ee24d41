#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "polylap/spaces.hpp"
#include "support/testutil.hpp"

using namespace polylap;
using testutil::near;

namespace {
const double INF = std::numeric_limits<double>::infinity();
}  // namespace

using testutil::oscillator_instance;
using testutil::ring_instance;

TEST_CASE("lr norms") {
    auto g = testutil::two_vertex();
    VertexFunction u{3.0, 4.0};
    CHECK(lr_norm(g, u, 2.0) == 5.0);
    CHECK(lr_norm(g, u, INF) == 4.0);
    CHECK(lr_norm(g, u, 1.0) == 7.0);
    WeightedGraph w({{"a", 2.0, {}, {}, {}}, {"b", 3.0, {}, {}, {}}}, {{"a", "b", 1.0}}, 2.0);
    CHECK(near(lr_norm(w, {1.0, 1.0}, 3.0), std::pow(5.0, 1.0 / 3.0), 1e-15));
    CHECK_THROWS_AS(lr_norm(g, u, 0.5), std::invalid_argument);

    auto p3 = testutil::path3();
    auto dom = compute_boundary_ids(p3, {"b"});
    CHECK(lr_norm(p3, {9.0, 2.0, 7.0}, 1.0, &dom) == 2.0);
    CHECK(lr_norm(p3, {9.0, 2.0, 7.0}, INF, &dom) == 2.0);
}

TEST_CASE("sobolev norm on the two vertex step") {
    auto g = testutil::two_vertex();
    VertexFunction u{0.0, 1.0};
    CHECK(near(sobolev_norm(g, u, 1, 2.0, WhichH::H1), std::sqrt(2.0), 1e-15));

    WeightedGraph no_h({{"a", 1.0, {}, {}, {}}, {"b", 1.0, {}, {}, {}}}, {{"a", "b", 1.0}}, 1.0);
    CHECK_THROWS_AS(sobolev_norm(no_h, u, 1, 2.0, WhichH::H1), std::invalid_argument);
    WeightedGraph bad_h({{"a", 1.0, -1.0, 1.0, {}}, {"b", 1.0, 1.0, 1.0, {}}},
                        {{"a", "b", 1.0}}, 1.0);
    CHECK_THROWS_AS(sobolev_norm(bad_h, u, 1, 2.0, WhichH::H1), std::invalid_argument);
}

TEST_CASE("dirichlet seminorm on the path bump") {
    auto g = testutil::path3();
    auto dom = compute_boundary_ids(g, {"b"});
    VertexFunction u{0.0, 1.0, 0.0};
    CHECK(near(dirichlet_norm(g, dom, u, 1, 2.0), std::sqrt(2.0), 1e-15));
    // full variant adds the zeroth order term, here int |u|^2 = 1
    CHECK(near(dirichlet_norm(g, dom, u, 1, 2.0, true), std::sqrt(3.0), 1e-15));
    VertexFunction bad{1.0, 1.0, 0.0};
    CHECK_THROWS_AS(dirichlet_norm(g, dom, bad, 1, 2.0), std::invalid_argument);
}

TEST_CASE("mean fluctuation decomposition") {
    WeightedGraph g({{"a", 1.0, {}, {}, {}}, {"b", 3.0, {}, {}, {}}}, {{"a", "b", 1.0}}, 1.0);
    VertexFunction u{2.0, 6.0};
    auto d = decompose(g, u);
    CHECK(d.mean == 5.0);
    CHECK(d.fluctuation[0] == -3.0);
    CHECK(d.fluctuation[1] == 1.0);
    CHECK(near(integrate(g, d.fluctuation), 0.0, 1e-15));
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(u[i] == d.mean + d.fluctuation[i]);
}

TEST_CASE("mean pair projection") {
    WeightedGraph g({{"a", 1.0, {}, {}, {}}, {"b", 3.0, {}, {}, {}}}, {{"a", "b", 1.0}}, 1.0);
    auto [mu, mv] = project_mean_pair(g, {2.0, 6.0}, {4.0, 0.0});
    CHECK(mu == 5.0);
    CHECK(mv == 1.0);

    auto p3 = testutil::path3();
    auto dom = compute_boundary_ids(p3, {"b"});
    auto [du, dv] = project_mean_pair(p3, {7.0, 2.0, 9.0}, {1.0, 5.0, 1.0}, &dom);
    CHECK(du == 2.0);
    CHECK(dv == 5.0);
}

TEST_CASE("finite mode constants for the worked example") {
    auto inst = oscillator_instance();
    auto c = embedding_constants(inst);
    CHECK(c.formula_variant == "example51");
    CHECK(near(c.volume, 1.0 / 300, 1e-15));
    CHECK(c.mu_min == 1.0 / 4000);
    CHECK(c.h1_min == 546.0);
    const double muh = 546.0 / 4000.0;  // 0.1365
    CHECK(near(c.d_p, std::pow(muh, -0.5), 1e-13));
    CHECK(near(c.d_q, std::pow(muh, -1.0 / 3.0), 1e-13));
    // worked values: 1/K_q^q = muh^{3/2} * 300 = 15.1293...,
    //                1/K_p^p = muh * 300^{2/3} = 6.1171...
    CHECK(near(c.inv_Kq_q, 15.1293, 1e-3 * 15.1293));
    CHECK(near(c.inv_Kp_p, 6.11713, 1e-3 * 6.11713));
    CHECK(near(c.inv_Kq_q, std::pow(muh, 1.5) * 300.0, 1e-10));
    CHECK(near(c.inv_Kp_p, muh * std::pow(300.0, 2.0 / 3.0), 1e-10));
    CHECK(std::isnan(c.C_p));

    auto lit = embedding_constants(inst, "lemma22");
    CHECK(near(lit.K_p, std::pow((1.0 / 300) / muh, 0.5), 1e-13));
    CHECK(near(lit.K_q, std::pow((1.0 / 300) / muh, 1.0 / 3.0), 1e-13));

    CHECK_THROWS_AS(embedding_constants(inst, "nope"), std::invalid_argument);
}

TEST_CASE("dirichlet mode constants for the ring") {
    auto inst = ring_instance();
    auto c = embedding_constants(inst);
    CHECK(near(c.volume, 1.0 / 300, 1e-15));
    CHECK(c.mu_floor == 1.0 / 30000);
    CHECK(c.mu_max == 1.0 / 6000);
    CHECK(c.w_min == 51.0);
    CHECK(c.mu_min == 1.0 / 30000);  // over the region
    const double base = std::sqrt(2.0 * (1.0 / 6000) / 51.0) * (1.0 + 1.0 / 300);
    CHECK(near(c.C_p, base * std::sqrt(30000.0), 1e-12));
    CHECK(near(c.inv_Cp_p, 5.06617, 1e-3 * 5.06617));
    CHECK(near(c.inv_Cq_q, 1975.06, 1e-3 * 1975.06));
    CHECK(near(c.H_p, c.C_p * std::sqrt(30000.0), 1e-9));
    CHECK(std::isnan(c.K_p));

    auto high = inst;
    high.m1 = 2;
    CHECK_THROWS_AS(embedding_constants(high), UnsupportedFormula);
}

TEST_CASE("sup norm embedding holds on random instances") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; ++t) {
        auto g = testutil::random_connected(rng);
        auto u = testutil::random_function(rng, g.size());
        ProblemInstance inst;
        inst.graph = std::make_shared<WeightedGraph>(g);
        inst.p = 2.0;
        inst.q = 3.0;
        std::uniform_int_distribution<unsigned> md(1, 3);
        inst.m1 = md(rng);
        inst.m2 = md(rng);
        inst.F = Nonlinearity::builtin("zero");
        auto c = embedding_constants(inst);
        const double sup = lr_norm(*inst.graph, u, INF);
        CHECK(sup <= c.d_p * sobolev_norm(*inst.graph, u, inst.m1, inst.p, WhichH::H1) *
                         (1.0 + 1e-12));
        CHECK(sup <= c.d_q * sobolev_norm(*inst.graph, u, inst.m2, inst.q, WhichH::H2) *
                         (1.0 + 1e-12));
        // theta = l comparison bound, literal variant
        auto lit = embedding_constants(inst, "lemma22");
        CHECK(lr_norm(*inst.graph, u, inst.p) <=
              lit.K_p * sobolev_norm(*inst.graph, u, inst.m1, inst.p, WhichH::H1) *
                  (1.0 + 1e-12));
        CHECK(lr_norm(*inst.graph, u, inst.q) <=
              lit.K_q * sobolev_norm(*inst.graph, u, inst.m2, inst.q, WhichH::H2) *
                  (1.0 + 1e-12));
        // general theta bound with the explicit vol^{1/theta} factor
        for (double theta : {1.0, 2.0, 5.0}) {
            CHECK(lr_norm(*inst.graph, u, theta) <=
                  std::pow(c.volume, 1.0 / theta) * c.d_p *
                      sobolev_norm(*inst.graph, u, inst.m1, inst.p, WhichH::H1) *
                      (1.0 + 1e-12));
        }
    }
}

TEST_CASE("dirichlet sup bound holds when every region vertex touches the boundary") {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 200; ++t) {
        auto fx = testutil::random_domain_graph(rng);
        ProblemInstance inst;
        inst.graph = std::make_shared<WeightedGraph>(fx.graph);
        inst.mode = Mode::Dirichlet;
        inst.domain = compute_boundary_ids(*inst.graph, fx.omega_ids);
        inst.p = 2.0;
        inst.q = 3.0;
        inst.F = Nonlinearity::builtin("zero");
        auto c = embedding_constants(inst);

        VertexFunction u(inst.graph->size(), 0.0);
        std::uniform_real_distribution<double> d(-2.0, 2.0);
        for (std::uint32_t x : inst.dom().omega()) u[x] = d(rng);

        double sup = 0.0;
        for (std::uint32_t x : inst.dom().closure()) sup = std::max(sup, std::fabs(u[x]));
        CHECK(sup <= c.C_p * dirichlet_norm(*inst.graph, inst.dom(), u, 1, inst.p) *
                         (1.0 + 1e-12));
        CHECK(sup <= c.C_q * dirichlet_norm(*inst.graph, inst.dom(), u, 1, inst.q) *
                         (1.0 + 1e-12));
    }
}
