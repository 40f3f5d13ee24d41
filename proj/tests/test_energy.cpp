#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "polylap/energy.hpp"
#include "polylap/spaces.hpp"
#include "support/testutil.hpp"

using namespace polylap;
using testutil::near;
using testutil::near_rel;

namespace {

ProblemInstance finite_instance(WeightedGraph g, const std::string& f_src,
                                unsigned m1 = 1, unsigned m2 = 1, double p = 2.0,
                                double q = 2.0) {
    ProblemInstance inst;
    inst.graph = std::make_shared<WeightedGraph>(std::move(g));
    inst.m1 = m1;
    inst.m2 = m2;
    inst.p = p;
    inst.q = q;
    inst.F = Nonlinearity::expression(f_src);
    inst.F.bind(*inst.graph);
    return inst;
}

ProblemInstance dirichlet_instance(const testutil::DomainFixture& fx,
                                   const std::string& f_src, unsigned m1 = 1,
                                   unsigned m2 = 1, double p = 2.0, double q = 2.0) {
    ProblemInstance inst;
    inst.graph = std::make_shared<WeightedGraph>(fx.graph);
    inst.mode = Mode::Dirichlet;
    inst.domain = compute_boundary_ids(*inst.graph, fx.omega_ids);
    inst.m1 = m1;
    inst.m2 = m2;
    inst.p = p;
    inst.q = q;
    inst.F = Nonlinearity::expression(f_src);
    inst.F.bind(*inst.graph);
    return inst;
}

StatePair random_state(std::mt19937_64& rng, const ProblemInstance& inst) {
    StatePair s = inst.zero_state();
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for_each_free(inst, [&](std::uint32_t x) {
        s.u[x] = d(rng);
        s.v[x] = d(rng);
    });
    return s;
}

}  // namespace

TEST_CASE("two-vertex closed forms") {
    auto inst = finite_instance(testutil::two_vertex(), "u + v");
    const auto zero = inst.zero_state();

    CHECK(phi(inst, zero) == 0.0);

    StatePair ones = inst.constant_state(1.0, 1.0);
    auto parts = phi_parts(inst, ones);
    CHECK(parts.semin_u == 0.0);
    CHECK(parts.semin_v == 0.0);
    CHECK(near(parts.pot_u, 1.0, 1e-15));
    CHECK(near(parts.pot_v, 1.0, 1e-15));
    CHECK(near(parts.f_int, 4.0, 1e-15));
    CHECK(near(phi(inst, ones), -2.0, 1e-14));

    auto g = grad_phi(inst, ones);
    for (int x = 0; x < 2; ++x) {
        CHECK(near(g.u[x], 0.0, 1e-14));
        CHECK(near(g.v[x], 0.0, 1e-14));
    }
    CHECK(residual(inst, ones) <= 1e-12);

    CHECK(near(residual(inst, zero), 2.0, 1e-14));

    auto still = finite_instance(testutil::two_vertex(), "0");
    StatePair step{{0.0, 1.0}, {0.0, 0.0}};
    CHECK(near(phi(still, step), 1.0, 1e-15));
    CHECK(residual(still, still.zero_state()) == 0.0);
}

TEST_CASE("gradient matches finite differences") {
    std::mt19937_64 rng(2026);
    const unsigned ms[] = {1, 2, 3};
    const double ps[] = {2.0, 2.5, 3.0};
    for (int trial = 0; trial < 60; ++trial) {
        auto inst = finite_instance(
            testutil::random_connected(rng),
            "sin(u)*cos(v) + 0.5*u*v + 0.2*u^3 - 0.1*v^2",
            ms[trial % 3], ms[(trial / 3) % 3], ps[trial % 3], ps[(trial / 2) % 3]);
        StatePair s = random_state(rng, inst);
        auto g = grad_phi(inst, s);

        const double step = 1e-6;
        for (std::uint32_t x = 0; x < inst.n(); ++x) {
            for (int comp = 0; comp < 2; ++comp) {
                auto& col = comp == 0 ? s.u : s.v;
                const double keep = col[x];
                col[x] = keep + step;
                const double hi = phi(inst, s);
                col[x] = keep - step;
                const double lo = phi(inst, s);
                col[x] = keep;
                const double fd = (hi - lo) / (2.0 * step);
                const double got = comp == 0 ? g.u[x] : g.v[x];
                CHECK(near(got, fd, 1e-6 * (1.0 + std::fabs(got))));
            }
        }
    }
}

TEST_CASE("dirichlet gradient matches finite differences") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        auto fx = testutil::random_domain_graph(rng);
        auto inst = dirichlet_instance(fx, "u*v + sin(v) - 0.3*u^2",
                                       1 + trial % 2, 1 + (trial / 2) % 2, 2.0,
                                       trial % 2 ? 2.5 : 2.0);
        StatePair s = random_state(rng, inst);
        auto g = grad_phi(inst, s);

        const double step = 1e-6;
        for_each_free(inst, [&](std::uint32_t x) {
            for (int comp = 0; comp < 2; ++comp) {
                auto& col = comp == 0 ? s.u : s.v;
                const double keep = col[x];
                col[x] = keep + step;
                const double hi = phi(inst, s);
                col[x] = keep - step;
                const double lo = phi(inst, s);
                col[x] = keep;
                const double fd = (hi - lo) / (2.0 * step);
                const double got = comp == 0 ? g.u[x] : g.v[x];
                CHECK(near(got, fd, 1e-6 * (1.0 + std::fabs(got))));
            }
        });

        for (std::uint32_t x = 0; x < inst.n(); ++x) {
            if (inst.is_free(x)) continue;
            CHECK(g.u[x] == 0.0);
            CHECK(g.v[x] == 0.0);
        }
    }
}

TEST_CASE("first-order closed form agrees with indicator pairing") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 40; ++trial) {
        auto inst = finite_instance(testutil::random_connected(rng),
                                    "u*u + v*v + u*v", 1, trial % 2 ? 1 : 2,
                                    trial % 2 ? 2.5 : 2.0, 3.0);
        StatePair s = random_state(rng, inst);
        auto fast = grad_phi(inst, s);
        auto ref = grad_phi_pairing(inst, s);
        for (std::uint32_t x = 0; x < inst.n(); ++x) {
            CHECK(near_rel(fast.u[x], ref.u[x], 1e-12));
            CHECK(near_rel(fast.v[x], ref.v[x], 1e-12));
        }
    }
    std::mt19937_64 rng2(405);
    for (int trial = 0; trial < 20; ++trial) {
        auto fx = testutil::random_domain_graph(rng2);
        auto inst = dirichlet_instance(fx, "u*v", 1, 1, 2.0, 2.5);
        StatePair s = random_state(rng2, inst);
        auto fast = grad_phi(inst, s);
        auto ref = grad_phi_pairing(inst, s);
        for (std::uint32_t x = 0; x < inst.n(); ++x) {
            CHECK(near_rel(fast.u[x], ref.u[x], 1e-12));
            CHECK(near_rel(fast.v[x], ref.v[x], 1e-12));
        }
    }
}

TEST_CASE("seminorm parts ignore constant shifts") {
    std::mt19937_64 rng(909);
    for (int trial = 0; trial < 30; ++trial) {
        auto inst = finite_instance(testutil::random_connected(rng), "u*v",
                                    1 + trial % 3, 1 + (trial / 3) % 3, 2.0, 3.0);
        StatePair s = random_state(rng, inst);
        auto base = phi_parts(inst, s);
        std::uniform_real_distribution<double> cD(-5.0, 5.0);
        const double c = cD(rng), d = cD(rng);
        StatePair t = s;
        for (auto& x : t.u) x += c;
        for (auto& x : t.v) x += d;
        auto shifted = phi_parts(inst, t);
        CHECK(near_rel(shifted.semin_u, base.semin_u, 1e-11));
        CHECK(near_rel(shifted.semin_v, base.semin_v, 1e-11));
    }
}

TEST_CASE("energy dominates the sobolev norms when the envelope is small") {
    auto inst = testutil::oscillator_instance();
    auto consts = embedding_constants(inst, "lemma22");
    const double lhs2 = 5.0, lhs1 = 7.5;
    const double c_u = (1.0 / inst.p) * (1.0 - lhs2 * std::pow(consts.K_p, inst.p));
    const double c_v = (1.0 / inst.q) * (1.0 - lhs1 * std::pow(consts.K_q, inst.q));
    CHECK(c_u > 0.0);
    CHECK(c_v > 0.0);
    CHECK(near(c_u, 0.43895, 1e-5));
    CHECK(near(c_v, 0.2722833, 1e-6));

    std::mt19937_64 rng(511);
    for (int dir = 0; dir < 100; ++dir) {
        StatePair s{testutil::random_function(rng, inst.n()),
                    testutil::random_function(rng, inst.n())};
        for (double t : {1.0, 4.0, 16.0, 64.0}) {
            StatePair ts = s;
            for (auto& x : ts.u) x *= t;
            for (auto& x : ts.v) x *= t;
            const double val = phi(inst, ts);
            const double nu = sobolev_norm(*inst.graph, ts.u, inst.m1, inst.p, WhichH::H1);
            const double nv = sobolev_norm(*inst.graph, ts.v, inst.m2, inst.q, WhichH::H2);
            const double bound =
                c_u * std::pow(nu, inst.p) + c_v * std::pow(nv, inst.q);
            CHECK(val >= bound - 1e-9 * (1.0 + std::fabs(val)));
        }
    }
}

TEST_CASE("dirichlet energy") {
    std::vector<VertexSpec> vs;
    for (const char* id : {"a", "b", "c"}) {
        VertexSpec v;
        v.id = id;
        v.mu = 1.0;
        vs.push_back(v);
    }
    testutil::DomainFixture fx{
        WeightedGraph(std::move(vs), {{"a", "b", 1.0}, {"b", "c", 1.0}}, 1.0),
        {"b"}};

    auto inst = dirichlet_instance(fx, "u");
    StatePair s = inst.zero_state();
    const std::uint32_t b = inst.graph->find("b").value();
    s.u[b] = 2.0;

    auto parts = phi_parts(inst, s);
    CHECK(near(parts.semin_u, 4.0, 1e-14));
    CHECK(parts.pot_u == 0.0);
    CHECK(parts.pot_v == 0.0);
    CHECK(near(parts.f_int, 2.0, 1e-15));
    CHECK(near(phi(inst, s), 2.0, 1e-14));

    auto g = grad_phi(inst, s);
    CHECK(near(g.u[b], 3.0, 1e-13));
    CHECK(g.u[inst.graph->find("a").value()] == 0.0);
    CHECK(g.u[inst.graph->find("c").value()] == 0.0);
    CHECK(near(residual(inst, s), 3.0, 1e-13));

    StatePair bad = s;
    bad.u[inst.graph->find("a").value()] = 0.5;
    CHECK_THROWS_AS(phi(inst, bad), std::invalid_argument);
    CHECK_THROWS_AS(grad_phi(inst, bad), std::invalid_argument);
}

TEST_CASE("signed power conventions") {
    CHECK(signed_power(2.0, 3.0) == 4.0);
    CHECK(signed_power(-2.0, 3.0) == -4.0);
    CHECK(signed_power(-3.0, 2.0) == -3.0);
    CHECK(signed_power(0.0, 1.5) == 0.0);
    CHECK(near(signed_power(-0.25, 1.5), -std::pow(0.25, 0.5), 1e-16));
}
