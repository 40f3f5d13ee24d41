#include "polylap/spaces.hpp"

#include <cmath>
#include <limits>

namespace polylap {

static void check_aligned(const WeightedGraph& g, const VertexFunction& f) {
    if (f.size() != g.size())
        throw std::invalid_argument("vertex function length does not match graph size");
}

double lr_norm(const WeightedGraph& g, const VertexFunction& u, double r, const Domain* dom) {
    check_aligned(g, u);
    if (std::isinf(r)) {
        double m = 0.0;
        if (dom) {
            for (std::uint32_t x : dom->omega()) m = std::max(m, std::fabs(u[x]));
        } else {
            for (double t : u) m = std::max(m, std::fabs(t));
        }
        return m;
    }
    if (!(r >= 1.0)) throw std::invalid_argument("lr_norm requires r >= 1");
    double s = 0.0;
    if (dom) {
        for (std::uint32_t x : dom->omega()) s += g.mu(x) * std::pow(std::fabs(u[x]), r);
    } else {
        for (std::uint32_t x = 0; x < g.size(); ++x)
            s += g.mu(x) * std::pow(std::fabs(u[x]), r);
    }
    return std::pow(s, 1.0 / r);
}

double sobolev_norm(const WeightedGraph& g, const VertexFunction& u, unsigned m, double l,
                    WhichH which) {
    check_aligned(g, u);
    if (!(l >= 1.0)) throw std::invalid_argument("sobolev_norm requires l >= 1");
    const VertexFunction& h = which == WhichH::H1 ? g.h1() : g.h2();
    if (h.empty())
        throw std::invalid_argument("sobolev_norm requires the potential on every vertex");
    VertexFunction gn = grad_norm(g, u, m);
    double s = 0.0;
    for (std::uint32_t x = 0; x < g.size(); ++x) {
        if (!(h[x] > 0.0))
            throw std::invalid_argument("sobolev_norm requires a positive potential");
        s += g.mu(x) * (std::pow(gn[x], l) + h[x] * std::pow(std::fabs(u[x]), l));
    }
    return std::pow(s, 1.0 / l);
}

double dirichlet_norm(const WeightedGraph& g, const Domain& dom, const VertexFunction& u,
                      unsigned m, double l, bool full) {
    check_aligned(g, u);
    if (!(l >= 1.0)) throw std::invalid_argument("dirichlet_norm requires l >= 1");
    for (std::uint32_t x = 0; x < g.size(); ++x)
        if (!dom.in_omega(x) && u[x] != 0.0)
            throw std::invalid_argument("state does not vanish outside the domain (vertex " +
                                        g.id(x) + ")");
    double s = 0.0;
    const unsigned k_lo = full ? 0 : m;
    for (unsigned k = k_lo; k <= m; ++k) {
        VertexFunction gn = grad_norm(g, u, k);
        for (std::uint32_t x : dom.closure()) s += g.mu(x) * std::pow(gn[x], l);
    }
    return std::pow(s, 1.0 / l);
}

Decomposition decompose(const WeightedGraph& g, const VertexFunction& u) {
    check_aligned(g, u);
    Decomposition d;
    d.mean = integrate(g, u) / g.total_measure();
    d.fluctuation = u;
    for (double& t : d.fluctuation) t -= d.mean;
    return d;
}

std::pair<double, double> project_mean_pair(const WeightedGraph& g, const VertexFunction& u,
                                            const VertexFunction& v, const Domain* dom) {
    check_aligned(g, u);
    check_aligned(g, v);
    if (dom) {
        const double vol = dom->omega_measure();
        return {integrate(g, u, *dom) / vol, integrate(g, v, *dom) / vol};
    }
    const double vol = g.total_measure();
    return {integrate(g, u) / vol, integrate(g, v) / vol};
}

EmbeddingConstants embedding_constants(const ProblemInstance& inst,
                                       const std::string& variant) {
    if (variant != "example51" && variant != "lemma22")
        throw std::invalid_argument("unknown constant formula variant: " + variant);
    const WeightedGraph& g = inst.g();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EmbeddingConstants c;
    c.formula_variant = variant;
    c.mode = inst.mode;
    c.mu_floor = g.mu_floor();
    c.volume = inst.volume();
    c.d_p = c.d_q = c.K_p = c.K_q = c.inv_Kp_p = c.inv_Kq_q = nan;
    c.C_p = c.C_q = c.inv_Cp_p = c.inv_Cq_q = c.H_p = c.H_q = nan;
    c.h1_min = c.h2_min = c.w_min = nan;

    if (inst.mode == Mode::Finite) {
        if (!g.has_h1() || !g.has_h2())
            throw std::invalid_argument("finite mode constants need both potentials");
        double mu_min = std::numeric_limits<double>::infinity();
        double mu_max = 0.0;
        double h1_min = std::numeric_limits<double>::infinity();
        double h2_min = std::numeric_limits<double>::infinity();
        for (std::uint32_t x = 0; x < g.size(); ++x) {
            mu_min = std::min(mu_min, g.mu(x));
            mu_max = std::max(mu_max, g.mu(x));
            h1_min = std::min(h1_min, g.h1()[x]);
            h2_min = std::min(h2_min, g.h2()[x]);
        }
        double w_min = std::numeric_limits<double>::infinity();
        for (const Edge& e : g.edges()) w_min = std::min(w_min, e.w);
        c.mu_min = mu_min;
        c.mu_max = mu_max;
        c.w_min = w_min;
        c.h1_min = h1_min;
        c.h2_min = h2_min;
        c.d_p = std::pow(mu_min * h1_min, -1.0 / inst.p);
        c.d_q = std::pow(mu_min * h2_min, -1.0 / inst.q);
        if (variant == "example51") {
            c.K_p = std::pow(c.volume, 1.0 / inst.q) / std::pow(mu_min * h1_min, 1.0 / inst.p);
            c.K_q = std::pow(c.volume, 1.0 / inst.q) / std::pow(mu_min * h2_min, 1.0 / inst.p);
        } else {
            c.K_p = std::pow(c.volume / (mu_min * h1_min), 1.0 / inst.p);
            c.K_q = std::pow(c.volume / (mu_min * h2_min), 1.0 / inst.q);
        }
        c.inv_Kp_p = 1.0 / std::pow(c.K_p, inst.p);
        c.inv_Kq_q = 1.0 / std::pow(c.K_q, inst.q);
        return c;
    }

    // Dirichlet mode
    const Domain& dom = inst.dom();
    if (inst.m1 != 1 || inst.m2 != 1)
        throw UnsupportedFormula(
            "no closed-form Dirichlet constants for operator order above 1");
    double mu_min_omega = std::numeric_limits<double>::infinity();
    for (std::uint32_t x : dom.omega()) mu_min_omega = std::min(mu_min_omega, g.mu(x));
    double mu_max = 0.0;
    for (std::uint32_t x : dom.closure()) mu_max = std::max(mu_max, g.mu(x));
    double w_min = std::numeric_limits<double>::infinity();
    for (const Edge& e : g.edges())
        if (dom.in_closure(e.a) && dom.in_closure(e.b)) w_min = std::min(w_min, e.w);
    c.mu_min = mu_min_omega;
    c.mu_max = mu_max;
    c.w_min = w_min;
    const double base = std::sqrt(2.0 * mu_max / w_min) * (1.0 + std::fabs(c.volume));
    c.C_p = base / std::pow(c.mu_floor, 1.0 / inst.p);
    c.C_q = base / std::pow(c.mu_floor, 1.0 / inst.q);
    c.inv_Cp_p = 1.0 / std::pow(c.C_p, inst.p);
    c.inv_Cq_q = 1.0 / std::pow(c.C_q, inst.q);
    c.H_p = c.C_p / std::pow(mu_min_omega, 1.0 / inst.p);
    c.H_q = c.C_q / std::pow(mu_min_omega, 1.0 / inst.q);
    return c;
}

}  // namespace polylap
