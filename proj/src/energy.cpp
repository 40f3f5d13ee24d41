#include "polylap/energy.hpp"

#include <cmath>

namespace polylap {

double signed_power(double t, double l) {
    if (t == 0.0) return 0.0;
    return t > 0.0 ? std::pow(t, l - 1.0) : -std::pow(-t, l - 1.0);
}

static void check_state(const ProblemInstance& inst, const StatePair& s) {
    if (s.u.size() != inst.n() || s.v.size() != inst.n())
        throw std::invalid_argument("state length does not match graph size");
    if (inst.dirichlet()) {
        const Domain& dom = inst.dom();
        for (std::uint32_t x = 0; x < inst.n(); ++x)
            if (!dom.in_omega(x) && (s.u[x] != 0.0 || s.v[x] != 0.0))
                throw std::invalid_argument(
                    "state does not vanish outside the domain (vertex " +
                    inst.g().id(x) + ")");
    }
}

PhiParts phi_parts(const ProblemInstance& inst, const StatePair& s) {
    check_state(inst, s);
    const WeightedGraph& g = inst.g();
    const double p = inst.p, q = inst.q;
    PhiParts parts;

    VertexFunction gu = grad_norm(g, s.u, inst.m1);
    VertexFunction gv = grad_norm(g, s.v, inst.m2);

    if (inst.dirichlet()) {
        const Domain& dom = inst.dom();
        double su = 0.0, sv = 0.0;
        for (std::uint32_t x : dom.closure()) {
            su += g.mu(x) * std::pow(gu[x], p);
            sv += g.mu(x) * std::pow(gv[x], q);
        }
        parts.semin_u = su / p;
        parts.semin_v = sv / q;
        double f = 0.0;
        for (std::uint32_t x : dom.omega()) f += g.mu(x) * inst.F.value(x, s.u[x], s.v[x]);
        parts.f_int = f;
        return parts;
    }

    if (!g.has_h1() || !g.has_h2())
        throw std::invalid_argument("finite mode requires potentials h1 and h2");
    double su = 0.0, pu = 0.0, sv = 0.0, pv = 0.0, f = 0.0;
    for (std::uint32_t x = 0; x < g.size(); ++x) {
        const double mu = g.mu(x);
        su += mu * std::pow(gu[x], p);
        pu += mu * g.h1()[x] * std::pow(std::fabs(s.u[x]), p);
        sv += mu * std::pow(gv[x], q);
        pv += mu * g.h2()[x] * std::pow(std::fabs(s.v[x]), q);
        f += mu * inst.F.value(x, s.u[x], s.v[x]);
    }
    parts.semin_u = su / p;
    parts.pot_u = pu / p;
    parts.semin_v = sv / q;
    parts.pot_v = pv / q;
    parts.f_int = f;
    return parts;
}

double phi(const ProblemInstance& inst, const StatePair& s) {
    return phi_parts(inst, s).total();
}

static VertexFunction seminorm_gradient(const ProblemInstance& inst,
                                        const VertexFunction& w, unsigned m,
                                        double l, bool closed_form) {
    const WeightedGraph& g = inst.g();
    VertexFunction out(g.size(), 0.0);
    if (closed_form && m == 1) {
        VertexFunction lap = p_laplacian(g, w, l, inst.eps_regularization);
        for_each_free(inst,
                      [&](std::uint32_t x) { out[x] = -g.mu(x) * lap[x]; });
        return out;
    }
    const Domain* dom = inst.dirichlet() ? &inst.dom() : nullptr;
    VertexFunction indicator(g.size(), 0.0);
    for_each_free(inst, [&](std::uint32_t x) {
        indicator[x] = 1.0;
        out[x] =
            poly_pairing(g, m, l, w, indicator, dom, inst.eps_regularization);
        indicator[x] = 0.0;
    });
    return out;
}

static StatePair grad_impl(const ProblemInstance& inst, const StatePair& s,
                           bool closed_form) {
    check_state(inst, s);
    const WeightedGraph& g = inst.g();
    if (!inst.dirichlet() && (!g.has_h1() || !g.has_h2()))
        throw std::invalid_argument("finite mode requires potentials h1 and h2");

    StatePair grad{seminorm_gradient(inst, s.u, inst.m1, inst.p, closed_form),
                   seminorm_gradient(inst, s.v, inst.m2, inst.q, closed_form)};

    for_each_free(inst, [&](std::uint32_t x) {
        const FValue f = inst.F.eval(x, s.u[x], s.v[x]);
        const double mu = g.mu(x);
        grad.u[x] -= mu * f.fu;
        grad.v[x] -= mu * f.fv;
        if (!inst.dirichlet()) {
            grad.u[x] += mu * g.h1()[x] * signed_power(s.u[x], inst.p);
            grad.v[x] += mu * g.h2()[x] * signed_power(s.v[x], inst.q);
        }
    });
    return grad;
}

StatePair grad_phi(const ProblemInstance& inst, const StatePair& s) {
    return grad_impl(inst, s, true);
}

StatePair grad_phi_pairing(const ProblemInstance& inst, const StatePair& s) {
    return grad_impl(inst, s, false);
}

double residual_of_grad(const ProblemInstance& inst, const StatePair& grad) {
    const WeightedGraph& g = inst.g();
    double s = 0.0;
    for_each_free(inst, [&](std::uint32_t x) {
        const double ru = grad.u[x] / g.mu(x);
        const double rv = grad.v[x] / g.mu(x);
        s += ru * ru + rv * rv;
    });
    return std::sqrt(s);
}

double residual(const ProblemInstance& inst, const StatePair& s) {
    return residual_of_grad(inst, grad_phi(inst, s));
}

}  // namespace polylap
