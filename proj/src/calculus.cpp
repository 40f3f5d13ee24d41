#include "polylap/calculus.hpp"

#include <cmath>
#include <string>

namespace polylap {

static void check_aligned(const WeightedGraph& g, const VertexFunction& f) {
    if (f.size() != g.size())
        throw std::invalid_argument("vertex function length does not match graph size");
}

VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& psi) {
    check_aligned(g, psi);
    const std::size_t n = g.size();
    VertexFunction out(n, 0.0);
    for (std::uint32_t x = 0; x < n; ++x) {
        double s = 0.0;
        for (const HalfEdge& h : g.neighbors(x)) s += h.w * (psi[h.to] - psi[x]);
        out[x] = s / g.mu(x);
    }
    return out;
}

VertexFunction laplacian_power(const WeightedGraph& g, VertexFunction psi, unsigned k) {
    check_aligned(g, psi);
    for (unsigned i = 0; i < k; ++i) psi = laplacian(g, psi);
    return psi;
}

VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f1,
                     const VertexFunction& f2) {
    check_aligned(g, f1);
    check_aligned(g, f2);
    const std::size_t n = g.size();
    VertexFunction out(n, 0.0);
    for (std::uint32_t x = 0; x < n; ++x) {
        double s = 0.0;
        for (const HalfEdge& h : g.neighbors(x))
            s += h.w * (f1[h.to] - f1[x]) * (f2[h.to] - f2[x]);
        out[x] = s / (2.0 * g.mu(x));
    }
    return out;
}

VertexFunction grad_norm(const WeightedGraph& g, const VertexFunction& psi, unsigned m) {
    check_aligned(g, psi);
    if (m == 0) {
        VertexFunction out(psi);
        for (double& t : out) t = std::fabs(t);
        return out;
    }
    if (m % 2 == 1) {
        VertexFunction base = laplacian_power(g, psi, (m - 1) / 2);
        VertexFunction gm = gamma(g, base, base);
        for (double& t : gm) t = std::sqrt(t);
        return gm;
    }
    VertexFunction base = laplacian_power(g, psi, m / 2);
    for (double& t : base) t = std::fabs(t);
    return base;
}

// (s)^{(p-2)/2} for s = squared gradient magnitude, with the p < 2 pole
// guarded; eps shifts s by eps^2.
static double degenerate_weight_sq(double s, double p, double eps) {
    s += eps * eps;
    if (s == 0.0) {
        if (p > 2.0) return 0.0;
        if (p == 2.0) return 1.0;
        throw SingularGradientError(
            "|grad|^(p-2) is singular at a vertex with vanishing gradient (p < 2); "
            "set an epsilon regularization to proceed");
    }
    return std::pow(s, 0.5 * (p - 2.0));
}

// |t|^{p-2} with the same guard.
static double degenerate_weight_abs(double t, double p, double eps) {
    return degenerate_weight_sq(t * t, p, eps);
}

VertexFunction p_laplacian(const WeightedGraph& g, const VertexFunction& psi, double p,
                           double eps) {
    check_aligned(g, psi);
    const std::size_t n = g.size();
    VertexFunction gm = gamma(g, psi, psi);
    VertexFunction w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = degenerate_weight_sq(gm[i], p, eps);
    VertexFunction out(n, 0.0);
    for (std::uint32_t x = 0; x < n; ++x) {
        double s = 0.0;
        for (const HalfEdge& h : g.neighbors(x))
            s += (w[h.to] + w[x]) * h.w * (psi[h.to] - psi[x]);
        out[x] = s / (2.0 * g.mu(x));
    }
    return out;
}

double poly_pairing(const WeightedGraph& g, unsigned m, double p, const VertexFunction& u,
                    const VertexFunction& phi, const Domain* dom, double eps) {
    check_aligned(g, u);
    check_aligned(g, phi);
    if (m == 0) throw std::invalid_argument("poly_pairing requires m >= 1");
    const std::size_t n = g.size();

    auto sum_over = [&](const VertexFunction& f) {
        double s = 0.0;
        if (dom) {
            for (std::uint32_t x : dom->closure()) s += g.mu(x) * f[x];
        } else {
            for (std::uint32_t x = 0; x < n; ++x) s += g.mu(x) * f[x];
        }
        return s;
    };

    if (m % 2 == 1) {
        const unsigned k = (m - 1) / 2;
        VertexFunction U = laplacian_power(g, u, k);
        VertexFunction P = laplacian_power(g, phi, k);
        VertexFunction guu = gamma(g, U, U);
        VertexFunction gup = gamma(g, U, P);
        VertexFunction integrand(n);
        for (std::size_t i = 0; i < n; ++i)
            integrand[i] = degenerate_weight_sq(guu[i], p, eps) * gup[i];
        return sum_over(integrand);
    }
    const unsigned k = m / 2;
    VertexFunction U = laplacian_power(g, u, k);
    VertexFunction P = laplacian_power(g, phi, k);
    VertexFunction integrand(n);
    for (std::size_t i = 0; i < n; ++i)
        integrand[i] = degenerate_weight_abs(U[i], p, eps) * U[i] * P[i];
    return sum_over(integrand);
}

}  // namespace polylap
