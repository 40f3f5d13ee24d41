#pragma once

#include <stdexcept>

#include "polylap/graph.hpp"

namespace polylap {

// Raised when a |grad|^(p-2) factor with p < 2 hits a vertex where the
// gradient norm vanishes and no epsilon regularization was configured.
struct SingularGradientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pointwise graph Laplacian
//   (L psi)(x) = (1/mu(x)) sum_{y ~ x} w_xy (psi(y) - psi(x)).
VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& psi);

// k-fold composition of the Laplacian; k = 0 returns psi unchanged.
VertexFunction laplacian_power(const WeightedGraph& g, VertexFunction psi, unsigned k);

// Carre du champ
//   Gamma(f, g)(x) = (1/(2 mu(x))) sum_{y ~ x} w_xy (f(y)-f(x)) (g(y)-g(x)).
VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f1,
                     const VertexFunction& f2);

// Order-m gradient magnitude:
//   m = 0: |psi|
//   m odd: sqrt(Gamma(L^{(m-1)/2} psi)), the length of the discrete gradient
//          of the iterated Laplacian
//   m even: |L^{m/2} psi|.
VertexFunction grad_norm(const WeightedGraph& g, const VertexFunction& psi, unsigned m);

// p-Laplacian
//   (Lp psi)(x) = (1/(2 mu(x))) sum_{y ~ x}
//       (|grad psi|^{p-2}(y) + |grad psi|^{p-2}(x)) w_xy (psi(y) - psi(x)).
// eps > 0 replaces |grad psi|^{p-2} by (Gamma + eps^2)^{(p-2)/2}.
VertexFunction p_laplacian(const WeightedGraph& g, const VertexFunction& psi, double p,
                           double eps = 0.0);

// Weak pairing of the order-m p-degenerate operator against a test function:
//   m odd:  integral of |grad^m u|^{p-2} Gamma(L^k u, L^k phi),  k = (m-1)/2
//   m even: integral of |grad^m u|^{p-2} (L^k u)(L^k phi),       k = m/2
// over V, or over the closure of dom when dom is given (iterated Laplacians
// are still formed on the whole stored graph, which is what makes states
// that vanish outside the domain behave as zero-extended).
double poly_pairing(const WeightedGraph& g, unsigned m, double p, const VertexFunction& u,
                    const VertexFunction& phi, const Domain* dom = nullptr,
                    double eps = 0.0);

}  // namespace polylap
