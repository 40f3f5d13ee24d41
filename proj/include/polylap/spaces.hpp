#pragma once

#include <string>
#include <utility>

#include "polylap/calculus.hpp"
#include "polylap/instance.hpp"

namespace polylap {

// L^r norm (int |u|^r dmu)^(1/r) over V, or over Omega when dom is given.
// r = infinity gives the sup over the region.
double lr_norm(const WeightedGraph& g, const VertexFunction& u, double r,
               const Domain* dom = nullptr);

enum class WhichH { H1, H2 };

// Whole-graph norm with potential: (int |grad^m u|^l + h |u|^l dmu)^(1/l).
double sobolev_norm(const WeightedGraph& g, const VertexFunction& u, unsigned m, double l,
                    WhichH which);

// Seminorm over the closure of Omega for states vanishing outside Omega:
//   (int_{closure} |grad^m u|^l dmu)^(1/l),
// or with full = true the sum over all orders k = 0..m before the root.
// Nonzero values outside Omega are an error, not silently ignored.
double dirichlet_norm(const WeightedGraph& g, const Domain& dom, const VertexFunction& u,
                      unsigned m, double l, bool full = false);

struct Decomposition {
    double mean = 0.0;
    VertexFunction fluctuation;
};

// u = mean + fluctuation with int fluctuation dmu = 0.
Decomposition decompose(const WeightedGraph& g, const VertexFunction& u);

// Measure averages of the two components over V (or over Omega when given).
std::pair<double, double> project_mean_pair(const WeightedGraph& g, const VertexFunction& u,
                                            const VertexFunction& v,
                                            const Domain* dom = nullptr);

// Raised when no closed-form constant is available for the requested regime
// (Dirichlet mode with operator order above 1).
struct UnsupportedFormula : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed-form embedding and comparison constants for one instance.
//
// Finite mode (per-space potentials):
//   d_l   = (mu_min h_min)^(-1/l)          sup-norm embedding factor
//   K_l   by formula variant:
//     "example51": K_p = vol^{1/q} / (mu_min h1_min)^{1/p}
//                  K_q = vol^{1/q} / (mu_min h2_min)^{1/p}
//     "lemma22":   K_l = (vol / (mu_min h_l,min))^{1/l}
// Dirichlet mode (order 1 only):
//   C_l = (2 mu_max / w_min)^{1/2} (1 + vol) / mu_floor^{1/l}
//   H_l = C_l / (min_{Omega} mu)^{1/l}
// Fields that do not apply to the mode are NaN.
struct EmbeddingConstants {
    std::string formula_variant;
    Mode mode = Mode::Finite;
    double volume = 0.0;  // total measure of V, or of Omega in Dirichlet mode
    double mu_min = 0.0, mu_max = 0.0, mu_floor = 0.0, w_min = 0.0;
    double h1_min = 0.0, h2_min = 0.0;
    double d_p = 0.0, d_q = 0.0;
    double K_p = 0.0, K_q = 0.0, inv_Kp_p = 0.0, inv_Kq_q = 0.0;
    double C_p = 0.0, C_q = 0.0, inv_Cp_p = 0.0, inv_Cq_q = 0.0;
    double H_p = 0.0, H_q = 0.0;
};

EmbeddingConstants embedding_constants(const ProblemInstance& inst,
                                       const std::string& variant = "example51");

}  // namespace polylap
