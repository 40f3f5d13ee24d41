#pragma once

#include "polylap/calculus.hpp"
#include "polylap/instance.hpp"

namespace polylap {

struct PhiParts {
    double semin_u = 0.0;  // (1/p) int |grad^{m1} u|^p
    double pot_u = 0.0;    // (1/p) int h1 |u|^p        (finite mode only)
    double semin_v = 0.0;  // (1/q) int |grad^{m2} v|^q
    double pot_v = 0.0;    // (1/q) int h2 |v|^q        (finite mode only)
    double f_int = 0.0;    // int F(x, u, v)
    double total() const { return semin_u + pot_u + semin_v + pot_v - f_int; }
};

// The energy. Finite mode integrates everything over V; Dirichlet mode
// integrates the seminorm parts over the closure of Omega, drops the
// potential terms, integrates F over Omega, and requires states to vanish
// outside Omega.
PhiParts phi_parts(const ProblemInstance& inst, const StatePair& s);
double phi(const ProblemInstance& inst, const StatePair& s);

// Coordinate gradient of phi: g.u(x) = d phi / d u(x), assembled as the weak
// pairing against the indicator of x plus the potential and coupling terms.
// Entries outside the free region are zero. First-order components take a
// closed form through the p-Laplacian instead of n separate pairings.
StatePair grad_phi(const ProblemInstance& inst, const StatePair& s);

// Reference assembly that always pairs against each coordinate indicator,
// with no closed-form shortcut. grad_phi agrees with this up to rounding.
StatePair grad_phi_pairing(const ProblemInstance& inst, const StatePair& s);

// Strong-form defect: sqrt of the sum over free vertices of
// (g.u/mu)^2 + (g.v/mu)^2. Dividing by mu turns the coordinate gradient into
// the pointwise operator equation residual, so the value is mesh-scale-free.
double residual(const ProblemInstance& inst, const StatePair& s);
double residual_of_grad(const ProblemInstance& inst, const StatePair& grad);

// |t|^{l-2} t with the convention 0 at t = 0.
double signed_power(double t, double l);

}  // namespace polylap
