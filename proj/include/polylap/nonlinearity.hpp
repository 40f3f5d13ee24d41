#pragma once

#include <memory>
#include <string>
#include <vector>

#include "polylap/expr.hpp"
#include "polylap/graph.hpp"

namespace polylap {

struct FValue {
    double f = 0.0;
    double fu = 0.0;
    double fv = 0.0;
};

// The coupling term F(x, u, v) together with its partial derivatives.
// Builtins:
//   "zero"       F = 0
//   "example51"  F = (u^2 + |v|^3) sin(ln(u^2 + |v|^3 + 1))
// Expression-backed instances may reference per-vertex coefficients; bind()
// resolves those names against graph attributes once, up front, so unknown
// identifiers surface at load time rather than mid-solve.
class Nonlinearity {
public:
    Nonlinearity();  // zero

    static Nonlinearity builtin(const std::string& name);
    static Nonlinearity expression(const std::string& src);

    void bind(const WeightedGraph& g);
    bool bound() const;

    // True when F has no per-vertex dependence, which lets integrals over
    // constant states collapse to one evaluation.
    bool uniform() const;

    FValue eval(std::uint32_t x, double u, double v) const;
    double value(std::uint32_t x, double u, double v) const { return eval(x, u, v).f; }

    const std::string& origin() const { return origin_; }

private:
    enum class Kind { Zero, OscillatingLog, Expr };
    Kind kind_ = Kind::Zero;
    std::string origin_ = "builtin:zero";
    std::shared_ptr<const Expression> expr_;
    bool bound_ = false;
    // coefficient columns copied out of the graph at bind time, row-aligned
    // with Expression::coefficients()
    std::vector<std::vector<double>> coef_columns_;
};

// Per-vertex envelope data f1..f4 for the derivative growth bounds
//   |F_u(x, s, t)| <= f1(x) |s|^{p-1} + f2(x) |t|^{(pq-q)/p}
//   |F_v(x, s, t)| <= f3(x) |s|^{(pq-p)/q} + f4(x) |t|^{q-1}.
struct GrowthEnvelope {
    VertexFunction f1, f2, f3, f4;

    const VertexFunction& column(int which) const;
};

struct EnvelopeViolation {
    std::uint32_t vertex;
    double u, v;
    double lhs, rhs;
    int which;  // 1: the F_u bound, 2: the F_v bound
};

struct EnvelopeReport {
    bool ok = true;
    std::uint64_t probes = 0;
    std::vector<EnvelopeViolation> violations;
};

struct ProblemInstance;

// Samples the growth bounds over log-spaced circles (radii up to 1e6, 64
// angles each) plus seeded random points in every radius decade, recording
// up to max_violations counterexamples.
EnvelopeReport check_envelope(const ProblemInstance& inst, std::uint64_t seed = 1,
                              int max_violations = 8);

// integral over V (or Omega in Dirichlet mode) of F(x, a, b) dmu at a fixed
// constant pair (a, b).
double integral_F(const ProblemInstance& inst, double a, double b);

}  // namespace polylap
