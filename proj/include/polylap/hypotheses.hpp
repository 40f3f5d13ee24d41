#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polylap/instance.hpp"
#include "polylap/spaces.hpp"

namespace polylap {

// Search plan for the witness-radius scans. Radii walk a log grid from
// radius_lo to radius_hi with per_decade points per factor of ten; each
// radius is screened with `directions` equally spaced directions, the worst
// direction is sharpened by golden-section search, and accepted witnesses are
// re-verified on an independent verify_directions grid.
struct WitnessPlan {
    double radius_lo = 1e-2;
    double radius_hi = 1e8;
    int per_decade = 32;
    int directions = 256;
    int verify_directions = 4096;
    int refine_iters = 48;
    int count = 3;
    // spacing of the increasing target ladder used by the Dirichlet
    // high-side condition, which bounds a raw integral instead of a ratio
    double ladder_rung = 0.01;
};

struct SmallnessReport {
    bool pass = false;
    // sub-(p,q) coupling weights against the inverse embedding constants:
    // lhs1 = ((pq-q)/p) sup f2 + sup f4, rhs1 = 1/K_q^q (or 1/C_q^q),
    // lhs2 = sup f1 + sup f2,            rhs2 = 1/K_p^p (or 1/C_p^p)
    double lhs1 = 0.0, rhs1 = 0.0, margin1 = 0.0;
    double lhs2 = 0.0, rhs2 = 0.0, margin2 = 0.0;
    double f_at_zero = 0.0;  // integral of F(x, 0, 0); must vanish
    bool zero_ok = false;
    std::string formula_variant;
};

struct Thresholds {
    // high side: the ratio must exceed t_high (finite mode); Dirichlet mode
    // instead demands raw integrals beyond an increasing ladder and leaves
    // t_high NaN with high_is_ladder set
    double t_high = 0.0;
    bool high_is_ladder = false;
    // low side: the ratio must drop below t_low = min(low_first, low_second)
    double t_low = 0.0;
    double low_first = 0.0, low_second = 0.0;
};

struct Witness {
    double radius = 0.0;
    double value = 0.0;      // attained directional inf or sup
    double threshold = 0.0;  // bound it was measured against
    double margin = 0.0;     // positive by construction
    double worst_a = 0.0, worst_b = 0.0;  // direction attaining the extreme
};

struct WitnessLadder {
    std::vector<Witness> witnesses;
    bool confirmed = false;  // the requested count was reached
    double scan_limit = 0.0;
    std::string note;  // reason when not confirmed
};

struct HypothesisReport {
    SmallnessReport smallness;
    Thresholds thresholds;
    WitnessLadder high;  // radii R_1 < R_2 < ... (energy grows on spheres)
    WitnessLadder low;   // radii r_1 < r_2 < ... (energy dips on slabs)
    bool interleaved = false;  // R_1 < r_1 < R_2 < r_2 < ...
    bool all_pass = false;
    std::string ratio_convention = "measure_averaged";
    std::vector<std::string> claim_notes;
};

// Directional ratio of the nonlinearity against the constant pair (a, b):
// integral_F(a, b) / ((|a|^p + |b|^q) * volume). Averaging by the volume
// makes F = |a|^p + |b|^q come out exactly 1 in every direction.
double witness_ratio(const ProblemInstance& inst, double a, double b);

// Coupling-strength check. Requires the growth envelope; the constants come
// from embedding_constants(inst, variant).
SmallnessReport check_smallness(const ProblemInstance& inst,
                                const std::string& variant = "example51");

// The two comparison bounds for the oscillation checks. Requires the growth
// envelope (the low threshold integrates the f_i columns).
Thresholds rhs_thresholds(const ProblemInstance& inst);

// First `count` radii on the scan grid whose directional inf-ratio exceeds
// t_high (finite mode) or whose raw integral inf climbs the ladder
// (Dirichlet). Failure to find them is reported, not thrown.
WitnessLadder find_witness_R(const ProblemInstance& inst, int count,
                             const WitnessPlan& plan = {});

// First `count` radii whose directional sup-ratio drops below t_low.
WitnessLadder find_witness_r(const ProblemInstance& inst, int count,
                             const WitnessPlan& plan = {});

// Full verification: smallness, thresholds, and one ascending radius scan
// that hunts R_1, r_1, R_2, r_2, ... alternately so the reported ladders
// interleave by construction. Recognized entries of `claims` are recomputed
// and discrepancies beyond max(0.005, 1% of claim) are noted, never trusted.
HypothesisReport check_hypotheses(
    const ProblemInstance& inst, const WitnessPlan& plan = {},
    const std::string& variant = "example51",
    const std::map<std::string, double>* claims = nullptr);

}  // namespace polylap
