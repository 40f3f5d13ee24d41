#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polylap/energy.hpp"
#include "polylap/hypotheses.hpp"
#include "polylap/instance.hpp"

namespace polylap {

struct SolverConfig {
    double grad_tol = 1e-8;
    unsigned max_iter = 20000;
    // Armijo line search
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    double step0 = 1.0;
    // disk relaxation grid
    unsigned rings = 12;
    unsigned spokes = 24;
    double smoothing = 0.1;
    // a slab minimizer counts as interior only when the mean pair stays
    // inside the disk by interior_margin_factor times the slab radius
    double interior_margin_factor = 1e-6;
    // echoed into outputs; the bundled algorithms draw nothing random
    std::uint64_t seed = 0;
    unsigned refine_max_iter = 200;
    // a refined minimax point is accepted only if it moved from its seed by
    // at most this factor times max(1, disk radius)
    double refine_displacement_factor = 1.0;
    WitnessPlan witness_plan;
    std::string k_variant = "example51";
};

// Throws std::invalid_argument when tolerances are not positive or the disk
// grid is smaller than 4 x 4.
void check_config(const SolverConfig& cfg);

enum class PointKind { Minimax, LocalMin };

struct IterRecord {
    unsigned iter = 0;
    double phi = 0.0;
    double residual = 0.0;
};

struct CriticalPoint {
    StatePair state;
    double level = 0.0;
    PointKind kind = PointKind::LocalMin;
    double residual = 0.0;
    double witness_radius = 0.0;  // the R_n or r_m the run was driven by
    unsigned iterations = 0;
    bool accepted = false;
    // local minima: mean pair strictly inside the slab disk
    bool interior = false;
    // disk relaxation diagnostics
    bool winding_ok = false;   // outer-ring winding number stayed 1 throughout
    double boundary_sup = 0.0; // max of phi over the frozen boundary ring
    double grid_gap = 0.0;     // smallest mean-pair norm over the final grid
    // refinement: euclidean distance moved from the seed state
    double displacement = 0.0;
    std::string note;  // empty on clean acceptance
    std::vector<IterRecord> history;
};

// Inspection hooks for the disk relaxation, filled when passed to
// minimax_disk. Nodes [boundary_begin, size) are the frozen outer ring.
struct MinimaxTrace {
    std::vector<StatePair> initial_grid;
    std::vector<StatePair> final_grid;
    std::size_t boundary_begin = 0;
    std::vector<int> windings;  // outer-ring winding number, one per iteration
};

// Local minimum over the slab P = {states whose mean pair lies in the closed
// disk of radius r}: projected gradient descent with Armijo backtracking.
// The projection rescales only the mean pair onto the disk, fluctuations are
// untouched. Starts from the lowest-energy constant state among the origin
// and a ring of probes at radius r. Accepted when the iterate is interior to
// the slab and the residual passes grad_tol; a minimizer pinned to the slab
// boundary is returned non-accepted with interior = false.
CriticalPoint minimize_slab(const ProblemInstance& inst, double r,
                            const SolverConfig& cfg = {});

// Disk-membrane relaxation for a minimax level. A polar grid of node states
// (rings x spokes plus a center) starts as the constant-pair embedding of
// the disk of radius R; the outer ring is frozen for the whole run. Each
// iteration evaluates phi on every node, records the outer-ring winding
// number of the mean-pair map, gives the current max node one Armijo descent
// step (ties broken by lowest node index), then blends every interior node
// with the average of its grid neighbours (weight = smoothing). Stops when
// the max node's residual passes grad_tol or the budget runs out, then hands
// the max node to refine_critical. If the max node ever sits on the frozen
// ring the run stops as a structural failure ("level not above boundary").
CriticalPoint minimax_disk(const ProblemInstance& inst, double R,
                           const SolverConfig& cfg = {},
                           MinimaxTrace* trace = nullptr);

// Gauss-Newton (Levenberg damped) polish of the pointwise residual system
// from a seed state. Success iff the final residual passes grad_tol; on a
// plateau above the tolerance the point is returned non-accepted with the
// plateau value in the note. Seeds with non-finite entries are an error.
CriticalPoint refine_critical(const ProblemInstance& inst, const StatePair& seed,
                              const SolverConfig& cfg = {});

struct SweepRow {
    unsigned index = 0;  // 1-based position within its family
    PointKind kind = PointKind::LocalMin;
    bool have_witness = false;
    CriticalPoint point;  // default-constructed when the witness is missing
    std::string note;     // per-row failure reason, empty when accepted
};

struct SweepResult {
    std::vector<SweepRow> rows;  // minimax rows first, then local minima
    HypothesisReport hypotheses;
    std::vector<std::string> warnings;  // level-ordering violations
    bool all_accepted = false;
};

// Runs the interleaved witness scan, then minimax_disk at R_1..R_n and
// minimize_slab at r_1..r_m. Rows whose witness radius was never found carry
// "witness radius unavailable"; per-row solver failures do not stop the
// sweep. Accepted minimax levels should be nondecreasing and accepted
// local-min levels nonincreasing; violations are reported in warnings.
SweepResult sweep(const ProblemInstance& inst, unsigned n_levels, unsigned m_levels,
                  const SolverConfig& cfg = {});

}  // namespace polylap
