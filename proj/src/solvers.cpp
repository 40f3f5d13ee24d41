#include "polylap/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>

#include "polylap/parallel.hpp"
#include "polylap/spaces.hpp"

namespace polylap {

namespace {

constexpr double TAU = 6.283185307179586476925286766559;
constexpr double MIN_STEP = 1e-14;

std::string fmt_g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::vector<std::uint32_t> free_list(const ProblemInstance& inst) {
    std::vector<std::uint32_t> out;
    out.reserve(inst.free_count());
    for_each_free(inst, [&](std::uint32_t x) { out.push_back(x); });
    return out;
}

std::pair<double, double> mean_pair(const ProblemInstance& inst, const StatePair& s) {
    const Domain* dom = inst.dirichlet() ? &inst.dom() : nullptr;
    return project_mean_pair(inst.g(), s.u, s.v, dom);
}

double mean_norm(const ProblemInstance& inst, const StatePair& s) {
    auto [a, b] = mean_pair(inst, s);
    return std::hypot(a, b);
}

// shift the mean pair back onto the disk of radius r, fluctuations untouched
void project_slab(const ProblemInstance& inst, StatePair& s, double r) {
    auto [a, b] = mean_pair(inst, s);
    const double nm = std::hypot(a, b);
    if (nm <= r) return;
    const double da = a * (r / nm - 1.0);
    const double db = b * (r / nm - 1.0);
    for_each_free(inst, [&](std::uint32_t x) {
        s.u[x] += da;
        s.v[x] += db;
    });
}

double dot_free(const ProblemInstance& inst, const StatePair& a, const StatePair& b) {
    double acc = 0.0;
    for_each_free(inst, [&](std::uint32_t x) { acc += a.u[x] * b.u[x] + a.v[x] * b.v[x]; });
    return acc;
}

// <g, to - from> accumulated on the displacement, safe from cancellation
double dot_move(const ProblemInstance& inst, const StatePair& g, const StatePair& to,
                const StatePair& from) {
    double acc = 0.0;
    for_each_free(inst, [&](std::uint32_t x) {
        acc += g.u[x] * (to.u[x] - from.u[x]) + g.v[x] * (to.v[x] - from.v[x]);
    });
    return acc;
}

double distance_free(const ProblemInstance& inst, const StatePair& a, const StatePair& b) {
    double acc = 0.0;
    for_each_free(inst, [&](std::uint32_t x) {
        const double du = a.u[x] - b.u[x];
        const double dv = a.v[x] - b.v[x];
        acc += du * du + dv * dv;
    });
    return std::sqrt(acc);
}

StatePair descent_direction(const ProblemInstance& inst, const StatePair& grad) {
    StatePair d{VertexFunction(grad.u.size(), 0.0), VertexFunction(grad.v.size(), 0.0)};
    const WeightedGraph& g = inst.g();
    for_each_free(inst, [&](std::uint32_t x) {
        d.u[x] = -grad.u[x] / g.mu(x);
        d.v[x] = -grad.v[x] / g.mu(x);
    });
    return d;
}

void axpy_free(const ProblemInstance& inst, double t, const StatePair& d, StatePair& s) {
    for_each_free(inst, [&](std::uint32_t x) {
        s.u[x] += t * d.u[x];
        s.v[x] += t * d.v[x];
    });
}

bool all_finite(const StatePair& s) {
    for (double x : s.u)
        if (!std::isfinite(x)) return false;
    for (double x : s.v)
        if (!std::isfinite(x)) return false;
    return true;
}

// dense SPD solve, A row-major n x n, in-place Cholesky; false on breakdown
bool cholesky_solve(std::vector<double>& A, std::vector<double>& b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = A[i * n + j];
            for (std::size_t k = 0; k < j; ++k) sum -= A[i * n + k] * A[j * n + k];
            if (i == j) {
                if (sum <= 0.0) return false;
                A[i * n + i] = std::sqrt(sum);
            } else {
                A[i * n + j] = sum / A[j * n + j];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) sum -= A[i * n + k] * b[k];
        b[i] = sum / A[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double sum = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) sum -= A[k * n + ii] * b[k];
        b[ii] = sum / A[ii * n + ii];
    }
    return true;
}

// pointwise defect vector (grad / mu on the free coordinates), the quantity
// whose euclidean norm is residual()
std::vector<double> defect_vector(const ProblemInstance& inst,
                                  const std::vector<std::uint32_t>& vars,
                                  const StatePair& s) {
    const StatePair g = grad_phi(inst, s);
    const std::size_t k = vars.size();
    std::vector<double> r(2 * k);
    for (std::size_t j = 0; j < k; ++j) {
        const double mu = inst.g().mu(vars[j]);
        r[j] = g.u[vars[j]] / mu;
        r[k + j] = g.v[vars[j]] / mu;
    }
    return r;
}

double norm2(const std::vector<double>& r) {
    double acc = 0.0;
    for (double x : r) acc += x * x;
    return std::sqrt(acc);
}

}  // namespace

void check_config(const SolverConfig& cfg) {
    if (!(cfg.grad_tol > 0.0) || !(cfg.armijo_c > 0.0) || !(cfg.step0 > 0.0) ||
        !(cfg.interior_margin_factor > 0.0))
        throw std::invalid_argument("solver tolerances must be positive");
    if (!(cfg.backtrack > 0.0) || !(cfg.backtrack < 1.0))
        throw std::invalid_argument("backtrack factor must lie in (0, 1)");
    if (cfg.max_iter == 0 || cfg.refine_max_iter == 0)
        throw std::invalid_argument("iteration budgets must be positive");
    if (cfg.rings < 4 || cfg.spokes < 4)
        throw std::invalid_argument("disk grid must be at least 4 x 4");
    if (!(cfg.smoothing >= 0.0) || !(cfg.smoothing < 1.0))
        throw std::invalid_argument("smoothing weight must lie in [0, 1)");
}

CriticalPoint minimize_slab(const ProblemInstance& inst, double r, const SolverConfig& cfg) {
    check_config(cfg);
    check_instance(inst);
    if (!std::isfinite(r) || r <= 0.0) throw std::invalid_argument("slab radius must be positive");

    CriticalPoint out;
    out.kind = PointKind::LocalMin;
    out.witness_radius = r;

    // lowest-energy constant start: the origin plus a ring of probes
    StatePair x = inst.zero_state();
    double phi_x = phi(inst, x);
    constexpr int PROBES = 64;
    for (int k = 0; k < PROBES; ++k) {
        const double th = TAU * k / PROBES;
        StatePair cand = inst.constant_state(r * std::cos(th), r * std::sin(th));
        const double val = phi(inst, cand);
        if (val < phi_x) {
            phi_x = val;
            x = std::move(cand);
        }
    }

    const double eps_int = cfg.interior_margin_factor * r;
    StatePair g = grad_phi(inst, x);
    double res = residual_of_grad(inst, g);
    out.history.push_back({0, phi_x, res});

    bool stopped = false;
    unsigned it = 0;
    while (!stopped) {
        const bool interior_now = mean_norm(inst, x) < r - eps_int;
        if (res <= cfg.grad_tol) {
            if (!interior_now) out.note = "pinned to the slab boundary";
            break;
        }
        if (it >= cfg.max_iter) {
            out.note = "iteration budget exhausted";
            break;
        }
        const StatePair d = descent_direction(inst, g);
        double t = cfg.step0;
        bool moved = false;
        while (t >= MIN_STEP) {
            StatePair trial = x;
            axpy_free(inst, t, d, trial);
            project_slab(inst, trial, r);
            const double gain = dot_move(inst, g, trial, x);
            if (gain < 0.0) {
                const double phi_t = phi(inst, trial);
                if (phi_t <= phi_x + cfg.armijo_c * gain) {
                    x = std::move(trial);
                    phi_x = phi_t;
                    moved = true;
                    break;
                }
            }
            t *= cfg.backtrack;
        }
        if (!moved) {
            out.note = interior_now ? "descent stalled" : "pinned to the slab boundary";
            stopped = true;
        } else {
            ++it;
            g = grad_phi(inst, x);
            res = residual_of_grad(inst, g);
            out.history.push_back({it, phi_x, res});
        }
    }

    out.state = std::move(x);
    out.level = phi_x;
    out.iterations = it;
    out.interior = mean_norm(inst, out.state) < r - eps_int;
    out.residual = residual(inst, out.state);
    out.accepted = out.interior && out.residual <= cfg.grad_tol && out.note.empty();
    if (!out.accepted && out.note.empty()) out.note = "residual above tolerance";
    return out;
}

CriticalPoint refine_critical(const ProblemInstance& inst, const StatePair& seed,
                              const SolverConfig& cfg) {
    check_config(cfg);
    check_instance(inst);
    if (seed.u.size() != inst.n() || seed.v.size() != inst.n())
        throw std::invalid_argument("seed state size does not match the graph");
    if (!all_finite(seed)) throw std::invalid_argument("seed contains a non-finite entry");

    const std::vector<std::uint32_t> vars = free_list(inst);
    const std::size_t k = vars.size();
    const std::size_t dim = 2 * k;

    StatePair x = seed;
    std::vector<double> rvec = defect_vector(inst, vars, x);
    double rn = norm2(rvec);

    CriticalPoint out;
    out.kind = PointKind::LocalMin;
    out.history.push_back({0, phi(inst, x), rn});

    const double polish = std::min(cfg.grad_tol, 1e-13);
    double lambda = 1e-3;
    bool plateau = false;
    unsigned it = 0;

    auto write_coord = [&](StatePair& s, std::size_t j, double val) {
        if (j < k)
            s.u[vars[j]] = val;
        else
            s.v[vars[j - k]] = val;
    };
    auto read_coord = [&](const StatePair& s, std::size_t j) {
        return j < k ? s.u[vars[j]] : s.v[vars[j - k]];
    };

    while (rn > polish && it < cfg.refine_max_iter && !plateau) {
        // central-difference Jacobian of the defect vector
        std::vector<double> J(dim * dim);
        for (std::size_t j = 0; j < dim; ++j) {
            const double xj = read_coord(x, j);
            const double h = 1e-6 * (1.0 + std::abs(xj));
            StatePair probe = x;
            write_coord(probe, j, xj + h);
            const std::vector<double> rp = defect_vector(inst, vars, probe);
            write_coord(probe, j, xj - h);
            const std::vector<double> rm = defect_vector(inst, vars, probe);
            for (std::size_t i = 0; i < dim; ++i) J[i * dim + j] = (rp[i] - rm[i]) / (2.0 * h);
        }
        std::vector<double> JtJ(dim * dim, 0.0), Jtr(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t a = 0; a < dim; ++a) {
                Jtr[a] += J[i * dim + a] * rvec[i];
                for (std::size_t b = 0; b <= a; ++b) JtJ[a * dim + b] += J[i * dim + a] * J[i * dim + b];
            }
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = a + 1; b < dim; ++b) JtJ[a * dim + b] = JtJ[b * dim + a];

        bool improved = false;
        while (!improved) {
            std::vector<double> M = JtJ;
            for (std::size_t a = 0; a < dim; ++a)
                M[a * dim + a] += lambda * std::max(JtJ[a * dim + a], 1e-12);
            std::vector<double> delta(dim);
            for (std::size_t a = 0; a < dim; ++a) delta[a] = -Jtr[a];
            if (cholesky_solve(M, delta, dim)) {
                StatePair trial = x;
                for (std::size_t j = 0; j < dim; ++j)
                    write_coord(trial, j, read_coord(x, j) + delta[j]);
                const std::vector<double> rt = defect_vector(inst, vars, trial);
                const double rtn = norm2(rt);
                if (rtn < rn) {
                    x = std::move(trial);
                    rvec = rt;
                    rn = rtn;
                    lambda = std::max(lambda * 0.3, 1e-14);
                    improved = true;
                    break;
                }
            }
            lambda *= 10.0;
            if (lambda > 1e14) break;
        }
        if (!improved) {
            plateau = true;
            break;
        }
        ++it;
        out.history.push_back({it, phi(inst, x), rn});
    }

    out.state = std::move(x);
    out.level = phi(inst, out.state);
    out.iterations = it;
    out.displacement = distance_free(inst, out.state, seed);
    out.residual = residual(inst, out.state);
    out.accepted = out.residual <= cfg.grad_tol;
    if (!out.accepted)
        out.note = plateau ? "residual plateau at " + fmt_g(out.residual)
                           : "iteration budget exhausted";
    return out;
}

namespace {

struct DiskGrid {
    std::vector<StatePair> node;
    std::vector<std::vector<std::size_t>> nbr;  // interior nodes only
    std::size_t boundary_begin = 0;
    unsigned rings = 0, spokes = 0;
};

DiskGrid build_grid(const ProblemInstance& inst, double R, const SolverConfig& cfg) {
    DiskGrid gr;
    gr.rings = cfg.rings;
    gr.spokes = cfg.spokes;
    const std::size_t total = 1 + std::size_t(cfg.rings) * cfg.spokes;
    gr.boundary_begin = 1 + std::size_t(cfg.rings - 1) * cfg.spokes;
    gr.node.reserve(total);
    gr.node.push_back(inst.constant_state(0.0, 0.0));
    for (unsigned ring = 1; ring <= cfg.rings; ++ring) {
        const double rho = R * ring / cfg.rings;
        for (unsigned j = 0; j < cfg.spokes; ++j) {
            const double th = TAU * j / cfg.spokes;
            gr.node.push_back(inst.constant_state(rho * std::cos(th), rho * std::sin(th)));
        }
    }
    auto id = [&](unsigned ring, unsigned j) -> std::size_t {
        return ring == 0 ? 0 : 1 + std::size_t(ring - 1) * cfg.spokes + (j % cfg.spokes);
    };
    gr.nbr.resize(gr.boundary_begin);
    for (unsigned j = 0; j < cfg.spokes; ++j) gr.nbr[0].push_back(id(1, j));
    for (unsigned ring = 1; ring < cfg.rings; ++ring)
        for (unsigned j = 0; j < cfg.spokes; ++j) {
            auto& list = gr.nbr[id(ring, j)];
            list.push_back(id(ring, j + 1));
            list.push_back(id(ring, j + cfg.spokes - 1));
            list.push_back(id(ring - 1, j));
            list.push_back(id(ring + 1, j));
        }
    return gr;
}

int outer_winding(const ProblemInstance& inst, const DiskGrid& gr) {
    const std::size_t nb = gr.node.size() - gr.boundary_begin;
    std::vector<double> ang(nb);
    for (std::size_t j = 0; j < nb; ++j) {
        auto [a, b] = mean_pair(inst, gr.node[gr.boundary_begin + j]);
        ang[j] = std::atan2(b, a);
    }
    double total = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
        double d = ang[(j + 1) % nb] - ang[j];
        while (d > TAU / 2) d -= TAU;
        while (d < -TAU / 2) d += TAU;
        total += d;
    }
    return int(std::lround(total / TAU));
}

double smallest_mean_norm(const ProblemInstance& inst, const DiskGrid& gr) {
    double best = std::numeric_limits<double>::infinity();
    for (const StatePair& s : gr.node) best = std::min(best, mean_norm(inst, s));
    return best;
}

}  // namespace

CriticalPoint minimax_disk(const ProblemInstance& inst, double R, const SolverConfig& cfg,
                           MinimaxTrace* trace) {
    check_config(cfg);
    check_instance(inst);
    if (!std::isfinite(R) || R <= 0.0) throw std::invalid_argument("disk radius must be positive");

    DiskGrid gr = build_grid(inst, R, cfg);
    if (trace) {
        trace->initial_grid = gr.node;
        trace->boundary_begin = gr.boundary_begin;
        trace->windings.clear();
    }

    CriticalPoint out;
    out.kind = PointKind::Minimax;
    out.witness_radius = R;
    out.winding_ok = true;
    out.boundary_sup = -std::numeric_limits<double>::infinity();

    std::vector<double> phi_vec(gr.node.size());
    enum { Running, Converged, Structural, Budget } exit_kind = Running;
    std::size_t kmax = 0;
    unsigned it = 0;

    while (exit_kind == Running) {
        parallel_for(gr.node.size(),
                     [&](std::size_t i) { phi_vec[i] = phi(inst, gr.node[i]); });
        const int w = outer_winding(inst, gr);
        if (trace) trace->windings.push_back(w);
        if (w != 1) out.winding_ok = false;
        if (it == 0)
            for (std::size_t i = gr.boundary_begin; i < gr.node.size(); ++i)
                out.boundary_sup = std::max(out.boundary_sup, phi_vec[i]);

        kmax = 0;
        for (std::size_t i = 1; i < gr.node.size(); ++i)
            if (phi_vec[i] > phi_vec[kmax]) kmax = i;
        if (kmax >= gr.boundary_begin) {
            exit_kind = Structural;
            break;
        }

        const StatePair g = grad_phi(inst, gr.node[kmax]);
        const double res = residual_of_grad(inst, g);
        out.history.push_back({it, phi_vec[kmax], res});
        if (res <= cfg.grad_tol) {
            exit_kind = Converged;
            break;
        }
        if (it + 1 >= cfg.max_iter) {
            exit_kind = Budget;
            break;
        }

        const StatePair d = descent_direction(inst, g);
        const double gTd = dot_free(inst, g, d);
        double t = cfg.step0;
        while (t >= MIN_STEP) {
            StatePair trial = gr.node[kmax];
            axpy_free(inst, t, d, trial);
            const double phi_t = phi(inst, trial);
            if (phi_t <= phi_vec[kmax] + cfg.armijo_c * t * gTd) {
                gr.node[kmax] = std::move(trial);
                break;
            }
            t *= cfg.backtrack;
        }

        if (cfg.smoothing > 0.0) {
            std::vector<StatePair> next = gr.node;
            for (std::size_t i = 0; i < gr.boundary_begin; ++i) {
                const auto& list = gr.nbr[i];
                StatePair avg = inst.zero_state();
                for (std::size_t nb : list) {
                    for (std::size_t y = 0; y < avg.u.size(); ++y) {
                        avg.u[y] += gr.node[nb].u[y];
                        avg.v[y] += gr.node[nb].v[y];
                    }
                }
                const double inv = 1.0 / double(list.size());
                for (std::size_t y = 0; y < avg.u.size(); ++y) {
                    next[i].u[y] = (1.0 - cfg.smoothing) * gr.node[i].u[y] +
                                   cfg.smoothing * inv * avg.u[y];
                    next[i].v[y] = (1.0 - cfg.smoothing) * gr.node[i].v[y] +
                                   cfg.smoothing * inv * avg.v[y];
                }
            }
            gr.node = std::move(next);
        }
        ++it;
    }

    out.iterations = it;
    out.grid_gap = smallest_mean_norm(inst, gr);
    if (trace) trace->final_grid = gr.node;

    if (exit_kind == Structural) {
        out.state = gr.node[kmax];
        out.level = phi_vec[kmax];
        out.residual = residual(inst, out.state);
        out.history.push_back({it, out.level, out.residual});
        out.accepted = false;
        out.note = "level not above boundary";
        return out;
    }

    CriticalPoint ref = refine_critical(inst, gr.node[kmax], cfg);
    out.state = std::move(ref.state);
    out.level = ref.level;
    out.residual = ref.residual;
    out.displacement = ref.displacement;
    for (const IterRecord& rec : ref.history)
        out.history.push_back({it + rec.iter, rec.phi, rec.residual});

    const double cap = cfg.refine_displacement_factor * std::max(1.0, R);
    if (!ref.accepted)
        out.note = ref.note;
    else if (out.displacement > cap)
        out.note = "refined point drifted from the disk";
    else if (!(out.level > out.boundary_sup))
        out.note = "level not above boundary";
    out.accepted = out.note.empty();
    return out;
}

SweepResult sweep(const ProblemInstance& inst, unsigned n_levels, unsigned m_levels,
                  const SolverConfig& cfg) {
    check_config(cfg);
    check_instance(inst);

    SweepResult out;
    if (n_levels == 0 && m_levels == 0) {
        out.all_accepted = true;
        return out;
    }

    WitnessPlan plan = cfg.witness_plan;
    plan.count = int(std::max(n_levels, m_levels));
    out.hypotheses = check_hypotheses(inst, plan, cfg.k_variant);

    auto run_family = [&](unsigned levels, PointKind kind, const WitnessLadder& ladder) {
        for (unsigned i = 1; i <= levels; ++i) {
            SweepRow row;
            row.index = i;
            row.kind = kind;
            if (ladder.witnesses.size() >= i) {
                row.have_witness = true;
                const double radius = ladder.witnesses[i - 1].radius;
                row.point = kind == PointKind::Minimax ? minimax_disk(inst, radius, cfg)
                                                       : minimize_slab(inst, radius, cfg);
                row.note = row.point.note;
            } else {
                row.note = "witness radius unavailable";
            }
            out.rows.push_back(std::move(row));
        }
    };
    run_family(n_levels, PointKind::Minimax, out.hypotheses.high);
    run_family(m_levels, PointKind::LocalMin, out.hypotheses.low);

    auto ordering_check = [&](PointKind kind, bool nondecreasing, const char* what) {
        const SweepRow* prev = nullptr;
        for (const SweepRow& row : out.rows) {
            if (row.kind != kind || !row.point.accepted) continue;
            if (prev) {
                const double a = prev->point.level, b = row.point.level;
                const double slack = 1e-12 * (1.0 + std::abs(a));
                const bool bad = nondecreasing ? b < a - slack : b > a + slack;
                if (bad)
                    out.warnings.push_back(std::string(what) + " level " +
                                           std::to_string(row.index) + " breaks the expected order");
            }
            prev = &row;
        }
    };
    ordering_check(PointKind::Minimax, true, "minimax");
    ordering_check(PointKind::LocalMin, false, "local-min");

    out.all_accepted = !out.rows.empty();
    for (const SweepRow& row : out.rows)
        if (!row.point.accepted) out.all_accepted = false;
    return out;
}

}  // namespace polylap
