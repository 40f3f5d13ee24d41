#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polylap/hypotheses.hpp"
#include "polylap/problem_io.hpp"
#include "polylap/solvers.hpp"
#include "polylap/spaces.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace polylap;

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_INVALID = 1;      // bad file, bad instance, bad arguments
constexpr int EXIT_UNCONFIRMED = 2;  // hypotheses or witnesses not confirmed
constexpr int EXIT_SOLVER = 3;       // a solve ran and did not produce an
                                     // accepted critical point

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string fmt_full(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text(const fs::path& dir, const std::string& name, const std::string& text) {
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
    std::printf("wrote %s\n", p.string().c_str());
}

const char* kind_name(PointKind k) {
    return k == PointKind::Minimax ? "minimax" : "local-min";
}

std::string describe(const std::string& code) {
    static const std::map<std::string, std::string> text{
        {"mu_floor_nonpositive", "nonpositive measure floor"},
        {"mu_not_finite", "non-finite measure"},
        {"mu_below_floor", "measure below the recorded floor"},
        {"h1_missing", "h1 missing"},
        {"h1_nonpositive", "nonpositive h1"},
        {"h2_missing", "h2 missing"},
        {"h2_nonpositive", "nonpositive h2"},
        {"attribute_not_finite", "non-finite attribute"},
        {"weight_nonpositive", "nonpositive weight"},
        {"self_loop", "self loop"},
        {"duplicate_edge", "duplicate edge"},
        {"disconnected", "graph not connected"},
    };
    auto it = text.find(code);
    return it == text.end() ? code : it->second;
}

ordered_json constants_json(const EmbeddingConstants& c) {
    ordered_json j;
    j["formula_variant"] = c.formula_variant;
    j["mode"] = c.mode == Mode::Dirichlet ? "dirichlet" : "finite";
    j["volume"] = c.volume;
    j["mu_min"] = c.mu_min;
    j["mu_max"] = c.mu_max;
    j["mu_floor"] = c.mu_floor;
    j["w_min"] = c.w_min;
    j["h1_min"] = c.h1_min;
    j["h2_min"] = c.h2_min;
    j["d_p"] = c.d_p;
    j["d_q"] = c.d_q;
    j["K_p"] = c.K_p;
    j["K_q"] = c.K_q;
    j["inv_Kp_p"] = c.inv_Kp_p;
    j["inv_Kq_q"] = c.inv_Kq_q;
    j["C_p"] = c.C_p;
    j["C_q"] = c.C_q;
    j["inv_Cp_p"] = c.inv_Cp_p;
    j["inv_Cq_q"] = c.inv_Cq_q;
    j["H_p"] = c.H_p;
    j["H_q"] = c.H_q;
    return j;
}

ordered_json ladder_json(const WitnessLadder& lad) {
    ordered_json ws = ordered_json::array();
    for (const Witness& w : lad.witnesses) {
        ordered_json jw;
        jw["radius"] = w.radius;
        jw["value"] = w.value;
        jw["threshold"] = w.threshold;
        jw["margin"] = w.margin;
        jw["worst_a"] = w.worst_a;
        jw["worst_b"] = w.worst_b;
        ws.push_back(std::move(jw));
    }
    ordered_json j;
    j["confirmed"] = lad.confirmed;
    j["witnesses"] = std::move(ws);
    j["scan_limit"] = lad.scan_limit;
    j["note"] = lad.note;
    return j;
}

ordered_json report_json(const HypothesisReport& rep, const EmbeddingConstants& consts) {
    ordered_json j;
    j["constants"] = constants_json(consts);
    ordered_json js;
    js["pass"] = rep.smallness.pass;
    js["lhs1"] = rep.smallness.lhs1;
    js["rhs1"] = rep.smallness.rhs1;
    js["margin1"] = rep.smallness.margin1;
    js["lhs2"] = rep.smallness.lhs2;
    js["rhs2"] = rep.smallness.rhs2;
    js["margin2"] = rep.smallness.margin2;
    js["f_at_zero"] = rep.smallness.f_at_zero;
    js["zero_ok"] = rep.smallness.zero_ok;
    j["smallness"] = std::move(js);
    ordered_json jt;
    jt["t_high"] = rep.thresholds.t_high;  // NaN serializes as null
    jt["high_is_ladder"] = rep.thresholds.high_is_ladder;
    jt["t_low"] = rep.thresholds.t_low;
    jt["low_first"] = rep.thresholds.low_first;
    jt["low_second"] = rep.thresholds.low_second;
    j["thresholds"] = std::move(jt);
    j["high"] = ladder_json(rep.high);
    j["low"] = ladder_json(rep.low);
    j["interleaved"] = rep.interleaved;
    j["all_pass"] = rep.all_pass;
    j["ratio_convention"] = rep.ratio_convention;
    j["claim_notes"] = rep.claim_notes;
    return j;
}

ordered_json config_json(const SolverConfig& cfg) {
    ordered_json j;
    j["grad_tol"] = cfg.grad_tol;
    j["max_iter"] = cfg.max_iter;
    j["armijo_c"] = cfg.armijo_c;
    j["backtrack"] = cfg.backtrack;
    j["step0"] = cfg.step0;
    j["rings"] = cfg.rings;
    j["spokes"] = cfg.spokes;
    j["smoothing"] = cfg.smoothing;
    j["interior_margin_factor"] = cfg.interior_margin_factor;
    j["seed"] = cfg.seed;
    j["refine_max_iter"] = cfg.refine_max_iter;
    j["refine_displacement_factor"] = cfg.refine_displacement_factor;
    j["k_variant"] = cfg.k_variant;
    ordered_json jp;
    jp["radius_lo"] = cfg.witness_plan.radius_lo;
    jp["radius_hi"] = cfg.witness_plan.radius_hi;
    jp["per_decade"] = cfg.witness_plan.per_decade;
    jp["directions"] = cfg.witness_plan.directions;
    jp["verify_directions"] = cfg.witness_plan.verify_directions;
    jp["refine_iters"] = cfg.witness_plan.refine_iters;
    jp["count"] = cfg.witness_plan.count;
    jp["ladder_rung"] = cfg.witness_plan.ladder_rung;
    j["witness_plan"] = std::move(jp);
    return j;
}

ordered_json point_json(const ProblemInstance& inst, const CriticalPoint& cp) {
    ordered_json j;
    j["kind"] = kind_name(cp.kind);
    j["witness_radius"] = cp.witness_radius;
    j["level"] = cp.level;
    j["residual"] = cp.residual;
    j["iterations"] = cp.iterations;
    j["accepted"] = cp.accepted;
    if (cp.kind == PointKind::LocalMin) {
        j["interior"] = cp.interior;
    } else {
        j["winding_ok"] = cp.winding_ok;
        j["boundary_sup"] = cp.boundary_sup;
        j["grid_gap"] = cp.grid_gap;
        j["displacement"] = cp.displacement;
    }
    j["note"] = cp.note;
    const WeightedGraph& g = inst.g();
    ordered_json ids = ordered_json::array();
    ordered_json u = ordered_json::array();
    ordered_json v = ordered_json::array();
    for (std::uint32_t x = 0; x < g.size(); ++x) {
        ids.push_back(g.id(x));
        u.push_back(cp.state.u[x]);
        v.push_back(cp.state.v[x]);
    }
    ordered_json st;
    st["ids"] = std::move(ids);
    st["u"] = std::move(u);
    st["v"] = std::move(v);
    j["state"] = std::move(st);
    return j;
}

std::string history_csv(const std::vector<IterRecord>& history) {
    std::string out = "iter,phi,residual\n";
    char buf[96];
    for (const IterRecord& r : history) {
        std::snprintf(buf, sizeof buf, "%u,%.17g,%.17g\n", r.iter, r.phi, r.residual);
        out += buf;
    }
    return out;
}

void print_report(const HypothesisReport& rep, const EmbeddingConstants& c) {
    const bool dirichlet = c.mode == Mode::Dirichlet;
    std::printf("variant %s, %s mode, volume %s\n", c.formula_variant.c_str(),
                dirichlet ? "dirichlet" : "finite", fmt(c.volume).c_str());
    std::printf("d_p = %s, d_q = %s\n", fmt(c.d_p).c_str(), fmt(c.d_q).c_str());
    if (dirichlet)
        std::printf("1/C_p^p = %s, 1/C_q^q = %s\n", fmt(c.inv_Cp_p).c_str(),
                    fmt(c.inv_Cq_q).c_str());
    else
        std::printf("1/K_p^p = %s, 1/K_q^q = %s\n", fmt(c.inv_Kp_p).c_str(),
                    fmt(c.inv_Kq_q).c_str());
    const SmallnessReport& s = rep.smallness;
    std::printf("smallness: lhs1 %s < rhs1 %s and lhs2 %s < rhs2 %s, F(0,0) integral %s: %s\n",
                fmt(s.lhs1).c_str(), fmt(s.rhs1).c_str(), fmt(s.lhs2).c_str(),
                fmt(s.rhs2).c_str(), fmt(s.f_at_zero).c_str(),
                s.pass ? "pass" : "FAIL");
    if (rep.thresholds.high_is_ladder)
        std::printf("thresholds: raw-integral ladder on the high side, t_low %s\n",
                    fmt(rep.thresholds.t_low).c_str());
    else
        std::printf("thresholds: t_high %s, t_low %s\n",
                    fmt(rep.thresholds.t_high).c_str(), fmt(rep.thresholds.t_low).c_str());
    auto print_ladder = [](const char* name, const WitnessLadder& lad) {
        std::printf("%s ladder: %s", name, lad.confirmed ? "confirmed" : "not confirmed");
        if (!lad.note.empty()) std::printf(" (%s)", lad.note.c_str());
        std::printf("\n");
        int i = 0;
        for (const Witness& w : lad.witnesses)
            std::printf("  #%d radius %s, value %s vs threshold %s\n", ++i,
                        fmt(w.radius).c_str(), fmt(w.value).c_str(),
                        fmt(w.threshold).c_str());
    };
    print_ladder("high", rep.high);
    print_ladder("low", rep.low);
    std::printf("interleaved: %s\n", rep.interleaved ? "yes" : "no");
    for (const std::string& note : rep.claim_notes)
        std::printf("claim note: %s\n", note.c_str());
    std::printf("hypotheses: %s\n", rep.all_pass ? "CONFIRMED" : "NOT CONFIRMED");
}

int cmd_validate(const std::string& path) {
    ProblemFile pf;
    try {
        pf = load_problem(path);
    } catch (const std::exception& e) {
        std::printf("parse error: %s\n", e.what());
        return EXIT_INVALID;
    }
    int problems = 0;
    for (const Violation& v : pf.instance.g().validate()) {
        std::printf("violation: %s (%s)\n", describe(v.code).c_str(), v.detail.c_str());
        ++problems;
    }
    try {
        check_instance(pf.instance);
    } catch (const std::exception& e) {
        std::printf("instance error: %s\n", e.what());
        ++problems;
    }
    if (problems) {
        std::printf("%d problem(s) found\n", problems);
        return EXIT_INVALID;
    }
    const WeightedGraph& g = pf.instance.g();
    std::printf("ok: %zu vertices, %zu edges, %s mode, volume %s\n", g.size(),
                g.edges().size(), pf.instance.dirichlet() ? "dirichlet" : "finite",
                fmt_full(pf.instance.volume()).c_str());
    return EXIT_OK;
}

int load_checked(const std::string& path, ProblemFile& pf) {
    try {
        pf = load_problem(path);
        check_instance(pf.instance);
    } catch (const std::exception& e) {
        std::printf("error: %s\n", e.what());
        return EXIT_INVALID;
    }
    return EXIT_OK;
}

int cmd_hypotheses(const std::string& path, int count, const SolverConfig& cfg,
                   const std::string& out_dir) {
    ProblemFile pf;
    if (int rc = load_checked(path, pf)) return rc;
    WitnessPlan plan = cfg.witness_plan;
    plan.count = count;
    HypothesisReport rep;
    try {
        rep = check_hypotheses(pf.instance, plan, cfg.k_variant,
                               pf.claims.empty() ? nullptr : &pf.claims);
    } catch (const std::exception& e) {
        std::printf("hypotheses not checkable: %s\n", e.what());
        ordered_json j;
        j["error"] = e.what();
        write_text(out_dir, "hypotheses.json", j.dump(2) + "\n");
        return EXIT_UNCONFIRMED;
    }
    const EmbeddingConstants consts = embedding_constants(pf.instance, cfg.k_variant);
    print_report(rep, consts);
    write_text(out_dir, "hypotheses.json", report_json(rep, consts).dump(2) + "\n");
    return rep.all_pass ? EXIT_OK : EXIT_UNCONFIRMED;
}

int cmd_solve(const std::string& path, const std::string& mode, bool have_radius,
              double radius, const SolverConfig& cfg, const std::string& out_dir) {
    ProblemFile pf;
    if (int rc = load_checked(path, pf)) return rc;
    try {
        check_config(cfg);
    } catch (const std::exception& e) {
        std::printf("error: %s\n", e.what());
        return EXIT_INVALID;
    }
    const bool minimax = mode == "minimax";
    if (!have_radius) {
        WitnessPlan plan = cfg.witness_plan;
        plan.count = 1;
        WitnessLadder lad;
        try {
            lad = minimax ? find_witness_R(pf.instance, 1, plan)
                          : find_witness_r(pf.instance, 1, plan);
        } catch (const std::exception& e) {
            std::printf("cannot derive a radius: %s\n", e.what());
            return EXIT_UNCONFIRMED;
        }
        if (!lad.confirmed) {
            std::printf("no witness radius: %s\n", lad.note.c_str());
            return EXIT_UNCONFIRMED;
        }
        radius = lad.witnesses[0].radius;
        std::printf("using witness radius %s\n", fmt(radius).c_str());
    }
    const CriticalPoint cp = minimax ? minimax_disk(pf.instance, radius, cfg)
                                     : minimize_slab(pf.instance, radius, cfg);
    std::printf("%s at radius %s: level %s, residual %s, %u iteration(s)\n",
                kind_name(cp.kind), fmt(radius).c_str(), fmt(cp.level).c_str(),
                fmt(cp.residual).c_str(), cp.iterations);
    if (!cp.note.empty()) std::printf("note: %s\n", cp.note.c_str());
    std::printf("%s\n", cp.accepted ? "accepted" : "NOT ACCEPTED");
    ordered_json j = point_json(pf.instance, cp);
    j["config"] = config_json(cfg);
    write_text(out_dir, "solution.json", j.dump(2) + "\n");
    write_text(out_dir, "history.csv", history_csv(cp.history));
    return cp.accepted ? EXIT_OK : EXIT_SOLVER;
}

int cmd_sweep(const std::string& path, unsigned n, unsigned m, const SolverConfig& cfg,
              const std::string& out_dir) {
    ProblemFile pf;
    if (int rc = load_checked(path, pf)) return rc;
    try {
        check_config(cfg);
    } catch (const std::exception& e) {
        std::printf("error: %s\n", e.what());
        return EXIT_INVALID;
    }
    SweepResult res;
    try {
        res = sweep(pf.instance, n, m, cfg);
    } catch (const std::exception& e) {
        std::printf("sweep not runnable: %s\n", e.what());
        return EXIT_UNCONFIRMED;
    }

    std::string levels_csv = "index,kind,radius,level,residual,accepted\n";
    std::string minimax_dat, min_dat;
    ordered_json rows = ordered_json::array();
    int exit_code = EXIT_OK;
    for (const SweepRow& row : res.rows) {
        ordered_json jr;
        jr["index"] = row.index;
        jr["kind"] = kind_name(row.kind);
        jr["have_witness"] = row.have_witness;
        if (row.have_witness) jr["point"] = point_json(pf.instance, row.point);
        jr["note"] = row.note;
        rows.push_back(std::move(jr));

        if (row.have_witness) {
            const CriticalPoint& cp = row.point;
            std::printf("%-3u %-9s radius %-12s level %-14s residual %-12s %s\n",
                        row.index, kind_name(row.kind), fmt(cp.witness_radius).c_str(),
                        fmt(cp.level).c_str(), fmt(cp.residual).c_str(),
                        cp.accepted ? "accepted" : ("failed: " + cp.note).c_str());
            levels_csv += std::to_string(row.index) + "," + kind_name(row.kind) + "," +
                          fmt_full(cp.witness_radius) + "," + fmt_full(cp.level) + "," +
                          fmt_full(cp.residual) + "," + (cp.accepted ? "true" : "false") +
                          "\n";
            std::string& dat = row.kind == PointKind::Minimax ? minimax_dat : min_dat;
            dat += std::to_string(row.index) + " " + fmt_full(cp.level) + "\n";
            if (!cp.accepted) exit_code = std::max(exit_code, EXIT_SOLVER);
        } else {
            std::printf("%-3u %-9s %s\n", row.index, kind_name(row.kind), row.note.c_str());
            levels_csv += std::to_string(row.index) + "," + kind_name(row.kind) + ",,,,false\n";
            exit_code = std::max(exit_code, EXIT_UNCONFIRMED);
        }
    }
    for (const std::string& w : res.warnings) std::printf("warning: %s\n", w.c_str());
    if (res.rows.empty())
        std::printf("no levels requested, nothing to run\n");
    else
        std::printf("hypotheses %s, %zu row(s), %s\n",
                    res.hypotheses.all_pass ? "confirmed" : "not confirmed", res.rows.size(),
                    res.all_accepted ? "all accepted" : "not all accepted");

    const EmbeddingConstants consts = embedding_constants(pf.instance, cfg.k_variant);
    ordered_json j;
    j["hypotheses"] = report_json(res.hypotheses, consts);
    j["rows"] = std::move(rows);
    j["warnings"] = res.warnings;
    j["all_accepted"] = res.all_accepted;
    j["config"] = config_json(cfg);
    write_text(out_dir, "sweep.json", j.dump(2) + "\n");
    write_text(out_dir, "levels.csv", levels_csv);
    write_text(out_dir, "minimax_levels.dat", minimax_dat);
    write_text(out_dir, "min_levels.dat", min_dat);
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"critical points of coupled poly-Laplacian energies on weighted graphs"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string path;
    std::string out_dir = "out";
    std::string mode;
    SolverConfig cfg;
    double radius = 0.0;
    unsigned n_levels = 1, m_levels = 1;
    int witness_count = 3;

    auto add_common = [&](CLI::App* c, bool solver_flags) {
        c->add_option("path", path, "problem file (JSON)")->required();
        c->add_option("--out", out_dir, "output directory")->capture_default_str();
        c->add_option("--k-variant", cfg.k_variant, "embedding-constant formula variant")
            ->capture_default_str();
        if (!solver_flags) return;
        c->add_option("--tol", cfg.grad_tol, "residual tolerance")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        c->add_option("--max-iter", cfg.max_iter, "iteration budget")->capture_default_str();
        c->add_option("--rings", cfg.rings, "disk grid rings")->capture_default_str();
        c->add_option("--spokes", cfg.spokes, "disk grid spokes")->capture_default_str();
        c->add_option("--seed", cfg.seed,
                      "echoed into outputs; the bundled algorithms draw nothing random")
            ->capture_default_str();
    };

    CLI::App* validate = app.add_subcommand("validate", "check a problem file and report every issue");
    validate->add_option("path", path, "problem file (JSON)")->required();

    CLI::App* hyp = app.add_subcommand("hypotheses", "verify the solvability conditions and constants");
    add_common(hyp, false);
    hyp->add_option("--n", witness_count, "witness radii to hunt per ladder")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    CLI::App* solve = app.add_subcommand("solve", "find one critical point");
    add_common(solve, true);
    solve->add_option("--mode", mode, "minimax or localmin")
        ->required()
        ->check(CLI::IsMember({"minimax", "localmin"}));
    CLI::Option* radius_opt = solve->add_option("--radius", radius, "disk or slab radius")
                                  ->check(CLI::PositiveNumber);

    CLI::App* swp = app.add_subcommand("sweep", "run whole ladders of minimax and local-min solves");
    add_common(swp, true);
    swp->add_option("--n", n_levels, "minimax levels")->capture_default_str();
    swp->add_option("--m", m_levels, "local-min levels")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? EXIT_OK : EXIT_INVALID;
    }

    try {
        if (validate->parsed()) return cmd_validate(path);
        if (hyp->parsed()) return cmd_hypotheses(path, witness_count, cfg, out_dir);
        if (solve->parsed())
            return cmd_solve(path, mode, radius_opt->count() > 0, radius, cfg, out_dir);
        if (swp->parsed()) return cmd_sweep(path, n_levels, m_levels, cfg, out_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return EXIT_INVALID;
    }
    return EXIT_INVALID;
}
