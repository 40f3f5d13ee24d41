#include "polylap/hypotheses.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "polylap/nonlinearity.hpp"

namespace polylap {

namespace {

constexpr double TAU = 6.283185307179586476925286766559;

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double sup_over_region(const ProblemInstance& inst, const VertexFunction& col) {
    double m = 0.0;
    if (inst.dirichlet()) {
        for (std::uint32_t x : inst.dom().omega()) m = std::max(m, col[x]);
    } else {
        for (double v : col) m = std::max(m, v);
    }
    return m;
}

double eval_direction(const ProblemInstance& inst, double rho, double theta,
                      bool raw) {
    const double a = rho * std::cos(theta), b = rho * std::sin(theta);
    return raw ? integral_F(inst, a, b) : witness_ratio(inst, a, b);
}

struct DirExtreme {
    double value = 0.0;
    double theta = 0.0;
};

DirExtreme scan_directions(const ProblemInstance& inst, double rho, int count,
                           bool raw, bool want_min) {
    DirExtreme best{eval_direction(inst, rho, 0.0, raw), 0.0};
    for (int j = 1; j < count; ++j) {
        const double theta = TAU * j / count;
        const double v = eval_direction(inst, rho, theta, raw);
        if (want_min ? v < best.value : v > best.value) best = {v, theta};
    }
    return best;
}

DirExtreme golden_refine(const ProblemInstance& inst, double rho, double center,
                         double halfwidth, int iters, bool raw, bool want_min) {
    const double gr = 0.6180339887498948482;
    double lo = center - halfwidth, hi = center + halfwidth;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = eval_direction(inst, rho, c, raw);
    double fd = eval_direction(inst, rho, d, raw);
    for (int i = 0; i < iters; ++i) {
        if (want_min ? fc < fd : fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = eval_direction(inst, rho, c, raw);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = eval_direction(inst, rho, d, raw);
        }
    }
    return (want_min ? fc < fd : fc > fd) ? DirExtreme{fc, c} : DirExtreme{fd, d};
}

DirExtreme sharpened_extreme(const ProblemInstance& inst, double rho, int count,
                             bool raw, bool want_min, int refine_iters) {
    DirExtreme grid = scan_directions(inst, rho, count, raw, want_min);
    DirExtreme fine = golden_refine(inst, rho, grid.theta, TAU / count,
                                    refine_iters, raw, want_min);
    const bool fine_wins = want_min ? fine.value < grid.value : fine.value > grid.value;
    return fine_wins ? fine : grid;
}

// want_min = true hunts the high side (the directional inf must beat the
// threshold from above); want_min = false hunts the low side.
std::optional<Witness> probe_radius(const ProblemInstance& inst, double rho,
                                    bool want_min, bool raw, double threshold,
                                    const WitnessPlan& plan) {
    DirExtreme e = sharpened_extreme(inst, rho, plan.directions, raw, want_min,
                                     plan.refine_iters);
    if (want_min ? e.value <= threshold : e.value >= threshold)
        return std::nullopt;

    DirExtreme v = sharpened_extreme(inst, rho, plan.verify_directions, raw,
                                     want_min, plan.refine_iters);
    if (want_min ? v.value < e.value : v.value > e.value) e = v;
    if (want_min ? e.value <= threshold : e.value >= threshold)
        return std::nullopt;

    Witness w;
    w.radius = rho;
    w.value = e.value;
    w.threshold = threshold;
    w.margin = want_min ? e.value - threshold : threshold - e.value;
    w.worst_a = rho * std::cos(e.theta);
    w.worst_b = rho * std::sin(e.theta);
    return w;
}

template <class Fn>
void for_each_radius(const WitnessPlan& plan, Fn fn) {
    for (int i = 0;; ++i) {
        const double rho =
            plan.radius_lo * std::pow(10.0, double(i) / plan.per_decade);
        if (rho > plan.radius_hi * (1.0 + 1e-12)) break;
        if (!fn(rho)) break;
    }
}

}  // namespace

double witness_ratio(const ProblemInstance& inst, double a, double b) {
    const double denom =
        (std::pow(std::fabs(a), inst.p) + std::pow(std::fabs(b), inst.q)) *
        inst.volume();
    return integral_F(inst, a, b) / denom;
}

SmallnessReport check_smallness(const ProblemInstance& inst,
                                const std::string& variant) {
    if (!inst.envelope)
        throw std::invalid_argument("growth envelope required for the smallness check");
    const GrowthEnvelope& env = *inst.envelope;
    const EmbeddingConstants consts = embedding_constants(inst, variant);
    const double p = inst.p, q = inst.q;

    SmallnessReport rep;
    rep.formula_variant = variant;
    rep.lhs1 = ((p * q - q) / p) * sup_over_region(inst, env.f2) +
               sup_over_region(inst, env.f4);
    rep.lhs2 = sup_over_region(inst, env.f1) + sup_over_region(inst, env.f2);
    rep.rhs1 = inst.dirichlet() ? consts.inv_Cq_q : consts.inv_Kq_q;
    rep.rhs2 = inst.dirichlet() ? consts.inv_Cp_p : consts.inv_Kp_p;
    rep.margin1 = rep.rhs1 - rep.lhs1;
    rep.margin2 = rep.rhs2 - rep.lhs2;
    rep.f_at_zero = integral_F(inst, 0.0, 0.0);
    rep.zero_ok = std::fabs(rep.f_at_zero) <= 1e-12;
    rep.pass = rep.margin1 > 0.0 && rep.margin2 > 0.0 && rep.zero_ok;
    return rep;
}

Thresholds rhs_thresholds(const ProblemInstance& inst) {
    if (!inst.envelope)
        throw std::invalid_argument("growth envelope required for the thresholds");
    const GrowthEnvelope& env = *inst.envelope;
    const WeightedGraph& g = inst.g();
    const double p = inst.p, q = inst.q;
    const double grow_p = std::pow(2.0, p - 1.0), grow_q = std::pow(2.0, q - 1.0);

    Thresholds t;
    auto low_terms = [&](std::uint32_t x) {
        const double mu = g.mu(x);
        t.low_first += mu * ((1.0 / p) * env.f1[x] * (1.0 - grow_p) -
                             ((q - 1.0) / q) * env.f3[x]);
        t.low_second += mu * ((1.0 / q) * env.f4[x] * (1.0 - grow_q) -
                              ((p - 1.0) / p) * env.f2[x] * grow_q);
    };

    if (inst.dirichlet()) {
        for (std::uint32_t x : inst.dom().omega()) low_terms(x);
        t.high_is_ladder = true;
        t.t_high = std::numeric_limits<double>::quiet_NaN();
    } else {
        if (!g.has_h1() || !g.has_h2())
            throw std::invalid_argument("potentials h1 and h2 required");
        double ih1 = 0.0, ih2 = 0.0;
        for (std::uint32_t x = 0; x < g.size(); ++x) {
            low_terms(x);
            const double mu = g.mu(x);
            ih1 += mu * g.h1()[x];
            ih2 += mu * g.h2()[x];
            t.low_first -= mu * (1.0 / p) * g.h1()[x];
            t.low_second -= mu * (1.0 / q) * g.h2()[x];
        }
        t.t_high = std::max(ih1 / p, ih2 / q);
    }
    t.t_low = std::min(t.low_first, t.low_second);
    return t;
}

WitnessLadder find_witness_R(const ProblemInstance& inst, int count,
                             const WitnessPlan& plan) {
    const Thresholds t = rhs_thresholds(inst);
    WitnessLadder lad;
    lad.scan_limit = plan.radius_hi;
    const bool raw = t.high_is_ladder;
    for_each_radius(plan, [&](double rho) {
        const int k = int(lad.witnesses.size()) + 1;
        const double threshold = raw ? plan.ladder_rung * k : t.t_high;
        if (auto w = probe_radius(inst, rho, true, raw, threshold, plan))
            lad.witnesses.push_back(*w);
        return int(lad.witnesses.size()) < count;
    });
    lad.confirmed = int(lad.witnesses.size()) >= count;
    if (!lad.confirmed)
        lad.note = "no qualifying radius up to " + fmt_g(plan.radius_hi);
    return lad;
}

WitnessLadder find_witness_r(const ProblemInstance& inst, int count,
                             const WitnessPlan& plan) {
    const Thresholds t = rhs_thresholds(inst);
    WitnessLadder lad;
    lad.scan_limit = plan.radius_hi;
    for_each_radius(plan, [&](double rho) {
        if (auto w = probe_radius(inst, rho, false, false, t.t_low, plan))
            lad.witnesses.push_back(*w);
        return int(lad.witnesses.size()) < count;
    });
    lad.confirmed = int(lad.witnesses.size()) >= count;
    if (!lad.confirmed)
        lad.note = "no qualifying radius up to " + fmt_g(plan.radius_hi);
    return lad;
}

HypothesisReport check_hypotheses(const ProblemInstance& inst,
                                  const WitnessPlan& plan,
                                  const std::string& variant,
                                  const std::map<std::string, double>* claims) {
    HypothesisReport rep;
    rep.smallness = check_smallness(inst, variant);
    rep.thresholds = rhs_thresholds(inst);
    rep.high.scan_limit = rep.low.scan_limit = plan.radius_hi;

    const bool raw_high = rep.thresholds.high_is_ladder;
    bool want_high = true;
    for_each_radius(plan, [&](double rho) {
        if (want_high) {
            const int k = int(rep.high.witnesses.size()) + 1;
            const double th =
                raw_high ? plan.ladder_rung * k : rep.thresholds.t_high;
            if (auto w = probe_radius(inst, rho, true, raw_high, th, plan)) {
                rep.high.witnesses.push_back(*w);
                want_high = false;
            }
        } else if (auto w = probe_radius(inst, rho, false, false,
                                         rep.thresholds.t_low, plan)) {
            rep.low.witnesses.push_back(*w);
            want_high = true;
        }
        return int(rep.low.witnesses.size()) < plan.count;
    });
    rep.high.confirmed = int(rep.high.witnesses.size()) >= plan.count;
    rep.low.confirmed = int(rep.low.witnesses.size()) >= plan.count;
    const std::string limit = fmt_g(plan.radius_hi);
    if (!rep.high.confirmed)
        rep.high.note = want_high ? "no qualifying radius up to " + limit
                                  : "scan ended while the low side was hunting";
    if (!rep.low.confirmed)
        rep.low.note = want_high ? "scan ended while the high side was hunting"
                                 : "no qualifying radius up to " + limit;

    rep.interleaved = true;
    for (std::size_t i = 0; i < rep.low.witnesses.size(); ++i) {
        if (i < rep.high.witnesses.size() &&
            !(rep.high.witnesses[i].radius < rep.low.witnesses[i].radius))
            rep.interleaved = false;
        if (i + 1 < rep.high.witnesses.size() &&
            !(rep.low.witnesses[i].radius < rep.high.witnesses[i + 1].radius))
            rep.interleaved = false;
    }

    if (claims) {
        std::map<std::string, double> computed{
            {"lhs1", rep.smallness.lhs1},
            {"lhs2", rep.smallness.lhs2},
            {"t_low", rep.thresholds.t_low},
        };
        if (inst.dirichlet()) {
            computed["inv_Cq_q"] = rep.smallness.rhs1;
            computed["inv_Cp_p"] = rep.smallness.rhs2;
        } else {
            computed["inv_Kq_q"] = rep.smallness.rhs1;
            computed["inv_Kp_p"] = rep.smallness.rhs2;
            computed["t_high"] = rep.thresholds.t_high;
        }
        for (const auto& [key, claimed] : *claims) {
            auto it = computed.find(key);
            if (it == computed.end()) {
                rep.claim_notes.push_back("unrecognized claim '" + key + "'");
                continue;
            }
            const double tol = std::max(0.005, 0.01 * std::fabs(claimed));
            if (std::fabs(it->second - claimed) > tol)
                rep.claim_notes.push_back("claim " + key + " = " + fmt_g(claimed) +
                                          " disagrees with recomputed " +
                                          fmt_g(it->second));
        }
    }

    rep.all_pass = rep.smallness.pass && rep.high.confirmed &&
                   rep.low.confirmed && rep.interleaved;
    return rep;
}

}  // namespace polylap
