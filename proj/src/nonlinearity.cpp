#include "polylap/nonlinearity.hpp"

#include <cmath>
#include <random>

#include "polylap/instance.hpp"

namespace polylap {

Nonlinearity::Nonlinearity() = default;

Nonlinearity Nonlinearity::builtin(const std::string& name) {
    Nonlinearity f;
    if (name == "zero") {
        f.kind_ = Kind::Zero;
    } else if (name == "example51") {
        f.kind_ = Kind::OscillatingLog;
    } else {
        throw std::invalid_argument("unknown builtin nonlinearity: " + name);
    }
    f.origin_ = "builtin:" + name;
    return f;
}

Nonlinearity Nonlinearity::expression(const std::string& src) {
    Nonlinearity f;
    f.kind_ = Kind::Expr;
    f.expr_ = std::make_shared<Expression>(Expression::parse(src));
    f.origin_ = "expr:" + src;
    return f;
}

void Nonlinearity::bind(const WeightedGraph& g) {
    coef_columns_.clear();
    if (kind_ == Kind::Expr) {
        for (const auto& name : expr_->coefficients()) {
            if (!g.attribute_complete(name))
                throw std::invalid_argument(
                    "expression coefficient '" + name +
                    "' is not an attribute present on every vertex");
            coef_columns_.push_back(*g.attribute(name));
        }
    }
    bound_ = true;
}

bool Nonlinearity::bound() const {
    return kind_ != Kind::Expr || !expr_->uses_coefficients() || bound_;
}

bool Nonlinearity::uniform() const {
    return kind_ != Kind::Expr || !expr_->uses_coefficients();
}

// F = s sin(ln(s+1)) with s = u^2 + |v|^3; the shared bracket in both
// partials is sin(ln(s+1)) + s cos(ln(s+1)) / (s+1).
static FValue oscillating_log(double u, double v) {
    const double av = std::fabs(v);
    const double s = u * u + av * av * av;
    const double t = std::log(s + 1.0);
    const double sn = std::sin(t), cs = std::cos(t);
    const double bracket = sn + s * cs / (s + 1.0);
    return {s * sn, 2.0 * u * bracket, 3.0 * v * av * bracket};
}

FValue Nonlinearity::eval(std::uint32_t x, double u, double v) const {
    switch (kind_) {
        case Kind::Zero:
            return {};
        case Kind::OscillatingLog:
            return oscillating_log(u, v);
        case Kind::Expr: {
            if (!bound())
                throw std::logic_error(
                    "nonlinearity with coefficients evaluated before bind()");
            std::vector<double> row(coef_columns_.size());
            for (std::size_t i = 0; i < row.size(); ++i) row[i] = coef_columns_[i][x];
            try {
                const Dual2 r = expr_->eval(u, v, row);
                return {r.v, r.du, r.dv};
            } catch (const std::domain_error& err) {
                throw std::runtime_error(std::string(err.what()) + " while evaluating F at u=" +
                                         std::to_string(u) + ", v=" + std::to_string(v));
            }
        }
    }
    return {};
}

const VertexFunction& GrowthEnvelope::column(int which) const {
    switch (which) {
        case 1: return f1;
        case 2: return f2;
        case 3: return f3;
        case 4: return f4;
    }
    throw std::out_of_range("envelope column index");
}

double integral_F(const ProblemInstance& inst, double a, double b) {
    const WeightedGraph& g = inst.g();
    if (inst.F.uniform()) return inst.F.value(0, a, b) * inst.volume();
    double s = 0.0;
    if (inst.dirichlet()) {
        for (std::uint32_t x : inst.dom().omega()) s += g.mu(x) * inst.F.value(x, a, b);
    } else {
        for (std::uint32_t x = 0; x < g.size(); ++x) s += g.mu(x) * inst.F.value(x, a, b);
    }
    return s;
}

EnvelopeReport check_envelope(const ProblemInstance& inst, std::uint64_t seed,
                              int max_violations) {
    if (!inst.envelope)
        throw std::invalid_argument("instance has no growth envelope to check");
    const GrowthEnvelope& env = *inst.envelope;
    const WeightedGraph& g = inst.g();
    const double p = inst.p, q = inst.q;
    const double e_uv = (p * q - q) / p;  // exponent of |v| in the F_u bound
    const double e_vu = (p * q - p) / q;  // exponent of |u| in the F_v bound

    // sample every vertex on small graphs, a fixed stride of 32 on large ones
    std::vector<std::uint32_t> sample;
    if (inst.dirichlet()) {
        sample = inst.dom().omega();
    } else {
        sample.resize(g.size());
        for (std::uint32_t i = 0; i < sample.size(); ++i) sample[i] = i;
    }
    if (sample.size() > 32) {
        std::vector<std::uint32_t> strided;
        const std::size_t step = sample.size() / 32;
        for (std::size_t i = 0; i < sample.size(); i += step) strided.push_back(sample[i]);
        sample = std::move(strided);
    }

    EnvelopeReport rep;
    // tiny relative slack so envelopes that are tight up to rounding pass
    const double slack = 1e-12;

    auto probe = [&](double uu, double vv) {
        for (std::uint32_t x : sample) {
            const FValue f = inst.F.eval(x, uu, vv);
            ++rep.probes;
            const double au = std::fabs(uu), av = std::fabs(vv);
            const double rhs_u = env.f1[x] * std::pow(au, p - 1.0) +
                                 env.f2[x] * std::pow(av, e_uv);
            const double rhs_v = env.f3[x] * std::pow(au, e_vu) +
                                 env.f4[x] * std::pow(av, q - 1.0);
            if (std::fabs(f.fu) > rhs_u * (1.0 + slack)) {
                rep.ok = false;
                if (static_cast<int>(rep.violations.size()) < max_violations)
                    rep.violations.push_back({x, uu, vv, std::fabs(f.fu), rhs_u, 1});
            }
            if (std::fabs(f.fv) > rhs_v * (1.0 + slack)) {
                rep.ok = false;
                if (static_cast<int>(rep.violations.size()) < max_violations)
                    rep.violations.push_back({x, uu, vv, std::fabs(f.fv), rhs_v, 2});
            }
        }
    };

    const double two_pi = 6.28318530717958647692;
    for (int decade = -3; decade <= 6; ++decade) {
        const double lo = std::pow(10.0, decade);
        for (int i = 0; i < 8; ++i) {
            const double rho = lo * std::pow(10.0, i / 8.0);
            if (rho > 1e6) break;
            for (int j = 0; j < 64; ++j) {
                const double th = two_pi * j / 64.0;
                probe(rho * std::cos(th), rho * std::sin(th));
            }
        }
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * (decade + 16)));
        std::uniform_real_distribution<double> logr(0.0, 1.0), ang(0.0, two_pi);
        for (int k = 0; k < 10000; ++k) {
            const double rho = lo * std::pow(10.0, logr(rng));
            const double th = ang(rng);
            probe(rho * std::cos(th), rho * std::sin(th));
        }
    }
    return rep;
}

void check_instance(const ProblemInstance& inst) {
    if (!inst.graph) throw std::invalid_argument("instance has no graph");
    if (!(inst.p > 1.0) || !(inst.q > 1.0))
        throw std::invalid_argument("exponents must satisfy p > 1 and q > 1");
    if (inst.m1 < 1 || inst.m2 < 1)
        throw std::invalid_argument("operator orders must be at least 1");
    if (inst.dirichlet()) {
        if (!inst.domain) throw std::invalid_argument("Dirichlet mode requires a domain");
        if (inst.domain->omega().empty())
            throw std::invalid_argument("Dirichlet domain is empty");
    } else {
        if (!inst.graph->has_h1() || !inst.graph->has_h2())
            throw std::invalid_argument(
                "finite mode requires potentials h1 and h2 on every vertex");
    }
    if (!inst.F.bound())
        throw std::invalid_argument("nonlinearity must be bound to the graph first");
    if (inst.envelope) {
        const std::size_t n = inst.graph->size();
        if (inst.envelope->f1.size() != n || inst.envelope->f2.size() != n ||
            inst.envelope->f3.size() != n || inst.envelope->f4.size() != n)
            throw std::invalid_argument("envelope columns must cover every vertex");
    }
}

}  // namespace polylap
