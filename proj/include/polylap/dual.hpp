#pragma once

#include <cmath>
#include <stdexcept>

namespace polylap {

// Scalar carrying first derivatives with respect to the two state variables,
// so F, dF/du, dF/dv come out of a single evaluation pass.
//
// Kink conventions (they only matter on measure-zero sets):
//   d|t|/dt at 0 is taken as 0, and d|t|^c/dt at 0 for c in (0,1) as 0.
struct Dual2 {
    double v = 0.0;
    double du = 0.0;
    double dv = 0.0;

    constexpr Dual2() = default;
    constexpr Dual2(double value) : v(value) {}
    constexpr Dual2(double value, double d_u, double d_v) : v(value), du(d_u), dv(d_v) {}

    static constexpr Dual2 var_u(double x) { return {x, 1.0, 0.0}; }
    static constexpr Dual2 var_v(double x) { return {x, 0.0, 1.0}; }
};

constexpr Dual2 operator+(const Dual2& a, const Dual2& b) {
    return {a.v + b.v, a.du + b.du, a.dv + b.dv};
}
constexpr Dual2 operator-(const Dual2& a, const Dual2& b) {
    return {a.v - b.v, a.du - b.du, a.dv - b.dv};
}
constexpr Dual2 operator-(const Dual2& a) { return {-a.v, -a.du, -a.dv}; }
constexpr Dual2 operator*(const Dual2& a, const Dual2& b) {
    return {a.v * b.v, a.du * b.v + a.v * b.du, a.dv * b.v + a.v * b.dv};
}
inline Dual2 operator/(const Dual2& a, const Dual2& b) {
    if (b.v == 0.0) throw std::domain_error("division by zero");
    const double inv = 1.0 / b.v;
    return {a.v * inv, (a.du * b.v - a.v * b.du) * inv * inv,
            (a.dv * b.v - a.v * b.dv) * inv * inv};
}

inline Dual2 chain(double value, double slope, const Dual2& a) {
    return {value, slope * a.du, slope * a.dv};
}

inline Dual2 sin(const Dual2& a) { return chain(std::sin(a.v), std::cos(a.v), a); }
inline Dual2 cos(const Dual2& a) { return chain(std::cos(a.v), -std::sin(a.v), a); }
inline Dual2 exp(const Dual2& a) {
    const double e = std::exp(a.v);
    return chain(e, e, a);
}
inline Dual2 ln(const Dual2& a) {
    if (!(a.v > 0.0)) throw std::domain_error("ln of a nonpositive value");
    return chain(std::log(a.v), 1.0 / a.v, a);
}
inline Dual2 sqrt(const Dual2& a) {
    if (a.v < 0.0) throw std::domain_error("sqrt of a negative value");
    const double r = std::sqrt(a.v);
    if (a.v == 0.0) return chain(0.0, 0.0, a);
    return chain(r, 0.5 / r, a);
}
inline Dual2 abs(const Dual2& a) {
    const double s = a.v > 0.0 ? 1.0 : (a.v < 0.0 ? -1.0 : 0.0);
    return chain(std::fabs(a.v), s, a);
}

// Base to a constant power. Negative bases are only meaningful for integer
// exponents; the derivative slope at base 0 follows the kink convention.
inline Dual2 pow(const Dual2& a, double c) {
    if (a.v < 0.0 && c != std::floor(c))
        throw std::domain_error("pow of a negative base with a non-integer exponent");
    if (a.v == 0.0) {
        if (c < 0.0) throw std::domain_error("pow of zero with a negative exponent");
        if (c == 0.0) return {1.0, 0.0, 0.0};
        // exponent 1 passes the derivative through; above 1 the slope is a
        // true 0, below 1 the one-sided infinite slope is pinned to 0
        return chain(0.0, c == 1.0 ? 1.0 : 0.0, a);
    }
    return chain(std::pow(a.v, c), c * std::pow(a.v, c - 1.0), a);
}

inline Dual2 pow(const Dual2& a, const Dual2& b) {
    if (b.du == 0.0 && b.dv == 0.0) return pow(a, b.v);
    if (!(a.v > 0.0))
        throw std::domain_error("pow with a varying exponent requires a positive base");
    const double r = std::pow(a.v, b.v);
    const double lg = std::log(a.v);
    return {r, r * (b.du * lg + b.v * a.du / a.v), r * (b.dv * lg + b.v * a.dv / a.v)};
}

}  // namespace polylap
