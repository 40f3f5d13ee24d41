#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polylap/dual.hpp"

namespace polylap {

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(std::size_t pos, const std::string& what)
        : std::runtime_error("position " + std::to_string(pos) + ": " + what),
          position(pos) {}
};

// A parsed arithmetic expression in the variables u and v.
//
// Grammar (infix, ^ binds tighter than unary minus and associates right):
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?
//   atom  := number | name | name '(' expr {',' expr} ')' | '(' expr ')'
// Functions: sin cos exp ln sqrt abs pow. Constants: pi, e. Any other name
// is a free coefficient whose per-vertex values the caller supplies at
// evaluation time, in the order listed by coefficients().
class Expression {
public:
    static Expression parse(const std::string& src);

    const std::string& source() const { return src_; }
    const std::vector<std::string>& coefficients() const { return coefficients_; }
    bool uses_coefficients() const { return !coefficients_.empty(); }

    // coef_values must align with coefficients(); pass {} when none are used.
    Dual2 eval(double u, double v, std::span<const double> coef_values = {}) const;

private:
    enum class Op : std::uint8_t {
        Number, VarU, VarV, Coef,
        Add, Sub, Mul, Div, Neg,
        Sin, Cos, Exp, Ln, Sqrt, Abs, Pow,
    };
    struct Node {
        Op op;
        double number = 0.0;
        std::uint32_t arg0 = 0, arg1 = 0;  // child node indices, or coefficient slot
    };

    std::string src_;
    std::vector<Node> nodes_;  // root is the last node
    std::vector<std::string> coefficients_;

    friend class ExprParser;
};

}  // namespace polylap
