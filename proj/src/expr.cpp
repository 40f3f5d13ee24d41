#include "polylap/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace polylap {

namespace {

enum class Tok { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::size_t pos;
    double number = 0.0;
    std::string name;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            const std::size_t start = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i < s.size() && s[i] == '.') {
                ++i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            }
            if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
                if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                    i = j;
                    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                }
            }
            Token t{Tok::Number, start, 0.0, {}};
            t.number = std::strtod(s.substr(start, i - start).c_str(), nullptr);
            out.push_back(t);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = i;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            out.push_back({Tok::Name, start, 0.0, s.substr(start, i - start)});
            continue;
        }
        Tok k;
        switch (c) {
            case '+': k = Tok::Plus; break;
            case '-': k = Tok::Minus; break;
            case '*': k = Tok::Star; break;
            case '/': k = Tok::Slash; break;
            case '^': k = Tok::Caret; break;
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case ',': k = Tok::Comma; break;
            default:
                throw ParseError(i, std::string("unexpected character '") + c + "'");
        }
        out.push_back({k, i, 0.0, {}});
        ++i;
    }
    out.push_back({Tok::End, s.size(), 0.0, {}});
    return out;
}

}  // namespace

class ExprParser {
public:
    explicit ExprParser(const std::string& src) : src_(src), tokens_(lex(src)) {}

    Expression run() {
        Expression e;
        e.src_ = src_;
        const std::uint32_t root = parse_expr();
        expect(Tok::End, "trailing input");
        (void)root;  // root is nodes_.back() by postorder construction
        e.nodes_ = std::move(nodes_);
        e.coefficients_ = std::move(coefficients_);
        return e;
    }

private:
    using Op = Expression::Op;

    const std::string& src_;
    std::vector<Token> tokens_;
    std::size_t at_ = 0;
    std::vector<Expression::Node> nodes_;
    std::vector<std::string> coefficients_;

    const Token& peek() const { return tokens_[at_]; }
    Token take() { return tokens_[at_++]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++at_;
        return true;
    }
    void expect(Tok k, const char* what) {
        if (!accept(k)) throw ParseError(peek().pos, what);
    }

    std::uint32_t emit(Expression::Node n) {
        nodes_.push_back(n);
        return static_cast<std::uint32_t>(nodes_.size() - 1);
    }

    std::uint32_t parse_expr() {
        std::uint32_t lhs = parse_term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const Tok k = take().kind;
            const std::uint32_t rhs = parse_term();
            lhs = emit({k == Tok::Plus ? Op::Add : Op::Sub, 0.0, lhs, rhs});
        }
        return lhs;
    }

    std::uint32_t parse_term() {
        std::uint32_t lhs = parse_unary();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const Tok k = take().kind;
            const std::uint32_t rhs = parse_unary();
            lhs = emit({k == Tok::Star ? Op::Mul : Op::Div, 0.0, lhs, rhs});
        }
        return lhs;
    }

    std::uint32_t parse_unary() {
        if (accept(Tok::Minus)) {
            const std::uint32_t arg = parse_unary();
            return emit({Op::Neg, 0.0, arg, 0});
        }
        return parse_power();
    }

    std::uint32_t parse_power() {
        const std::uint32_t base = parse_atom();
        if (accept(Tok::Caret)) {
            const std::uint32_t exponent = parse_unary();
            return emit({Op::Pow, 0.0, base, exponent});
        }
        return base;
    }

    std::uint32_t parse_atom() {
        const Token t = take();
        switch (t.kind) {
            case Tok::Number:
                return emit({Op::Number, t.number, 0, 0});
            case Tok::LParen: {
                const std::uint32_t inner = parse_expr();
                expect(Tok::RParen, "expected ')'");
                return inner;
            }
            case Tok::Name:
                return parse_name(t);
            default:
                throw ParseError(t.pos, "expected a number, name, or '('");
        }
    }

    std::uint32_t parse_name(const Token& t) {
        static const struct {
            const char* name;
            Op op;
            int arity;
        } fns[] = {{"sin", Op::Sin, 1}, {"cos", Op::Cos, 1}, {"exp", Op::Exp, 1},
                   {"ln", Op::Ln, 1},   {"sqrt", Op::Sqrt, 1}, {"abs", Op::Abs, 1},
                   {"pow", Op::Pow, 2}};
        for (const auto& f : fns) {
            if (t.name != f.name) continue;
            expect(Tok::LParen, "expected '(' after function name");
            const std::uint32_t a0 = parse_expr();
            std::uint32_t a1 = 0;
            if (f.arity == 2) {
                expect(Tok::Comma, "expected ',' between arguments");
                a1 = parse_expr();
            }
            expect(Tok::RParen, "expected ')'");
            return emit({f.op, 0.0, a0, a1});
        }
        if (t.name == "u") return emit({Op::VarU, 0.0, 0, 0});
        if (t.name == "v") return emit({Op::VarV, 0.0, 0, 0});
        if (t.name == "pi") return emit({Op::Number, 3.14159265358979323846, 0, 0});
        if (t.name == "e") return emit({Op::Number, 2.71828182845904523536, 0, 0});
        // anything else is a per-vertex coefficient reference
        auto it = std::find(coefficients_.begin(), coefficients_.end(), t.name);
        std::uint32_t slot;
        if (it == coefficients_.end()) {
            slot = static_cast<std::uint32_t>(coefficients_.size());
            coefficients_.push_back(t.name);
        } else {
            slot = static_cast<std::uint32_t>(it - coefficients_.begin());
        }
        return emit({Op::Coef, 0.0, slot, 0});
    }
};

Expression Expression::parse(const std::string& src) { return ExprParser(src).run(); }

Dual2 Expression::eval(double u, double v, std::span<const double> coef_values) const {
    if (coef_values.size() < coefficients_.size())
        throw std::invalid_argument("expression evaluated without its coefficient values");
    std::vector<Dual2> stack(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        switch (n.op) {
            case Op::Number: stack[i] = Dual2(n.number); break;
            case Op::VarU: stack[i] = Dual2::var_u(u); break;
            case Op::VarV: stack[i] = Dual2::var_v(v); break;
            case Op::Coef: stack[i] = Dual2(coef_values[n.arg0]); break;
            case Op::Add: stack[i] = stack[n.arg0] + stack[n.arg1]; break;
            case Op::Sub: stack[i] = stack[n.arg0] - stack[n.arg1]; break;
            case Op::Mul: stack[i] = stack[n.arg0] * stack[n.arg1]; break;
            case Op::Div: stack[i] = stack[n.arg0] / stack[n.arg1]; break;
            case Op::Neg: stack[i] = -stack[n.arg0]; break;
            case Op::Sin: stack[i] = sin(stack[n.arg0]); break;
            case Op::Cos: stack[i] = cos(stack[n.arg0]); break;
            case Op::Exp: stack[i] = exp(stack[n.arg0]); break;
            case Op::Ln: stack[i] = ln(stack[n.arg0]); break;
            case Op::Sqrt: stack[i] = sqrt(stack[n.arg0]); break;
            case Op::Abs: stack[i] = abs(stack[n.arg0]); break;
            case Op::Pow: stack[i] = pow(stack[n.arg0], stack[n.arg1]); break;
        }
    }
    return stack.back();
}

}  // namespace polylap
