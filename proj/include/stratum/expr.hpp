#pragma once

/**
 * Abstract syntax of the definability language: a first-order term
 * language over one bound variable, with literals, field operations,
 * algebraic roots, named series constants, and the three level-raising
 * binders (derivative at a point, definite integral, minimum over a
 * compact interval).
 *
 * Nodes are immutable and shared. Literal payloads are canonical:
 * IntLit and RatLit store nonnegative values (negatives are spelled
 * with Neg), RatLit is kept in lowest terms, and Root stores a trimmed
 * low-degree-first coefficient vector. The printer emits a string the
 * parser maps back to a structurally equal tree: integer literals print
 * bare, rational literals always print as "p/q", division always
 * parenthesizes its divisor (so it can never be re-read as a rational
 * literal), and precedence is ^ above unary minus above * and / above
 * + and -.
 */

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stratum/errors.hpp"
#include "stratum/polynomial.hpp"
#include "stratum/rational.hpp"

namespace stratum {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind {
        IntLit,
        RatLit,
        Var,
        Add,
        Sub,
        Mul,
        Div,
        Neg,
        Pow,
        Root,
        ConstE,
        ConstPi,
        ConstLiouville,
        Deriv,
        Integral,
        MinOn,
    };

    Kind kind;
    BigInt int_value;           // IntLit (nonnegative)
    Rational rat_value;         // RatLit (nonnegative, lowest terms)
    ExprPtr a;                  // left operand / unary operand / binder body
    ExprPtr b;                  // right operand / Deriv point / Integral lower bound
    ExprPtr c;                  // Integral upper bound
    std::uint32_t nat = 0;      // Pow exponent / ConstLiouville base
    std::vector<Rational> poly; // Root coefficients, low degree first
    Rational lo;                // Root bracket / MinOn interval
    Rational hi;
};

// ---- node builders ------------------------------------------------------

namespace detail {
inline ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
} // namespace detail

inline ExprPtr ex_int(BigInt n) {
    if (n < 0) throw Error("integer literals are nonnegative; use ex_neg");
    Expr e{};
    e.kind = Expr::Kind::IntLit;
    e.int_value = std::move(n);
    return detail::node(std::move(e));
}

inline ExprPtr ex_rat(Rational q) {
    if (q.is_negative()) throw Error("rational literals are nonnegative; use ex_neg");
    Expr e{};
    e.kind = Expr::Kind::RatLit;
    e.rat_value = std::move(q);
    return detail::node(std::move(e));
}

inline ExprPtr ex_var() {
    Expr e{};
    e.kind = Expr::Kind::Var;
    return detail::node(std::move(e));
}

namespace detail {
inline ExprPtr binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
    Expr e{};
    e.kind = k;
    e.a = std::move(a);
    e.b = std::move(b);
    return node(std::move(e));
}
} // namespace detail

inline ExprPtr ex_add(ExprPtr a, ExprPtr b) {
    return detail::binary(Expr::Kind::Add, std::move(a), std::move(b));
}
inline ExprPtr ex_sub(ExprPtr a, ExprPtr b) {
    return detail::binary(Expr::Kind::Sub, std::move(a), std::move(b));
}
inline ExprPtr ex_mul(ExprPtr a, ExprPtr b) {
    return detail::binary(Expr::Kind::Mul, std::move(a), std::move(b));
}
inline ExprPtr ex_div(ExprPtr a, ExprPtr b) {
    return detail::binary(Expr::Kind::Div, std::move(a), std::move(b));
}

inline ExprPtr ex_neg(ExprPtr a) {
    Expr e{};
    e.kind = Expr::Kind::Neg;
    e.a = std::move(a);
    return detail::node(std::move(e));
}

inline ExprPtr ex_pow(ExprPtr base, std::uint32_t n) {
    Expr e{};
    e.kind = Expr::Kind::Pow;
    e.a = std::move(base);
    e.nat = n;
    return detail::node(std::move(e));
}

inline ExprPtr ex_root(std::vector<Rational> coeffs, Rational lo, Rational hi) {
    Expr e{};
    e.kind = Expr::Kind::Root;
    e.poly = RationalPolynomial(std::move(coeffs)).coefficients(); // trim canonically
    e.lo = std::move(lo);
    e.hi = std::move(hi);
    return detail::node(std::move(e));
}

inline ExprPtr ex_e() {
    Expr e{};
    e.kind = Expr::Kind::ConstE;
    return detail::node(std::move(e));
}

inline ExprPtr ex_pi() {
    Expr e{};
    e.kind = Expr::Kind::ConstPi;
    return detail::node(std::move(e));
}

inline ExprPtr ex_liouville(std::uint32_t base) {
    if (base < 2) throw Error("liouville base must be >= 2");
    Expr e{};
    e.kind = Expr::Kind::ConstLiouville;
    e.nat = base;
    return detail::node(std::move(e));
}

inline ExprPtr ex_deriv(ExprPtr body, ExprPtr at) {
    Expr e{};
    e.kind = Expr::Kind::Deriv;
    e.a = std::move(body);
    e.b = std::move(at);
    return detail::node(std::move(e));
}

inline ExprPtr ex_integral(ExprPtr body, ExprPtr lo, ExprPtr hi) {
    Expr e{};
    e.kind = Expr::Kind::Integral;
    e.a = std::move(body);
    e.b = std::move(lo);
    e.c = std::move(hi);
    return detail::node(std::move(e));
}

inline ExprPtr ex_min_on(ExprPtr body, Rational lo, Rational hi) {
    Expr e{};
    e.kind = Expr::Kind::MinOn;
    e.a = std::move(body);
    e.lo = std::move(lo);
    e.hi = std::move(hi);
    return detail::node(std::move(e));
}

// ---- structural predicates ----------------------------------------------

inline bool expr_equal(const Expr& x, const Expr& y) {
    if (x.kind != y.kind) return false;
    auto child_eq = [](const ExprPtr& p, const ExprPtr& q) {
        if (!p || !q) return !p && !q;
        return expr_equal(*p, *q);
    };
    return x.int_value == y.int_value && x.rat_value == y.rat_value && x.nat == y.nat &&
           x.poly == y.poly && x.lo == y.lo && x.hi == y.hi && child_eq(x.a, y.a) &&
           child_eq(x.b, y.b) && child_eq(x.c, y.c);
}

inline bool expr_equal(const ExprPtr& x, const ExprPtr& y) {
    if (!x || !y) return !x && !y;
    return expr_equal(*x, *y);
}

// ---- printing ------------------------------------------------------------

namespace detail {

// Precedence levels: Add/Sub 1, Mul/Div 2, Neg 3, Pow 4, atoms 5.
inline int precedence_of(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Neg: return 3;
        case Expr::Kind::Pow: return 4;
        default: return 5;
    }
}

inline void print_into(const Expr& e, int min_prec, std::string& out) {
    const int prec = precedence_of(e);
    const bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (e.kind) {
        case Expr::Kind::IntLit: out += e.int_value.str(); break;
        case Expr::Kind::RatLit:
            out += e.rat_value.numerator().str() + "/" + e.rat_value.denominator().str();
            break;
        case Expr::Kind::Var: out += 'x'; break;
        case Expr::Kind::Add:
            print_into(*e.a, 1, out);
            out += " + ";
            print_into(*e.b, 2, out);
            break;
        case Expr::Kind::Sub:
            print_into(*e.a, 1, out);
            out += " - ";
            print_into(*e.b, 2, out);
            break;
        case Expr::Kind::Mul:
            print_into(*e.a, 2, out);
            out += '*';
            print_into(*e.b, 3, out);
            break;
        case Expr::Kind::Div:
            print_into(*e.a, 2, out);
            out += "/(";
            print_into(*e.b, 0, out);
            out += ')';
            break;
        case Expr::Kind::Neg:
            out += '-';
            print_into(*e.a, 3, out);
            break;
        case Expr::Kind::Pow:
            print_into(*e.a, 5, out);
            out += '^';
            out += std::to_string(e.nat);
            break;
        case Expr::Kind::Root:
            out += "root(" + RationalPolynomial(e.poly).str() + "; " + e.lo.str() + "; " +
                   e.hi.str() + ")";
            break;
        case Expr::Kind::ConstE: out += 'e'; break;
        case Expr::Kind::ConstPi: out += "pi"; break;
        case Expr::Kind::ConstLiouville:
            out += "liouville(" + std::to_string(e.nat) + ")";
            break;
        case Expr::Kind::Deriv:
            out += "deriv(";
            print_into(*e.a, 0, out);
            out += "; ";
            print_into(*e.b, 0, out);
            out += ')';
            break;
        case Expr::Kind::Integral:
            out += "integral(";
            print_into(*e.a, 0, out);
            out += "; ";
            print_into(*e.b, 0, out);
            out += "; ";
            print_into(*e.c, 0, out);
            out += ')';
            break;
        case Expr::Kind::MinOn:
            out += "min_on(";
            print_into(*e.a, 0, out);
            out += "; " + e.lo.str() + "; " + e.hi.str() + ")";
            break;
    }
    if (parens) out += ')';
}

} // namespace detail

/// Canonical concrete syntax; parsing it back yields a structurally
/// equal tree.
inline std::string print_expr(const Expr& e) {
    std::string out;
    detail::print_into(e, 0, out);
    return out;
}

inline std::string print_expr(const ExprPtr& e) { return print_expr(*e); }

// ---- rational polynomial extraction ---------------------------------------

namespace detail {

inline std::vector<Rational> poly_add(const std::vector<Rational>& p,
                                      const std::vector<Rational>& q, bool subtract) {
    std::vector<Rational> out(std::max(p.size(), q.size()), Rational(0));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Rational a = i < p.size() ? p[i] : Rational(0);
        const Rational b = i < q.size() ? q[i] : Rational(0);
        out[i] = subtract ? a - b : a + b;
    }
    return out;
}

inline std::vector<Rational> poly_mul(const std::vector<Rational>& p,
                                      const std::vector<Rational>& q) {
    if (p.empty() || q.empty()) return {};
    std::vector<Rational> out(p.size() + q.size() - 1, Rational(0));
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].is_zero()) continue;
        for (std::size_t j = 0; j < q.size(); ++j) {
            out[i + j] = out[i + j] + p[i] * q[j];
        }
    }
    return out;
}

inline bool rational_poly_of_into(const Expr& e, std::vector<Rational>& out);

inline bool rational_poly_child(const ExprPtr& e, std::vector<Rational>& out) {
    return e && rational_poly_of_into(*e, out);
}

inline bool rational_poly_of_into(const Expr& e, std::vector<Rational>& out) {
    switch (e.kind) {
        case Expr::Kind::IntLit: out = {Rational(e.int_value)}; return true;
        case Expr::Kind::RatLit: out = {e.rat_value}; return true;
        case Expr::Kind::Var: out = {Rational(0), Rational(1)}; return true;
        case Expr::Kind::Add:
        case Expr::Kind::Sub: {
            std::vector<Rational> p, q;
            if (!rational_poly_child(e.a, p) || !rational_poly_child(e.b, q)) return false;
            out = poly_add(p, q, e.kind == Expr::Kind::Sub);
            return true;
        }
        case Expr::Kind::Mul: {
            std::vector<Rational> p, q;
            if (!rational_poly_child(e.a, p) || !rational_poly_child(e.b, q)) return false;
            out = poly_mul(p, q);
            return true;
        }
        case Expr::Kind::Neg: {
            std::vector<Rational> p;
            if (!rational_poly_child(e.a, p)) return false;
            for (Rational& c : p) c = Rational(0) - c;
            out = std::move(p);
            return true;
        }
        case Expr::Kind::Pow: {
            std::vector<Rational> p;
            if (!rational_poly_child(e.a, p)) return false;
            std::vector<Rational> acc{Rational(1)};
            for (std::uint32_t i = 0; i < e.nat; ++i) acc = poly_mul(acc, p);
            out = std::move(acc);
            return true;
        }
        default: return false;
    }
}

} // namespace detail

/// Interpret an expression as a polynomial in x with rational
/// coefficients (literals, x, +, -, *, unary -, natural powers).
/// Anything else — constants, division, binders — yields nullopt.
inline std::optional<RationalPolynomial> rational_polynomial_of(const Expr& e) {
    std::vector<Rational> coeffs;
    if (!detail::rational_poly_of_into(e, coeffs)) return std::nullopt;
    return RationalPolynomial(std::move(coeffs));
}

} // namespace stratum
