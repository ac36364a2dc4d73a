#pragma once

/**
 * Scannerless recursive-descent parser for the definability language.
 *
 *   expr     := term (('+' | '-') term)*
 *   term     := unary (('*' | '/') unary)*
 *   unary    := '-' unary | power
 *   power    := atom ('^' NAT)?
 *   atom     := NUMBER | 'x' | 'e' | 'pi'
 *             | 'liouville' '(' NAT ')'
 *             | 'root' '(' expr ';' FIELD ';' FIELD ')'
 *             | 'deriv' '(' expr ';' expr ')'
 *             | 'integral' '(' expr ';' expr ';' expr ')'
 *             | 'min_on' '(' expr ';' FIELD ';' FIELD ')'
 *             | '(' expr ')'
 *   NUMBER   := DIGITS ('/' DIGITS)?   -- '/' joins a rational literal only
 *                                         when a digit follows immediately
 *   FIELD    := '-'? NUMBER            -- exact signed rational payload
 *
 * A '-' in expression position is always the operator (negative literals
 * exist only in FIELD positions); "1/2" is the rational literal while
 * "1 / 2" and "1/x" are division; '^' takes a bare natural number, so
 * "x^2/3" is (x^2)/3. The first payload of root(...) is an expression
 * that must denote a polynomial in x with rational coefficients; it is
 * canonicalized to its coefficient vector at parse time.
 *
 * Errors are reported as ParseError with a 1-based byte position and the
 * expected token class.
 */

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "stratum/errors.hpp"
#include "stratum/expr.hpp"

namespace stratum {

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprPtr run() {
        ExprPtr e = parse_expr();
        skip_ws();
        if (!at_end()) fail("end of input");
        return e;
    }

private:
    // ---- character machinery ----
    bool at_end() const { return pos_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }
    void skip_ws() {
        while (!at_end() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                             src_[pos_] == '\r')) {
            ++pos_;
        }
    }
    [[noreturn]] void fail(const std::string& expected) const {
        throw ParseError(pos_ + 1, expected);
    }
    void expect(char c, const std::string& name) {
        skip_ws();
        if (at_end() || src_[pos_] != c) fail(name);
        ++pos_;
    }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_ident(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

    // ---- token pieces ----
    BigInt parse_digits(const std::string& what) {
        skip_ws();
        if (at_end() || !is_digit(peek())) fail(what);
        BigInt n = 0;
        while (!at_end() && is_digit(peek())) {
            n = n * 10 + (src_[pos_] - '0');
            ++pos_;
        }
        return n;
    }

    std::uint32_t parse_nat(const std::string& what) {
        const std::size_t at = pos_;
        BigInt n = parse_digits(what);
        if (n > BigInt(0xffffffffu)) throw ParseError(at + 1, what + " within 32 bits");
        return static_cast<std::uint32_t>(n);
    }

    /// NUMBER in atom position: integer, or rational when '/' is
    /// immediately followed by a digit.
    ExprPtr parse_number() {
        BigInt num = parse_digits("a number");
        if (peek() == '/' && is_digit(peek(1))) {
            const std::size_t slash = pos_;
            ++pos_;
            BigInt den = parse_digits("a denominator");
            if (den == 0) throw ParseError(slash + 2, "a nonzero denominator");
            return ex_rat(Rational(num, den));
        }
        return ex_int(num);
    }

    /// FIELD: exact signed rational (sign allowed only here).
    Rational parse_field() {
        skip_ws();
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            ++pos_;
            skip_ws();
        }
        BigInt num = parse_digits("a rational number");
        BigInt den = 1;
        if (peek() == '/' && is_digit(peek(1))) {
            const std::size_t slash = pos_;
            ++pos_;
            den = parse_digits("a denominator");
            if (den == 0) throw ParseError(slash + 2, "a nonzero denominator");
        }
        Rational q(num, den);
        return negative ? Rational(0) - q : q;
    }

    std::string parse_ident() {
        skip_ws();
        const std::size_t start = pos_;
        while (!at_end() && (is_ident(peek()) || (pos_ > start && is_digit(peek())))) ++pos_;
        return std::string(src_.substr(start, pos_ - start));
    }

    // ---- grammar ----
    ExprPtr parse_expr() {
        ExprPtr left = parse_term();
        while (true) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                left = ex_add(std::move(left), parse_term());
            } else if (peek() == '-') {
                ++pos_;
                left = ex_sub(std::move(left), parse_term());
            } else {
                return left;
            }
        }
    }

    ExprPtr parse_term() {
        ExprPtr left = parse_unary();
        while (true) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                left = ex_mul(std::move(left), parse_unary());
            } else if (peek() == '/') {
                ++pos_;
                left = ex_div(std::move(left), parse_unary());
            } else {
                return left;
            }
        }
    }

    ExprPtr parse_unary() {
        skip_ws();
        if (peek() == '-') {
            ++pos_;
            return ex_neg(parse_unary());
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            return ex_pow(std::move(base), parse_nat("a natural-number exponent"));
        }
        return base;
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (at_end()) fail("an expression");
        const char c = peek();
        if (is_digit(c)) return parse_number();
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_expr();
            expect(')', "')'");
            return e;
        }
        if (!is_ident(c)) fail("an expression");
        const std::size_t start = pos_;
        const std::string id = parse_ident();
        if (id == "x") return ex_var();
        if (id == "e") return ex_e();
        if (id == "pi") return ex_pi();
        if (id == "liouville") {
            expect('(', "'('");
            const std::uint32_t base = parse_nat("an integer base");
            if (base < 2) throw ParseError(start + 1, "a liouville base of at least 2");
            expect(')', "')'");
            return ex_liouville(base);
        }
        if (id == "root") {
            expect('(', "'('");
            skip_ws();
            const std::size_t poly_at = pos_;
            ExprPtr payload = parse_expr();
            auto poly = rational_polynomial_of(*payload);
            if (!poly) {
                throw ParseError(poly_at + 1,
                                 "a polynomial in x with rational coefficients");
            }
            expect(';', "';'");
            Rational lo = parse_field();
            expect(';', "';'");
            Rational hi = parse_field();
            expect(')', "')'");
            return ex_root(poly->coefficients(), std::move(lo), std::move(hi));
        }
        if (id == "deriv") {
            expect('(', "'('");
            ExprPtr body = parse_expr();
            expect(';', "';'");
            ExprPtr at = parse_expr();
            expect(')', "')'");
            return ex_deriv(std::move(body), std::move(at));
        }
        if (id == "integral") {
            expect('(', "'('");
            ExprPtr body = parse_expr();
            expect(';', "';'");
            ExprPtr lo = parse_expr();
            expect(';', "';'");
            ExprPtr hi = parse_expr();
            expect(')', "')'");
            return ex_integral(std::move(body), std::move(lo), std::move(hi));
        }
        if (id == "min_on") {
            expect('(', "'('");
            ExprPtr body = parse_expr();
            expect(';', "';'");
            Rational lo = parse_field();
            expect(';', "';'");
            Rational hi = parse_field();
            expect(')', "')'");
            return ex_min_on(std::move(body), std::move(lo), std::move(hi));
        }
        throw ParseError(start + 1,
                         "one of x, e, pi, root(...), liouville(...), deriv(...), "
                         "integral(...), min_on(...)");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parse the concrete syntax above into an AST; throws ParseError.
inline ExprPtr parse_expression(std::string_view text) {
    return detail::Parser(text).run();
}

} // namespace stratum
