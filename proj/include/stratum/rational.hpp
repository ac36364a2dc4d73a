#pragma once

/**
 * Exact rational arithmetic over arbitrary-precision integers.
 *
 * Values are kept normalized: gcd(num, den) == 1 and den > 0, so equality
 * is representational equality and hashing/printing are canonical. Every
 * field operation (+, -, *, /, unary -) charges one abstract step against
 * the active evaluation meter; comparisons and accessors are free.
 *
 * Decimal rendering truncates toward zero. It never rounds a digit up, so
 * a printed value never overstates the precision of the approximation it
 * came from.
 */

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "stratum/fuel.hpp"

namespace stratum {

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(int n) : num_(n), den_(1) {}                 // NOLINT(google-explicit-constructor)
    Rational(const BigInt& n) : num_(n), den_(1) {}       // NOLINT(google-explicit-constructor)
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    const BigInt& numerator() const { return num_; }
    const BigInt& denominator() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        fuel::tick();
        if (a.num_ == 0) return b;
        if (b.num_ == 0) return a;
        return sum_normalized(a.num_, a.den_, b.num_, b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        fuel::tick();
        if (b.num_ == 0) return a;
        if (a.num_ == 0) return Rational(raw_tag{}, -b.num_, b.den_);
        return sum_normalized(a.num_, a.den_, -b.num_, b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        fuel::tick();
        if (a.num_ == 0 || b.num_ == 0) return Rational();
        if (a.den_ == 1) {
            if (a.num_ == 1) return b;
            if (a.num_ == -1) return Rational(raw_tag{}, -b.num_, b.den_);
        }
        if (b.den_ == 1) {
            if (b.num_ == 1) return a;
            if (b.num_ == -1) return Rational(raw_tag{}, -a.num_, a.den_);
        }
        // squaring a reduced fraction cannot introduce a common factor
        if (a.num_ == b.num_ && a.den_ == b.den_)
            return Rational(raw_tag{}, a.num_ * a.num_, a.den_ * a.den_);
        return product_normalized(a.num_, a.den_, b.num_, b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        fuel::tick();
        if (b.num_ == 0) throw std::domain_error("rational with zero denominator");
        if (b.den_ == 1) {
            if (b.num_ == 1) return a;
            if (b.num_ == -1) return Rational(raw_tag{}, -a.num_, a.den_);
        }
        if (a.num_ == 0) return Rational();
        if (b.num_ < 0) return product_normalized(a.num_, a.den_, -b.den_, -b.num_);
        return product_normalized(a.num_, a.den_, b.den_, b.num_);
    }
    Rational operator-() const {
        fuel::tick();
        Rational r = *this;
        r.num_ = -r.num_;
        return r;
    }

    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend Rational abs(const Rational& a) { return a.num_ < 0 ? -a : a; }

    /// 2^e for signed e, exact.
    static Rational pow2(std::int64_t e) {
        BigInt p = 1;
        p <<= static_cast<unsigned>(e < 0 ? -e : e);
        return e >= 0 ? Rational(p) : Rational(1, p);
    }

    /// q^n for natural n by repeated multiplication (exact, ticks n-1 ops).
    static Rational pow(const Rational& q, std::uint32_t n) {
        Rational acc = 1;
        for (std::uint32_t i = 0; i < n; ++i) acc = acc * q;
        return acc;
    }

    /// Least s >= 0 with 2^s >= q; zero for q <= 1. Metadata helper, no tick.
    static std::uint32_t ceil_log2(const Rational& q) {
        std::uint32_t s = 0;
        BigInt p = 1;
        while (p * q.den_ < q.num_) {
            p <<= 1;
            ++s;
        }
        return s;
    }

    /// Largest integer <= q. Metadata helper, no tick.
    BigInt floor_int() const {
        BigInt quotient = num_ / den_;
        if (num_ < 0 && quotient * den_ != num_) quotient -= 1;
        return quotient;
    }

    /// Decimal string with `digits` fractional digits, truncated toward zero.
    std::string to_decimal(std::size_t digits) const {
        BigInt n = num_ < 0 ? BigInt(-num_) : num_;
        BigInt whole = n / den_;
        BigInt rem = n % den_;
        std::string out = num_ < 0 ? "-" : "";
        out += whole.str();
        if (digits > 0) {
            out += '.';
            for (std::size_t i = 0; i < digits; ++i) {
                rem *= 10;
                out += static_cast<char>('0' + static_cast<int>(rem / den_));
                rem %= den_;
            }
        }
        return out;
    }

    /// Canonical text form: "p/q", or "p" when the value is an integer.
    std::string str() const {
        if (den_ == 1) return num_.str();
        return num_.str() + "/" + den_.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& q) {
        return os << q.str();
    }

private:
    // Constructs without normalizing; callers must guarantee the invariant
    // (lowest terms, positive denominator) already holds.
    struct raw_tag {};
    Rational(raw_tag, BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {}

    // Sum of two reduced fractions. Any factor the raw sum shares with its
    // denominator divides g = gcd(d1, d2), so one small gcd after the fact
    // finishes the reduction instead of a full-width one.
    static Rational sum_normalized(const BigInt& n1, const BigInt& d1,
                                   const BigInt& n2, const BigInt& d2) {
        BigInt g = boost::multiprecision::gcd(d1, d2);
        if (g == 1) return Rational(raw_tag{}, n1 * d2 + n2 * d1, d1 * d2);
        const BigInt e2 = d2 / g;
        BigInt t = n1 * e2 + n2 * (d1 / g);
        if (t == 0) return Rational();
        BigInt g2 = boost::multiprecision::gcd(t < 0 ? BigInt(-t) : t, g);
        if (g2 == 1) return Rational(raw_tag{}, std::move(t), d1 * e2);
        return Rational(raw_tag{}, t / g2, (d1 / g2) * e2);
    }

    // Product of two reduced fractions (d1, d2 > 0). Dividing out the cross
    // factors gcd(n1, d2) and gcd(n2, d1) up front leaves no common factor.
    static Rational product_normalized(const BigInt& n1, const BigInt& d1,
                                       const BigInt& n2, const BigInt& d2) {
        BigInt g1 = boost::multiprecision::gcd(n1 < 0 ? BigInt(-n1) : n1, d2);
        BigInt g2 = boost::multiprecision::gcd(n2 < 0 ? BigInt(-n2) : n2, d1);
        return Rational(raw_tag{}, (n1 / g1) * (n2 / g2), (d1 / g2) * (d2 / g1));
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        // den == 1 or |num| == 1 is already in lowest terms; skip the gcd
        if (den_ == 1 || num_ == 1 || num_ == -1) return;
        BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_;
    BigInt den_;
};

} // namespace stratum
