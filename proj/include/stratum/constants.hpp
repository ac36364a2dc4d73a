#pragma once

/**
 * Canonical constructors for non-rational reals.
 *
 * poly_root isolates the unique root of a rational polynomial inside a
 * sign-changing bracket by deterministic bisection: the approximant at k
 * runs exactly enough halvings that the bracket is narrower than 2^-k,
 * so purity and the Cauchy property hold by construction.
 *
 * The series constants carry explicit tail bounds: each approximant sums
 * just enough terms that the dropped tail is provably below 2^-k. The
 * circle constant uses an arctangent identity (pi = 16 atan(1/5) -
 * 4 atan(1/239)) whose terms shrink geometrically; the alternating
 * quarter-circle series converges far too slowly to fit polynomial
 * step budgets and survives here only as a test oracle.
 */

#include <cstdint>
#include <string>

#include "stratum/errors.hpp"
#include "stratum/polynomial.hpp"
#include "stratum/real.hpp"

namespace stratum {

/// Unique-root isolation on [a, b] with p(a), p(b) of strictly opposite
/// sign. The approximant at k bisects m times, m least with
/// (b - a) * 2^-m < 2^-k, and returns the midpoint of the final bracket.
inline FractalReal poly_root(const RationalPolynomial& p, const Rational& a,
                             const Rational& b, Level level) {
    if (!(a < b)) throw Error("poly_root needs a < b");
    const Rational pa = p.eval(a);
    const Rational pb = p.eval(b);
    if (pa.is_zero() || pb.is_zero() || (pa.is_negative() == pb.is_negative())) {
        throw NoSignChangeError("no-sign-change: p(" + a.str() + ") = " + pa.str() +
                                ", p(" + b.str() + ") = " + pb.str());
    }
    const bool negative_at_lo = pa.is_negative();
    Rational width = b - a;
    Rational bound = abs(a) > abs(b) ? abs(a) : abs(b);
    bound = bound + Rational(1);
    auto fn = [p, a, b, width, negative_at_lo](std::uint32_t k) {
        std::uint32_t m = 0;
        Rational target = Rational::pow2(-static_cast<std::int64_t>(k));
        Rational w = width;
        while (!(w < target)) {
            w = w / Rational(2);
            ++m;
        }
        Rational lo = a;
        Rational hi = b;
        for (std::uint32_t i = 0; i < m; ++i) {
            Rational mid = (lo + hi) / Rational(2);
            Rational pm = p.eval(mid);
            if (pm.is_zero()) return mid;
            if (pm.is_negative() == negative_at_lo) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return (lo + hi) / Rational(2);
    };
    return FractalReal::from_approximant_with_bound(
        fn, level, Provenance::algebraic(p.str() + " on [" + a.str() + ", " + b.str() + "]"),
        bound);
}

inline FractalReal sqrt2() {
    return poly_root(RationalPolynomial({Rational(-2), Rational(0), Rational(1)}),
                     Rational(1), Rational(2), Level(1));
}

inline FractalReal golden_ratio() {
    return poly_root(RationalPolynomial({Rational(-1), Rational(-1), Rational(1)}),
                     Rational(1), Rational(2), Level(1));
}

/// e = sum 1/i!. The tail after m terms is below 2/(m+1)!, so the
/// approximant sums i = 0..m for the least m with 2/(m+1)! < 2^-k.
inline FractalReal constant_e() {
    auto fn = [](std::uint32_t k) {
        BigInt factorial = 1; // (m+1)!
        std::uint32_t m = 0;
        BigInt threshold = BigInt(1) << (k + 1); // 2/(m+1)! < 2^-k  <=>  (m+1)! > 2^(k+1)
        while (!(factorial > threshold)) {
            ++m;
            factorial *= m;
        }
        --m; // loop ended with (m+1)! in `factorial`
        Rational term(1);
        Rational acc(1);
        for (std::uint32_t i = 1; i <= m; ++i) {
            term = term / Rational(static_cast<int>(i));
            acc = acc + term;
        }
        return acc;
    };
    return FractalReal::from_approximant_with_bound(fn, Level(2), Provenance::series("e"),
                                                    Rational(3));
}

namespace detail {

/// Partial sum of atan(1/x) = sum (-1)^j / ((2j+1) x^(2j+1)), j = 0..m.
inline Rational arctan_recip_partial(std::uint32_t x, std::uint32_t m) {
    Rational sum(0);
    Rational xsq(static_cast<int>(x) * static_cast<int>(x));
    Rational power(1, x); // 1 / x^(2j+1)
    for (std::uint32_t j = 0; j <= m; ++j) {
        Rational term = power / Rational(static_cast<int>(2 * j + 1));
        sum = (j % 2 == 0) ? sum + term : sum - term;
        power = power / xsq;
    }
    return sum;
}

/// Least m such that coeff / ((2m+3) x^(2m+3)) <= 2^-(k+2); the next
/// omitted alternating term then bounds the truncation error.
inline std::uint32_t arctan_terms_needed(std::uint32_t coeff, std::uint32_t x,
                                         std::uint32_t k) {
    BigInt lhs = BigInt(coeff) << (k + 2);
    BigInt xcube = BigInt(x) * x * x;
    BigInt power = xcube; // x^(2m+3)
    std::uint32_t m = 0;
    while (!(BigInt(2 * m + 3) * power >= lhs)) {
        ++m;
        power *= BigInt(x) * x;
    }
    return m;
}

} // namespace detail

/// pi = 16 atan(1/5) - 4 atan(1/239); both series truncated so each
/// contributes error at most 2^-(k+2).
inline FractalReal constant_pi() {
    auto fn = [](std::uint32_t k) {
        const std::uint32_t m1 = detail::arctan_terms_needed(16, 5, k);
        const std::uint32_t m2 = detail::arctan_terms_needed(4, 239, k);
        Rational s1 = detail::arctan_recip_partial(5, m1);
        Rational s2 = detail::arctan_recip_partial(239, m2);
        return Rational(16) * s1 - Rational(4) * s2;
    };
    return FractalReal::from_approximant_with_bound(fn, Level(2), Provenance::series("pi"),
                                                    Rational(4));
}

/// sum_{j>=1} b^(-j!). The tail after m terms is below b^(-(m+1)!) * b/(b-1).
inline FractalReal constant_liouville(std::uint32_t base) {
    if (base < 2) throw Error("liouville base must be >= 2");
    auto fn = [base](std::uint32_t k) {
        // tail(m) < 2^-k  <=>  (b-1) * b^((m+1)! - 1) > 2^k
        const BigInt threshold = BigInt(1) << k;
        std::uint32_t m = 0;
        BigInt factorial = 1; // (m+1)!
        while (true) {
            BigInt exponent = factorial - 1;
            BigInt power = 1;
            BigInt b = base;
            BigInt e = exponent;
            BigInt sq = b;
            while (e > 0) { // fast exponentiation on plain integers
                if ((e & 1) != 0) power *= sq;
                sq *= sq;
                e >>= 1;
            }
            if (power * (base - 1) > threshold) break;
            ++m;
            factorial *= (m + 1);
        }
        Rational acc(0);
        BigInt jfact = 1;
        for (std::uint32_t j = 1; j <= m; ++j) {
            jfact *= j;
            BigInt denom = 1;
            BigInt b = base;
            BigInt e = jfact;
            while (e > 0) {
                if ((e & 1) != 0) denom *= b;
                b *= b;
                e >>= 1;
            }
            acc = acc + Rational(BigInt(1), denom);
        }
        return acc;
    };
    return FractalReal::from_approximant_with_bound(
        fn, Level(3), Provenance::series("liouville(" + std::to_string(base) + ")"),
        Rational(1));
}

} // namespace stratum
