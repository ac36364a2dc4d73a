#pragma once

/**
 * Level-tagged exact reals as certified approximant functions.
 *
 * A FractalReal is a total function k -> Rational whose value at k lies
 * strictly within 2^-k of the real it names, together with a level tag,
 * a rigorous magnitude bound, and a provenance record. Approximants are
 * pure: the same k always yields the same rational, so any two requested
 * precisions j < k satisfy |f(j) - f(k)| < 2^-j + 2^-k by construction
 * and the property is testable without knowing the named real.
 *
 * Arithmetic composes approximants with shifted precision requests; the
 * shift for multiplication comes from the operands' magnitude bounds.
 * Reciprocals demand an explicit apartness-from-zero witness, because
 * zero-testing an exact real is only semi-decidable.
 */

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "stratum/errors.hpp"
#include "stratum/fuel.hpp"
#include "stratum/level.hpp"
#include "stratum/rational.hpp"

namespace stratum {

struct Provenance {
    enum class Kind { Rational, Integer, Algebraic, Series, Derived };

    Kind kind = Kind::Rational;
    std::string detail;

    static Provenance rational() { return {Kind::Rational, ""}; }
    static Provenance integer() { return {Kind::Integer, ""}; }
    static Provenance algebraic(std::string poly) { return {Kind::Algebraic, std::move(poly)}; }
    static Provenance series(std::string name) { return {Kind::Series, std::move(name)}; }
    static Provenance derived(std::string op) { return {Kind::Derived, std::move(op)}; }
};

class FractalReal {
public:
    using Approximant = std::function<Rational(std::uint32_t)>;

    FractalReal() : FractalReal(embed_rational(Rational(0), Level(0))) {}

    /// Wraps an approximant, deriving the magnitude bound from one probe:
    /// |f(0)| + 1 is always >= |x| because |x - f(0)| < 1.
    static FractalReal from_approximant(Approximant fn, Level level, Provenance prov) {
        Rational bound = abs(fn(0)) + Rational(1);
        return FractalReal(std::move(fn), level, std::move(prov), std::move(bound));
    }

    /// Wraps an approximant with a caller-certified magnitude bound
    /// (must satisfy bound >= |x|). Used by operators that can compose
    /// bounds without evaluating anything.
    static FractalReal from_approximant_with_bound(Approximant fn, Level level,
                                                   Provenance prov, Rational bound) {
        return FractalReal(std::move(fn), level, std::move(prov), std::move(bound));
    }

    /// The constant approximant: every precision returns q itself.
    static FractalReal embed_rational(const Rational& q, Level level) {
        return FractalReal([q](std::uint32_t) { return q; }, level,
                           Provenance::rational(), abs(q) + Rational(1));
    }

    /// Same constant embedding, tagged as integer provenance.
    static FractalReal embed_integer(const BigInt& n, Level level) {
        Rational q(n);
        return FractalReal([q](std::uint32_t) { return q; }, level,
                           Provenance::integer(), abs(q) + Rational(1));
    }

    /// Certified approximation: |x - approx(k)| < 2^-k. Charges one
    /// approximant step against the active meter.
    Rational approx(std::uint32_t k) const {
        fuel::tick();
        return impl_->fn(k);
    }

    Level level() const { return impl_->level; }
    const Rational& magnitude_bound() const { return impl_->bound; }
    const Provenance& provenance() const { return impl_->prov; }

    /// Same value, re-tagged at a (typically higher) level.
    FractalReal with_level(Level level) const {
        FractalReal copy = *this;
        copy.impl_ = std::make_shared<Impl>(Impl{impl_->fn, level, impl_->prov, impl_->bound});
        return copy;
    }

private:
    struct Impl {
        Approximant fn;
        Level level;
        Provenance prov;
        Rational bound;
    };

    FractalReal(Approximant fn, Level level, Provenance prov, Rational bound)
        : impl_(std::make_shared<Impl>(
              Impl{std::move(fn), level, std::move(prov), std::move(bound)})) {}

    std::shared_ptr<const Impl> impl_;
};

inline FractalReal embed_rational(const Rational& q, Level level = Level(0)) {
    return FractalReal::embed_rational(q, level);
}

inline FractalReal add(const FractalReal& x, const FractalReal& y) {
    return FractalReal::from_approximant_with_bound(
        [x, y](std::uint32_t k) { return x.approx(k + 1) + y.approx(k + 1); },
        level_join(x.level(), y.level()), Provenance::derived("add"),
        x.magnitude_bound() + y.magnitude_bound());
}

inline FractalReal sub(const FractalReal& x, const FractalReal& y) {
    return FractalReal::from_approximant_with_bound(
        [x, y](std::uint32_t k) { return x.approx(k + 1) - y.approx(k + 1); },
        level_join(x.level(), y.level()), Provenance::derived("sub"),
        x.magnitude_bound() + y.magnitude_bound());
}

inline FractalReal neg(const FractalReal& x) {
    return FractalReal::from_approximant_with_bound(
        [x](std::uint32_t k) { return -x.approx(k); },
        x.level(), Provenance::derived("neg"), x.magnitude_bound());
}

/// Product. |xy - f(k+s) g(k+s)| <= |x| 2^-(k+s) + |g(k+s)| 2^-(k+s)
/// < (bx + by + 1) 2^-(k+s) <= 2^-k once 2^s >= bx + by + 1.
inline FractalReal mul(const FractalReal& x, const FractalReal& y) {
    const std::uint32_t s =
        Rational::ceil_log2(x.magnitude_bound() + y.magnitude_bound() + Rational(1));
    return FractalReal::from_approximant_with_bound(
        [x, y, s](std::uint32_t k) { return x.approx(k + s) * y.approx(k + s); },
        level_join(x.level(), y.level()), Provenance::derived("mul"),
        x.magnitude_bound() * y.magnitude_bound());
}

/// Scale by an exact rational: a cheaper shift than full multiplication,
/// used where one factor is known rational (finite difference quotients).
inline FractalReal scale_by_rational(const FractalReal& x, const Rational& c) {
    if (c.is_zero()) return embed_rational(Rational(0), x.level());
    const std::uint32_t s = Rational::ceil_log2(abs(c));
    return FractalReal::from_approximant_with_bound(
        [x, c, s](std::uint32_t k) { return c * x.approx(k + s); },
        x.level(), Provenance::derived("scale"), abs(c) * x.magnitude_bound());
}

/// Reciprocal under an apartness witness: the caller asserts, and the
/// approximant at `apartness_k` confirms, that |x| > 2^-apartness_k with
/// margin. Without such a witness inversion is not computable, because
/// apartness from zero is only semi-decidable.
inline FractalReal invert(const FractalReal& x, std::uint32_t apartness_k) {
    const Rational witness = x.approx(apartness_k);
    if (!(abs(witness) > Rational(2) * Rational::pow2(-static_cast<std::int64_t>(apartness_k)))) {
        throw ApartnessError(
            "apartness-not-witnessed: |approximant(" + std::to_string(apartness_k) +
            ")| = " + abs(witness).str() + " is not above 2*2^-" + std::to_string(apartness_k));
    }
    const std::uint32_t a = apartness_k;
    // |x| > 2^-a, and f(k + 2a + 2) is within 2^-(k+2a+2) of x, so
    // |1/x - 1/f| = |x - f| / (|x||f|) < 2^-(k+2a+2) / (3/4 * 2^-2a) < 2^-k.
    return FractalReal::from_approximant_with_bound(
        [x, a](std::uint32_t k) { return Rational(1) / x.approx(k + 2 * a + 2); },
        x.level(), Provenance::derived("invert"), Rational::pow2(a));
}

inline FractalReal operator+(const FractalReal& x, const FractalReal& y) { return add(x, y); }
inline FractalReal operator-(const FractalReal& x, const FractalReal& y) { return sub(x, y); }
inline FractalReal operator*(const FractalReal& x, const FractalReal& y) { return mul(x, y); }
inline FractalReal operator-(const FractalReal& x) { return neg(x); }

enum class Ordering3 { Less, Greater, Indistinguishable };

/// Three-valued comparison at precision k. Less and Greater are sound
/// claims about the named reals; Indistinguishable only reports that the
/// approximants at k cannot separate them (|x - y| < 4 * 2^-k).
inline Ordering3 compare_at(const FractalReal& x, const FractalReal& y, std::uint32_t k) {
    const Rational fx = x.approx(k);
    const Rational fy = y.approx(k);
    const Rational eps = Rational::pow2(-static_cast<std::int64_t>(k));
    if (fx + eps < fy - eps) return Ordering3::Less;
    if (fy + eps < fx - eps) return Ordering3::Greater;
    return Ordering3::Indistinguishable;
}

} // namespace stratum
