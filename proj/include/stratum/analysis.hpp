#pragma once

/**
 * Certified calculus over effective functions.
 *
 * An EffectiveFunction is a rational-point evaluator together with a
 * uniform modulus of continuity on a compact rational interval: for any
 * target eps > 0 the modulus names a delta > 0 with |F(x) - F(y)| < eps
 * whenever |x - y| < delta. Everything here consumes only that data, so
 * every bound is certified rather than heuristic:
 *
 *   - point evaluation picks the sampling precision from the modulus;
 *   - differentiation evaluates a finite difference whose step comes
 *     from a caller-supplied derivative modulus;
 *   - integration chooses the partition count from the modulus so the
 *     left Riemann sum provably lands within the target;
 *   - polynomial approximation samples on a uniform net and carries the
 *     coefficient rounding into the stated error;
 *   - sup-norm bounds scan a modulus-derived net and add explicit slack,
 *     returning u with sup <= u < sup + 2^-k.
 *
 * Levels escalate by exactly one across differentiation and integration;
 * evaluation joins the levels of the function and the point.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stratum/constants.hpp"
#include "stratum/errors.hpp"
#include "stratum/polynomial.hpp"
#include "stratum/real.hpp"

namespace stratum {

/// Monotone map eps -> delta witnessing uniform continuity.
class Modulus {
public:
    Modulus() : fn_([](const Rational&) { return Rational(1); }) {}
    explicit Modulus(std::function<Rational(const Rational&)> fn) : fn_(std::move(fn)) {}

    Rational operator()(const Rational& eps) const { return fn_(eps); }

    /// Modulus of an L-Lipschitz function; L <= 0 means constant.
    static Modulus lipschitz(const Rational& L) {
        if (!(L > Rational(0))) return Modulus();
        return Modulus([L](const Rational& eps) { return eps / L; });
    }

private:
    std::function<Rational(const Rational&)> fn_;
};

struct EffectiveFunction {
    /// Evaluation at an exact rational point of the domain.
    std::function<FractalReal(const Rational&)> rational_eval;
    /// Optional exact fast path: present when rational points map to
    /// exact rationals (polynomials with rational coefficients). Must
    /// agree with rational_eval wherever defined.
    std::optional<std::function<Rational(const Rational&)>> exact_eval;
    Modulus modulus;
    Level level;
    Rational domain_lo;
    Rational domain_hi;

    /// Value of F at rational q to within 2^-j (exactly, on the fast path).
    Rational sample(const Rational& q, std::uint32_t j) const {
        if (exact_eval) return (*exact_eval)(q);
        return rational_eval(q).approx(j);
    }
};

/// Polynomial as an effective function: exact evaluation, slope bound
/// from the Bernstein control net of the derivative over the domain.
inline EffectiveFunction from_polynomial(const RationalPolynomial& p, const Rational& lo,
                                         const Rational& hi, Level level = Level(0)) {
    if (!(lo <= hi)) throw Error("from_polynomial needs lo <= hi");
    EffectiveFunction f;
    f.rational_eval = [p, level](const Rational& q) {
        return embed_rational(p.eval(q), level);
    };
    f.exact_eval = [p](const Rational& q) { return p.eval(q); };
    f.modulus = Modulus::lipschitz(p.slope_bound_on(lo, hi));
    f.level = level;
    f.domain_lo = lo;
    f.domain_hi = hi;
    return f;
}

namespace detail {

inline Rational clamp(const Rational& q, const Rational& lo, const Rational& hi) {
    if (q < lo) return lo;
    if (q > hi) return hi;
    return q;
}

/// Least j with 2^-j <= delta.
inline std::uint32_t precision_for(const Rational& delta) {
    std::uint32_t j = 0;
    Rational p(1);
    while (!(p <= delta)) {
        p = p / Rational(2);
        ++j;
    }
    return j;
}

inline void check_domain(const EffectiveFunction& F, const FractalReal& x) {
    const FractalReal lo = embed_rational(F.domain_lo, Level(0));
    const FractalReal hi = embed_rational(F.domain_hi, Level(0));
    constexpr std::uint32_t k_check = 24;
    if (compare_at(x, lo, k_check) == Ordering3::Less ||
        compare_at(x, hi, k_check) == Ordering3::Greater) {
        throw DomainViolation("domain-violation: point certified outside [" +
                              F.domain_lo.str() + ", " + F.domain_hi.str() + "]");
    }
}

} // namespace detail

/// F(x) for a real point x of the domain. The approximant at k samples x
/// at the precision the modulus demands for eps = 2^-(k+1) and evaluates
/// there, splitting the error budget between the two stages. Points that
/// cannot be certified inside the domain at the checking precision are
/// accepted (boundary indistinguishability); certified outsiders raise
/// domain-violation.
inline FractalReal eval_fn(const EffectiveFunction& F, const FractalReal& x) {
    detail::check_domain(F, x);
    EffectiveFunction Fc = F;
    FractalReal xc = x;
    auto fn = [Fc, xc](std::uint32_t k) {
        const Rational eps = Rational::pow2(-static_cast<std::int64_t>(k) - 1);
        const Rational delta = Fc.modulus(eps);
        const std::uint32_t j = detail::precision_for(delta);
        const Rational q = detail::clamp(xc.approx(j), Fc.domain_lo, Fc.domain_hi);
        return Fc.sample(q, k + 1);
    };
    return FractalReal::from_approximant(fn, level_join(F.level, x.level()),
                                         Provenance::derived("eval"));
}

/// Derivative value at x from finite differences. dmod is a derivative
/// modulus: for 0 < |h| < dmod(eps) the difference quotient is within
/// eps of F'(x). The approximant at k uses the step dmod(2^-(k+1)) / 2
/// and approximates the quotient to 2^-(k+1), totalling under 2^-k.
inline FractalReal differentiate(const EffectiveFunction& F, const FractalReal& x,
                                 const Modulus& dmod) {
    detail::check_domain(F, x);
    EffectiveFunction Fc = F;
    FractalReal xc = x;
    auto fn = [Fc, xc, dmod](std::uint32_t k) {
        const Rational eps = Rational::pow2(-static_cast<std::int64_t>(k) - 1);
        const Rational h = dmod(eps) / Rational(2);
        const FractalReal ahead = eval_fn(Fc, xc + embed_rational(h, Level(0)));
        const FractalReal here = eval_fn(Fc, xc);
        const FractalReal quotient = scale_by_rational(ahead - here, Rational(1) / h);
        return quotient.approx(k + 1);
    };
    return FractalReal::from_approximant(fn, level_lift(level_join(F.level, x.level())),
                                         Provenance::derived("differentiate"));
}

/// Left Riemann integral over [a, b] with the partition count chosen
/// from the modulus: mesh strictly below modulus(2^-(k+1) / (b - a))
/// bounds the discretization error by 2^-(k+1), and per-sample
/// approximation at k + 1 + ceil_log2(b - a) bounds the rest.
inline FractalReal integrate(const EffectiveFunction& F, const Rational& a,
                             const Rational& b) {
    if (!(a <= b)) throw Error("integrate needs a <= b");
    if (!(F.domain_lo <= a) || !(b <= F.domain_hi)) {
        throw DomainViolation("domain-violation: integration bounds outside domain");
    }
    const Level result_level = level_lift(F.level);
    if (a == b) {
        return embed_rational(Rational(0), result_level).with_level(result_level);
    }
    EffectiveFunction Fc = F;
    const Rational len = b - a;
    auto fn = [Fc, a, len](std::uint32_t k) {
        const Rational eps1 = Rational::pow2(-static_cast<std::int64_t>(k) - 1) / len;
        const Rational delta1 = Fc.modulus(eps1);
        const BigInt m_big = (len / delta1).floor_int() + 1;
        const std::uint64_t m = static_cast<std::uint64_t>(m_big);
        const std::uint32_t j = k + 1 + Rational::ceil_log2(len);
        const Rational mesh = len / Rational(BigInt(m));
        Rational acc(0);
        Rational x = a;
        for (std::uint64_t i = 0; i < m; ++i) {
            acc = acc + Fc.sample(x, j);
            x = x + mesh;
        }
        return acc * mesh;
    };
    return FractalReal::from_approximant(fn, result_level, Provenance::derived("integrate"));
}

/// Indefinite integral x -> integral of F from a to x, as an effective
/// function on F's domain. Its modulus is eps -> eps / M for a certified
/// bound M on |F| (net maximum plus modulus slack), since
/// |G(x) - G(y)| <= M |x - y|.
inline EffectiveFunction antiderivative(const EffectiveFunction& F, const Rational& a) {
    if (!(F.domain_lo <= a) || !(a <= F.domain_hi)) {
        throw DomainViolation("domain-violation: base point outside domain");
    }
    // Certified bound on |F|: sample a net of mesh modulus(1)/2 at
    // precision 4; any point is within modulus(1) of a sample, so its
    // value is within 1 of a sampled value, which itself is known to 2^-4.
    Rational M(0);
    {
        const Rational delta = F.modulus(Rational(1)) / Rational(2);
        Rational x = F.domain_lo;
        while (true) {
            Rational v = abs(F.sample(x, 4));
            if (v > M) M = v;
            if (x == F.domain_hi) break;
            x = x + delta;
            if (x > F.domain_hi) x = F.domain_hi;
        }
        M = M + Rational(1, 16) + Rational(1);
    }
    EffectiveFunction Fc = F;
    EffectiveFunction G;
    G.rational_eval = [Fc, a](const Rational& q) {
        if (q >= a) return integrate(Fc, a, q);
        return neg(integrate(Fc, q, a));
    };
    G.exact_eval = std::nullopt;
    G.modulus = Modulus([M](const Rational& eps) { return eps / M; });
    G.level = level_lift(F.level);
    G.domain_lo = F.domain_lo;
    G.domain_hi = F.domain_hi;
    return G;
}

/// Degree-m Bernstein polynomial of F on [0, 1], coefficients sampled at
/// precision k0 = 16 + ceil_log2(m + 1) + 1 so coefficient rounding
/// contributes < 2^-16 uniformly (the basis is a partition of unity).
inline RationalPolynomial bernstein_approx(const EffectiveFunction& F, std::uint32_t m) {
    if (m == 0) throw Error("bernstein_approx needs m >= 1");
    if (!(F.domain_lo <= Rational(0)) || !(Rational(1) <= F.domain_hi)) {
        throw DomainViolation("bernstein_approx expects [0,1] inside the domain");
    }
    const std::uint32_t k0 =
        16 + Rational::ceil_log2(Rational(static_cast<int>(m + 1))) + 1;
    std::vector<Rational> samples;
    samples.reserve(m + 1);
    for (std::uint32_t i = 0; i <= m; ++i) {
        samples.push_back(F.sample(Rational(BigInt(i), BigInt(m)), k0));
    }
    // Expand sum_i f_i C(m,i) x^i (1-x)^(m-i) into monomial coefficients:
    // the x^(i+j) term picks up f_i C(m,i) C(m-i,j) (-1)^j.
    std::vector<Rational> coeffs(m + 1, Rational(0));
    BigInt choose_m_i = 1;
    for (std::uint32_t i = 0; i <= m; ++i) {
        if (i > 0) choose_m_i = choose_m_i * BigInt(m - i + 1) / BigInt(i);
        BigInt choose_rest = 1; // C(m-i, j)
        for (std::uint32_t j = 0; j + i <= m; ++j) {
            if (j > 0) choose_rest = choose_rest * BigInt(m - i - j + 1) / BigInt(j);
            Rational term = samples[i] * Rational(choose_m_i * choose_rest);
            coeffs[i + j] = (j % 2 == 0) ? coeffs[i + j] + term : coeffs[i + j] - term;
        }
    }
    return RationalPolynomial(std::move(coeffs));
}

/// Certified uniform-distance bound: returns u with sup |F - G| <= u
/// < sup + 2^-k over the (shared) domain. Scans a net fine enough that
/// both functions vary below 2^-(k+2) between neighbours, evaluates the
/// pointwise distance to 2^-(k+2), and adds the slack explicitly.
inline Rational sup_norm_bound(const EffectiveFunction& F, const EffectiveFunction& G,
                               std::uint32_t k) {
    if (F.domain_lo != G.domain_lo || F.domain_hi != G.domain_hi) {
        throw Error("sup_norm_bound needs a shared domain");
    }
    const Rational eps = Rational::pow2(-static_cast<std::int64_t>(k) - 2);
    const Rational dF = F.modulus(eps);
    const Rational dG = G.modulus(eps);
    const Rational step = (dF < dG ? dF : dG) / Rational(2);
    const std::uint32_t j = k + 3; // each sample then errs below 2^-(k+2)
    Rational maxd(0);
    Rational x = F.domain_lo;
    while (true) {
        const Rational d = abs(F.sample(x, j) - G.sample(x, j));
        if (d > maxd) maxd = d;
        if (x == F.domain_hi) break;
        x = x + step;
        if (x > F.domain_hi) x = F.domain_hi;
    }
    return maxd + Rational(3) * eps;
}

} // namespace stratum
