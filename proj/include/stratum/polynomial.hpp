#pragma once

/**
 * Dense univariate polynomials over exact rationals, coefficients stored
 * low degree first with a nonzero leading coefficient (the zero
 * polynomial is the empty list). Includes the control-net machinery used
 * to bound a polynomial's slope over an interval: rewriting p' in the
 * Bernstein basis of the interval gives max |p'| <= max |net coefficient|,
 * which stays sharp even when the monomial coefficients are enormous.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "stratum/rational.hpp"

namespace stratum {

class RationalPolynomial {
public:
    RationalPolynomial() = default;
    explicit RationalPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
        trim();
    }

    const std::vector<Rational>& coefficients() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

    const Rational& coefficient(std::size_t i) const {
        static const Rational zero(0);
        return i < coeffs_.size() ? coeffs_[i] : zero;
    }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            acc = acc * x + coeffs_[i];
        }
        return acc;
    }

    RationalPolynomial derivative() const {
        std::vector<Rational> d;
        for (std::size_t i = 1; i < coeffs_.size(); ++i) {
            d.push_back(coeffs_[i] * Rational(static_cast<int>(i)));
        }
        return RationalPolynomial(std::move(d));
    }

    /// p(a + s*t) as a polynomial in t, exact.
    RationalPolynomial compose_affine(const Rational& a, const Rational& s) const {
        // Horner in the affine argument: result = ((c_d (a+st) + c_{d-1}) ...).
        std::vector<Rational> acc; // polynomial in t
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            // acc = acc * (a + s t) + c_i
            std::vector<Rational> next(acc.size() + 1, Rational(0));
            for (std::size_t j = 0; j < acc.size(); ++j) {
                next[j] += acc[j] * a;
                next[j + 1] += acc[j] * s;
            }
            if (next.empty()) next.push_back(Rational(0));
            next[0] += coeffs_[i];
            acc = std::move(next);
        }
        return RationalPolynomial(std::move(acc));
    }

    /// Bernstein-basis coefficients of this polynomial on [0,1]:
    /// p = sum_j beta_j B_{d,j}. Since the basis is a partition of unity,
    /// max |beta_j| bounds max |p| on [0,1].
    std::vector<Rational> bernstein_coefficients() const {
        if (coeffs_.empty()) return {Rational(0)};
        const std::size_t d = coeffs_.size() - 1;
        std::vector<BigInt> choose_d(d + 1);
        choose_d[0] = 1;
        for (std::size_t i = 1; i <= d; ++i) {
            choose_d[i] = choose_d[i - 1] * BigInt(d - i + 1) / BigInt(i);
        }
        std::vector<Rational> beta(d + 1, Rational(0));
        for (std::size_t j = 0; j <= d; ++j) {
            BigInt choose_j = 1; // C(j, i) running value
            for (std::size_t i = 0; i <= j; ++i) {
                if (i > 0) choose_j = choose_j * BigInt(j - i + 1) / BigInt(i);
                beta[j] += coeffs_[i] * Rational(choose_j, choose_d[i]);
            }
        }
        return beta;
    }

    /// Rigorous upper bound for max |p'(x)| over [lo, hi].
    Rational slope_bound_on(const Rational& lo, const Rational& hi) const {
        RationalPolynomial d = derivative();
        if (d.is_zero()) return Rational(0);
        RationalPolynomial on_unit = d.compose_affine(lo, hi - lo);
        Rational best(0);
        for (const Rational& b : on_unit.bernstein_coefficients()) {
            Rational m = abs(b);
            if (m > best) best = m;
        }
        return best;
    }

    /// Human-readable and machine-reparseable form: terms "c*x^i" joined
    /// with " + ", coefficients printed as p/q.
    std::string str() const {
        if (coeffs_.empty()) return "0/1*x^0";
        std::string out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i].is_zero() && coeffs_.size() > 1) continue;
            if (!out.empty()) out += " + ";
            out += coeffs_[i].numerator().str() + "/" + coeffs_[i].denominator().str() +
                   "*x^" + std::to_string(i);
        }
        return out;
    }

    friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) {
        return a.coeffs_ == b.coeffs_;
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

} // namespace stratum
