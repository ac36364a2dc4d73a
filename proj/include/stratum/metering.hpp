#pragma once

/**
 * Fuel-metered evaluation. metered_approx runs an approximant under a
 * per-level polynomial step budget and reports either the value or the
 * point of exhaustion; tamed_check measures the cost curve of a series
 * constant and certifies (over a finite range) that it stays inside a
 * fitted polynomial envelope.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "stratum/fuel.hpp"
#include "stratum/real.hpp"

namespace stratum {

struct MeteredResult {
    std::optional<Rational> value; // empty means the budget was exhausted
    std::uint64_t consumed = 0;

    bool exceeded() const { return !value.has_value(); }
};

/// Evaluates x.approx(k) under budget_for(budget, x.level(), k) abstract
/// steps. Steps are one per rational field operation and one per
/// approximant invocation; counts are deterministic for fixed inputs.
/// Metered and unmetered evaluation agree whenever a value is returned.
inline MeteredResult metered_approx(const FractalReal& x, std::uint32_t k,
                                    const FuelBudget& budget = FuelBudget()) {
    fuel::StepMeter meter;
    meter.limit = fuel::clamp_limit(budget_for(budget, x.level(), k));
    fuel::MeterScope scope(meter);
    try {
        Rational value = x.approx(k);
        return MeteredResult{std::move(value), meter.consumed};
    } catch (const fuel::BudgetExhausted&) {
        return MeteredResult{std::nullopt, meter.consumed};
    }
}

/// Measured step count of one unmetered-limit evaluation at precision k.
inline std::uint64_t count_steps(const FractalReal& x, std::uint32_t k) {
    fuel::StepMeter meter;
    fuel::MeterScope scope(meter);
    x.approx(k);
    return meter.consumed;
}

struct TamedOutcome {
    bool tamed = false;
    Rational max_ratio;                      // max over k of steps(k) / k^d
    std::optional<std::uint32_t> violation_k; // first k breaking the fitted envelope
};

/// Checks that approximation cost grows no faster than C * k^d over
/// k = 1..k_max. The envelope constant C is fitted as the max ratio over
/// the first half of the range and then verified against the second
/// half; the first k whose cost escapes the envelope is reported.
/// Requires a series-provenance value (the question is about named
/// constants given by series, not about derived arithmetic).
inline TamedOutcome tamed_check(const FractalReal& x, std::uint32_t degree,
                                std::uint32_t k_max) {
    if (x.provenance().kind != Provenance::Kind::Series) {
        throw Error("tamed_check requires a series-provenance constant");
    }
    if (k_max < 2) throw Error("tamed_check needs k_max >= 2");

    std::vector<Rational> ratios;
    ratios.reserve(k_max);
    for (std::uint32_t k = 1; k <= k_max; ++k) {
        const std::uint64_t steps = count_steps(x, k);
        Rational kd = Rational::pow(Rational(static_cast<int>(k)), degree);
        ratios.push_back(Rational(BigInt(steps)) / kd);
    }

    const std::uint32_t fit_end = k_max / 2; // fit window k = 1..fit_end
    Rational fitted(0);
    Rational max_ratio(0);
    for (std::uint32_t k = 1; k <= k_max; ++k) {
        if (ratios[k - 1] > max_ratio) max_ratio = ratios[k - 1];
        if (k <= fit_end && ratios[k - 1] > fitted) fitted = ratios[k - 1];
    }
    for (std::uint32_t k = fit_end + 1; k <= k_max; ++k) {
        if (ratios[k - 1] > fitted) {
            return TamedOutcome{false, max_ratio, k};
        }
    }
    return TamedOutcome{true, max_ratio, std::nullopt};
}

} // namespace stratum
