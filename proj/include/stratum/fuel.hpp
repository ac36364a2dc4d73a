#pragma once

#include <cstdint>
#include <limits>
#include <map>

#include <boost/multiprecision/cpp_int.hpp>

#include "stratum/level.hpp"

namespace stratum {

using BigInt = boost::multiprecision::cpp_int;

/// Per-level polynomial budget rule: an evaluation at precision k may
/// spend at most `constant * k^exponent` abstract steps. A step is one
/// rational field operation or one approximant invocation.
struct BudgetRule {
    std::uint64_t constant = 1;
    std::uint32_t exponent = 0;
};

/// Table of budget rules keyed by level. Levels without an explicit
/// entry use the defaults: exponents 2, 5, 8, 12 for levels 0..3 and
/// 12 + 4*(n-3) beyond, constant 1 throughout.
class FuelBudget {
public:
    FuelBudget() = default;

    static constexpr std::uint32_t default_exponent(std::uint32_t level) {
        switch (level) {
            case 0: return 2;
            case 1: return 5;
            case 2: return 8;
            case 3: return 12;
            default: return 12 + 4 * (level - 3);
        }
    }

    BudgetRule rule_for(Level level) const {
        auto it = overrides_.find(level.index);
        if (it != overrides_.end()) return it->second;
        return BudgetRule{1, default_exponent(level.index)};
    }

    void set_rule(Level level, BudgetRule rule) { overrides_[level.index] = rule; }

private:
    std::map<std::uint32_t, BudgetRule> overrides_;
};

/// Exact step allowance for evaluating a level-`level` value at
/// precision k: constant * k^exponent.
inline BigInt budget_for(const FuelBudget& budget, Level level, std::uint32_t k) {
    BudgetRule rule = budget.rule_for(level);
    BigInt steps = 1;
    for (std::uint32_t i = 0; i < rule.exponent; ++i) steps *= k;
    return steps * rule.constant;
}

namespace fuel {

/// Thrown internally when a metered evaluation runs out of steps.
/// Never escapes metered_approx; callers see a BudgetExceeded value.
struct BudgetExhausted {};

struct StepMeter {
    std::uint64_t consumed = 0;
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max();
};

inline thread_local StepMeter* active_meter = nullptr;

/// Charge one abstract step against the active meter, if any.
inline void tick() {
    StepMeter* m = active_meter;
    if (m != nullptr) {
        if (++m->consumed > m->limit) throw BudgetExhausted{};
    }
}

/// Installs a meter for the current thread; restores the previous one on
/// scope exit so evaluation contexts stay independent.
class MeterScope {
public:
    explicit MeterScope(StepMeter& meter) : previous_(active_meter) {
        active_meter = &meter;
    }
    ~MeterScope() { active_meter = previous_; }

    MeterScope(const MeterScope&) = delete;
    MeterScope& operator=(const MeterScope&) = delete;

private:
    StepMeter* previous_;
};

inline std::uint64_t clamp_limit(const BigInt& steps) {
    const BigInt max64 = std::numeric_limits<std::uint64_t>::max();
    if (steps >= max64) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(steps);
}

} // namespace fuel
} // namespace stratum
