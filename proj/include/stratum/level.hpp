#pragma once

#include <compare>
#include <cstdint>

namespace stratum {

/// Definability level tag. Level 0 covers exact rational data; each
/// constructor that genuinely needs more expressive machinery (series
/// limits, minimization, integration, ...) lives one level up. Levels
/// only ever grow along a computation.
struct Level {
    std::uint32_t index = 0;

    constexpr Level() = default;
    constexpr explicit Level(std::uint32_t i) : index(i) {}

    friend constexpr auto operator<=>(Level, Level) = default;
};

/// Join of two level tags: the smallest level at which both values live.
constexpr Level level_join(Level a, Level b) {
    return a.index >= b.index ? a : b;
}

/// One level up; used by operators that escalate definability.
constexpr Level level_lift(Level a) {
    return Level(a.index + 1);
}

} // namespace stratum
