#pragma once

/**
 * Effective topology on the line: open sets as enumerations of rational
 * intervals, compact intervals with explicit nets, and the classically
 * trivial operations re-done so every positive answer carries a finite
 * certificate:
 *
 *   - membership in an open set is a semi-decision: Found(k) names the
 *     enumerated interval together with the approximation precision that
 *     certifies strict containment;
 *   - finite subcovers are found by a greedy sweep under explicit fuel,
 *     with Unknown as a value when fuel runs out;
 *   - minima on compact intervals come from modulus-driven nets, with a
 *     net point achieving the minimum to within the requested 2^-k;
 *   - separation of two reals either produces disjoint rational
 *     intervals or reports that no precision up to the hint suffices;
 *   - outer-measure bounds sum the lengths of any finite cover of the
 *     sampled points of a real, exhibiting the arbitrarily-cheap covers
 *     that make single points null.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "stratum/analysis.hpp"
#include "stratum/errors.hpp"
#include "stratum/rational.hpp"
#include "stratum/real.hpp"

namespace stratum {

/// Rational open interval (a, b), a < b.
struct RationalInterval {
    Rational lo;
    Rational hi;

    Rational length() const { return hi - lo; }
};

/// Open set presented as a total enumeration k -> (a_k, b_k) of rational
/// intervals whose union is the set. Pure: same index, same interval.
class OpenSetEnum {
public:
    using Enumerator = std::function<RationalInterval(std::uint32_t)>;

    OpenSetEnum(Enumerator fn, Level level)
        : fn_(std::move(fn)), level_(level) {}

    RationalInterval at(std::uint32_t index) const {
        RationalInterval iv = fn_(index);
        if (!(iv.lo < iv.hi)) throw Error("open-set enumerator produced an empty interval");
        return iv;
    }

    Level level() const { return level_; }

private:
    Enumerator fn_;
    Level level_;
};

/// [lo, hi] with lo <= hi.
struct CompactInterval {
    Rational lo;
    Rational hi;

    CompactInterval(Rational a, Rational b) : lo(std::move(a)), hi(std::move(b)) {
        if (!(lo <= hi)) throw Error("compact interval needs lo <= hi");
    }
};

/// Result of the membership semi-decision: which enumerated interval
/// contains the point, and the precision certifying it.
struct MembershipWitness {
    std::uint32_t index;
    std::uint32_t precision;
    RationalInterval interval;
};

/// Semi-decide x in U by scanning indices 0..max_index. For each interval
/// (a, b) one containment test runs at the precision j that makes the
/// approximation window an eighth of the interval: if the window
/// [f(j) - 2^-j, f(j) + 2^-j] lies strictly inside, x is certified in.
/// Returns the first witness, or nullopt after exhausting max_index
/// (which never certifies absence).
inline std::optional<MembershipWitness> member_semi(const FractalReal& x,
                                                    const OpenSetEnum& U,
                                                    std::uint32_t max_index) {
    for (std::uint32_t i = 0; i <= max_index; ++i) {
        const RationalInterval iv = U.at(i);
        const std::uint32_t j = Rational::ceil_log2(Rational(8) / iv.length());
        const Rational q = x.approx(j);
        const Rational w = Rational::pow2(-static_cast<std::int64_t>(j));
        if (iv.lo < q - w && q + w < iv.hi) {
            return MembershipWitness{i, j, iv};
        }
    }
    return std::nullopt;
}

/// Uniform delta-net of [lo, hi]: lo, lo + delta, ... capped at hi.
/// Always contains both endpoints (hi possibly as the cap) and has
/// ceil((hi - lo) / delta) + 1 points.
inline std::vector<Rational> epsilon_net(const CompactInterval& K, const Rational& delta) {
    if (!(delta > Rational(0))) throw Error("epsilon_net needs delta > 0");
    std::vector<Rational> pts;
    Rational x = K.lo;
    while (true) {
        pts.push_back(x);
        if (x == K.hi) break;
        x = x + delta;
        if (x > K.hi) x = K.hi;
    }
    return pts;
}

/// Greedy finite subcover of [lo, hi] from the enumeration: repeatedly
/// scan indices 0..fuel for an interval strictly containing the current
/// frontier and jump the frontier to the best right endpoint available.
/// At most fuel sweep rounds run; nullopt (Unknown as a value) means
/// either no enumerated interval within the horizon contains the
/// frontier or the rounds ran out — the enumeration may still cover K
/// deeper in, so absence of a cover is never concluded.
inline std::optional<std::vector<std::uint32_t>> finite_subcover(const CompactInterval& K,
                                                                 const OpenSetEnum& U,
                                                                 std::uint32_t fuel) {
    std::vector<std::uint32_t> chosen;
    Rational cur = K.lo;
    for (std::uint32_t round = 0; round < fuel; ++round) {
        bool found = false;
        std::uint32_t best_index = 0;
        Rational best_hi = cur;
        for (std::uint32_t i = 0; i <= fuel; ++i) {
            const RationalInterval iv = U.at(i);
            if (iv.lo < cur && cur < iv.hi && (!found || iv.hi > best_hi)) {
                found = true;
                best_index = i;
                best_hi = iv.hi;
            }
        }
        if (!found) return std::nullopt;
        chosen.push_back(best_index);
        if (best_hi > K.hi) return chosen;
        cur = best_hi;
    }
    return std::nullopt;
}

/// Minimum of F over K, constructively: value within 2^-k of the true
/// minimum, attained at a named net point.
struct MinWitness {
    FractalReal value;
    Rational at;
};

/// Evaluate F on the net of mesh modulus(2^-(k+1)) / 2 and take the
/// least sample: every point of K is within the mesh of a net point, so
/// the true minimum lies within 2^-(k+1) below the best sample; sampling
/// at k + 2 keeps the total under 2^-k. The value is re-wrapped as F at
/// the winning point, so its level joins F's with K's presentation level.
inline MinWitness effective_min(const EffectiveFunction& F, const CompactInterval& K,
                                std::uint32_t k, Level k_level = Level(0)) {
    if (!(F.domain_lo <= K.lo) || !(K.hi <= F.domain_hi)) {
        throw DomainViolation("domain-violation: minimization interval outside domain");
    }
    const Rational eps = Rational::pow2(-static_cast<std::int64_t>(k) - 1);
    const Rational mesh = F.modulus(eps) / Rational(2);
    const std::vector<Rational> net = epsilon_net(K, mesh);
    Rational best = F.sample(net[0], k + 2);
    Rational best_at = net[0];
    for (std::size_t i = 1; i < net.size(); ++i) {
        const Rational v = F.sample(net[i], k + 2);
        if (v < best) {
            best = v;
            best_at = net[i];
        }
    }
    const FractalReal xstar = embed_rational(best_at, k_level);
    FractalReal val = eval_fn(F, xstar);
    return MinWitness{val.with_level(level_join(F.level, k_level)), best_at};
}

/// Disjoint rational intervals certifying x != y.
struct Separation {
    RationalInterval around_x;
    RationalInterval around_y;
    std::uint32_t precision;
};

/// Search k = 0..hint for the least precision whose comparison is not
/// Indistinguishable; the two approximation windows at that precision
/// are then disjoint by the comparison inequality. nullopt: no
/// separation up to the hint (never a proof of equality).
inline std::optional<Separation> separate(const FractalReal& x, const FractalReal& y,
                                          std::uint32_t hint) {
    for (std::uint32_t k = 0; k <= hint; ++k) {
        if (compare_at(x, y, k) == Ordering3::Indistinguishable) continue;
        const Rational w = Rational::pow2(-static_cast<std::int64_t>(k));
        const Rational qx = x.approx(k);
        const Rational qy = y.approx(k);
        return Separation{{qx - w, qx + w}, {qy - w, qy + w}, k};
    }
    return std::nullopt;
}

/// A finite interval cover of the canonical approximation points of x,
/// plus its total length: an upper bound on the outer measure of {x}.
struct CoverBound {
    std::vector<RationalInterval> cover;
    Rational total_length;
};

/// The canonical cheap cover: m intervals of length eps / m centred on
/// the approximation points f(1), ..., f(m). Total length eps; since x
/// lies within 2^-j of f(j) the tail of the approximant is eventually
/// inside every neighbourhood of x, and eps is arbitrary, so the point
/// is null. The cover is returned explicitly for inspection.
inline CoverBound canonical_point_cover(const FractalReal& x, const Rational& eps,
                                        std::uint32_t m) {
    if (!(eps > Rational(0))) throw Error("canonical_point_cover needs eps > 0");
    if (m == 0) throw Error("canonical_point_cover needs m >= 1");
    const Rational half = eps / Rational(2 * static_cast<int>(m));
    CoverBound out;
    out.total_length = Rational(0);
    for (std::uint32_t j = 1; j <= m; ++j) {
        const Rational c = x.approx(j);
        RationalInterval iv{c - half, c + half};
        out.total_length = out.total_length + iv.length();
        out.cover.push_back(std::move(iv));
    }
    return out;
}

/// Exact total length of a finite cover: the certified upper bound the
/// cover places on the outer measure of whatever it covers.
inline Rational outer_measure_upper(const std::vector<RationalInterval>& cover) {
    Rational total(0);
    for (const RationalInterval& iv : cover) {
        if (!(iv.lo < iv.hi)) throw Error("outer_measure_upper needs nonempty intervals");
        total = total + iv.length();
    }
    return total;
}

} // namespace stratum
