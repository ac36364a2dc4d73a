// Effective topology: membership semi-decision, nets, greedy finite
// subcovers with fuel, constructive minima, separation witnesses, and
// outer-measure upper bounds from explicit covers.

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "stratum/constants.hpp"
#include "stratum/topology.hpp"

using stratum::CompactInterval;
using stratum::FractalReal;
using stratum::Level;
using stratum::OpenSetEnum;
using stratum::Rational;
using stratum::RationalInterval;
using stratum::RationalPolynomial;

namespace {

Rational pow2k(std::uint32_t k) { return Rational::pow2(-static_cast<std::int64_t>(k)); }

// quarter-spaced intervals (i/4 - 1/8, i/4 + 1/8)
OpenSetEnum quarter_lattice() {
    return OpenSetEnum(
        [](std::uint32_t i) {
            const Rational c(static_cast<int>(i), 4);
            return RationalInterval{c - Rational(1, 8), c + Rational(1, 8)};
        },
        Level(0));
}

} // namespace

TEST_CASE("membership semi-decision certifies strictly interior points only") {
    FractalReal third = stratum::embed_rational(Rational(1, 3));
    auto hit = stratum::member_semi(third, quarter_lattice(), 6);
    REQUIRE(hit.has_value());
    CHECK(hit->index == 1); // (1/8, 3/8) is the first interval around 1/3
    CHECK(hit->precision == 5); // window an eighth of the quarter-length interval
    CHECK(hit->interval.lo == Rational(1, 8));
    CHECK(hit->interval.hi == Rational(3, 8));
    // the certification window really is inside
    const Rational w = pow2k(hit->precision);
    CHECK(hit->interval.lo < Rational(1, 3) - w);
    CHECK(Rational(1, 3) + w < hit->interval.hi);

    // 7/8 is a lattice boundary point: the window never fits strictly inside
    FractalReal edge = stratum::embed_rational(Rational(7, 8));
    CHECK_FALSE(stratum::member_semi(edge, quarter_lattice(), 3).has_value());

    // scan horizon respected: 1/3's witness lives at index 1
    CHECK_FALSE(stratum::member_semi(third, quarter_lattice(), 0).has_value());

    OpenSetEnum degenerate([](std::uint32_t) { return RationalInterval{Rational(1), Rational(1)}; },
                           Level(0));
    CHECK_THROWS_AS(stratum::member_semi(third, degenerate, 2), stratum::Error);
    CHECK(quarter_lattice().level() == Level(0));
}

TEST_CASE("epsilon nets include both endpoints and respect the mesh") {
    CompactInterval K(Rational(0), Rational(1));
    auto quarters = stratum::epsilon_net(K, Rational(1, 4));
    REQUIRE(quarters.size() == 5);
    CHECK(quarters.front() == Rational(0));
    CHECK(quarters[2] == Rational(1, 2));
    CHECK(quarters.back() == Rational(1));

    auto capped = stratum::epsilon_net(K, Rational(3, 8));
    REQUIRE(capped.size() == 4); // 0, 3/8, 3/4, then capped at 1
    CHECK(capped[3] == Rational(1));

    auto coarse = stratum::epsilon_net(K, Rational(2));
    REQUIRE(coarse.size() == 2);
    CHECK(coarse[0] == Rational(0));
    CHECK(coarse[1] == Rational(1));

    auto point = stratum::epsilon_net(CompactInterval(Rational(1, 2), Rational(1, 2)),
                                      Rational(1, 4));
    REQUIRE(point.size() == 1);
    CHECK(point[0] == Rational(1, 2));

    CHECK_THROWS_AS(stratum::epsilon_net(K, Rational(0)), stratum::Error);
    CHECK_THROWS_AS(CompactInterval(Rational(1), Rational(0)), stratum::Error);
}

TEST_CASE("greedy subcovers advance the frontier; fuel bounds rounds and horizon") {
    CompactInterval K(Rational(0), Rational(1));
    OpenSetEnum halves(
        [](std::uint32_t i) {
            const Rational c(static_cast<int>(i), 2);
            return RationalInterval{c - Rational(3, 8), c + Rational(3, 8)};
        },
        Level(0));

    auto chosen = stratum::finite_subcover(K, halves, 10);
    REQUIRE(chosen.has_value());
    CHECK(*chosen == std::vector<std::uint32_t>{0, 1, 2});

    // three rounds are genuinely needed
    CHECK_FALSE(stratum::finite_subcover(K, halves, 2).has_value());
    CHECK(stratum::finite_subcover(K, halves, 3).has_value());

    // the only useful interval sits at index 5, beyond a fuel-4 horizon
    OpenSetEnum sparse(
        [](std::uint32_t i) {
            if (i == 5) return RationalInterval{Rational(-1, 4), Rational(9, 8)};
            return RationalInterval{Rational(static_cast<int>(i) + 2),
                                    Rational(static_cast<int>(i) + 3)};
        },
        Level(0));
    CHECK_FALSE(stratum::finite_subcover(K, sparse, 4).has_value());
    auto jump = stratum::finite_subcover(K, sparse, 5);
    REQUIRE(jump.has_value());
    CHECK(*jump == std::vector<std::uint32_t>{5});

    // total length 1/2 cannot cover [0,1]: honest unknown
    OpenSetEnum shorty(
        [](std::uint32_t i) {
            const Rational c(2 * static_cast<int>(i % 8) + 1, 16);
            return RationalInterval{c - Rational(1, 32), c + Rational(1, 32)};
        },
        Level(0));
    CHECK_FALSE(stratum::finite_subcover(K, shorty, 40).has_value());
}

TEST_CASE("constructive minima name a net point within one-sided error") {
    RationalPolynomial centered({Rational(1, 4), Rational(-1), Rational(1)}); // (x - 1/2)^2
    auto F = stratum::from_polynomial(centered, Rational(0), Rational(1));
    auto w = stratum::effective_min(F, CompactInterval(Rational(0), Rational(1)), 8);
    CHECK(w.at == Rational(1, 2));
    CHECK(w.value.approx(8) == Rational(0));
    CHECK(w.value.level() == Level(0));

    // presentation level of the interval joins into the witness value
    auto tagged = stratum::effective_min(F, CompactInterval(Rational(0), Rational(1)), 8,
                                         Level(2));
    CHECK(tagged.value.level() == Level(2));

    // monotone restriction: minimum at the left endpoint
    auto G = stratum::from_polynomial(RationalPolynomial({Rational(0), Rational(1)}),
                                      Rational(0), Rational(1));
    auto left = stratum::effective_min(G, CompactInterval(Rational(1, 4), Rational(1)), 6);
    CHECK(left.at == Rational(1, 4));
    CHECK(left.value.approx(10) == Rational(1, 4));

    // one-sided bound: reported value never undershoots the true minimum
    auto H = stratum::from_polynomial(RationalPolynomial({Rational(0), Rational(0), Rational(1)}),
                                      Rational(0), Rational(1));
    auto m = stratum::effective_min(H, CompactInterval(Rational(1, 3), Rational(1)), 6);
    CHECK(m.value.approx(10) >= Rational(1, 9));
    CHECK(m.value.approx(10) < Rational(1, 9) + pow2k(6));

    CHECK_THROWS_AS(
        stratum::effective_min(F, CompactInterval(Rational(0), Rational(2)), 4),
        stratum::DomainViolation);
}

TEST_CASE("separation produces exactly the two approximation windows") {
    FractalReal zero = stratum::embed_rational(Rational(0));
    FractalReal eighth = stratum::embed_rational(Rational(1, 8));
    auto sep = stratum::separate(zero, eighth, 64);
    REQUIRE(sep.has_value());
    CHECK(sep->precision == 5); // the first precision that can tell them apart
    CHECK(sep->around_x.lo == Rational(-1, 32));
    CHECK(sep->around_x.hi == Rational(1, 32));
    CHECK(sep->around_y.lo == Rational(3, 32));
    CHECK(sep->around_y.hi == Rational(5, 32));
    CHECK(sep->around_x.hi < sep->around_y.lo); // disjoint with room

    auto irr = stratum::separate(stratum::sqrt2(), stratum::embed_rational(Rational(3, 2)), 64);
    REQUIRE(irr.has_value());
    CHECK(irr->precision == 5);
    CHECK(irr->around_x.lo == Rational(177, 128));
    CHECK(irr->around_x.hi == Rational(185, 128));
    CHECK(irr->around_y.lo == Rational(47, 32));
    CHECK(irr->around_y.hi == Rational(49, 32));

    // identical points never separate: honest unknown within the hint
    CHECK_FALSE(stratum::separate(eighth, eighth, 30).has_value());
}

TEST_CASE("canonical point covers total exactly epsilon") {
    FractalReal third = stratum::embed_rational(Rational(1, 3));
    auto bound = stratum::canonical_point_cover(third, Rational(1, 8), 4);
    REQUIRE(bound.cover.size() == 4);
    CHECK(bound.total_length == Rational(1, 8));
    for (const auto& iv : bound.cover) {
        CHECK(iv.length() == Rational(1, 32));
        CHECK(iv.lo == Rational(1, 3) - Rational(1, 64));
        CHECK(iv.hi == Rational(1, 3) + Rational(1, 64));
    }

    // non-constant approximants: intervals follow f(1), f(2), f(3)
    FractalReal r = stratum::sqrt2();
    auto rb = stratum::canonical_point_cover(r, Rational(1, 16), 3);
    REQUIRE(rb.cover.size() == 3);
    CHECK(rb.total_length == Rational(1, 16));
    for (std::uint32_t j = 1; j <= 3; ++j) {
        const Rational c = r.approx(j);
        CHECK(rb.cover[j - 1].lo == c - Rational(1, 96));
        CHECK(rb.cover[j - 1].hi == c + Rational(1, 96));
    }

    CHECK_THROWS_AS(stratum::canonical_point_cover(third, Rational(0), 2), stratum::Error);
    CHECK_THROWS_AS(stratum::canonical_point_cover(third, Rational(1, 4), 0), stratum::Error);
}

TEST_CASE("outer-measure upper bounds are exact sums of lengths") {
    std::vector<RationalInterval> shorty;
    for (int i = 0; i < 8; ++i) {
        const Rational c(2 * i + 1, 16);
        shorty.push_back({c - Rational(1, 32), c + Rational(1, 32)});
    }
    CHECK(stratum::outer_measure_upper(shorty) == Rational(1, 2));
    CHECK(stratum::outer_measure_upper({}) == Rational(0));

    std::vector<RationalInterval> bad = {{Rational(1), Rational(1)}};
    CHECK_THROWS_AS(stratum::outer_measure_upper(bad), stratum::Error);

    std::vector<RationalInterval> mixed = {{Rational(0), Rational(1, 3)},
                                           {Rational(1, 2), Rational(7, 8)}};
    CHECK(stratum::outer_measure_upper(mixed) == Rational(1, 3) + Rational(3, 8));
}
