// Acceptance gate: one self-contained check per shipped guarantee, one
// PASS/FAIL line each, exit code = number of failures. Tolerances are
// pinned in code next to each check. Random cases use fixed seeds so
// every run exercises the same inputs.

#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "stratum/stratum.hpp"

namespace {

using namespace stratum;

int failures = 0;

void run_criterion(int num, const char* what, const std::function<bool()>& body) {
    bool ok = false;
    std::string note;
    try {
        ok = body();
    } catch (const std::exception& e) {
        note = std::string(" (exception: ") + e.what() + ")";
    }
    std::printf("criterion %2d %s: %s%s\n", num, ok ? "PASS" : "FAIL", what, note.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

Rational pow2(std::int64_t e) { return Rational::pow2(e); }

// 1. Every constructor yields a Cauchy-consistent approximant:
//    |f(j) - f(k)| < 2^-j + 2^-k for all j < k <= 25.
bool cauchy_consistency() {
    std::vector<FractalReal> xs;
    xs.push_back(embed_rational(Rational(0)));
    xs.push_back(embed_rational(Rational(-7, 3)));
    xs.push_back(embed_rational(Rational(355, 113)));
    std::mt19937 rng(20260816u);
    std::uniform_int_distribution<int> den(7, 97);
    for (int i = 0; i < 10; ++i) {
        const int d = den(rng);
        std::uniform_int_distribution<int> num(1, d - 1);
        const Rational r(num(rng), d); // isolated root in (0, 1)
        if (i % 2 == 0) {
            xs.push_back(poly_root(RationalPolynomial({Rational(0) - r, Rational(1)}),
                                   Rational(0), Rational(1), Level(1)));
        } else {
            // (x - r)(x^2 + 1): strictly increasing cubic, single real root r
            xs.push_back(poly_root(
                RationalPolynomial({Rational(0) - r, Rational(1), Rational(0) - r, Rational(1)}),
                Rational(0), Rational(1), Level(1)));
        }
    }
    xs.push_back(constant_e());
    xs.push_back(constant_pi());
    xs.push_back(constant_liouville(2));
    xs.push_back(constant_liouville(10));
    for (const FractalReal& x : xs) {
        std::vector<Rational> f;
        for (std::uint32_t k = 0; k <= 25; ++k) f.push_back(x.approx(k));
        for (std::int64_t j = 0; j <= 25; ++j) {
            for (std::int64_t k = j + 1; k <= 25; ++k) {
                if (!(abs(f[static_cast<std::size_t>(j)] - f[static_cast<std::size_t>(k)]) <
                      pow2(-j) + pow2(-k))) {
                    return false;
                }
            }
        }
    }
    return true;
}

// 2. Embedded rationals through add/sub/mul/invert agree bit-for-bit
//    with exact rational arithmetic at every precision k <= 20.
bool rational_oracle() {
    std::mt19937 rng(424243u);
    std::uniform_int_distribution<int> num(-1000, 1000);
    std::uniform_int_distribution<int> den(1, 1000);
    for (int t = 0; t < 500; ++t) {
        const Rational p(num(rng), den(rng));
        Rational q(num(rng), den(rng));
        if (q == Rational(0)) q = Rational(1, 7);
        const FractalReal xp = embed_rational(p);
        const FractalReal xq = embed_rational(q);
        // witness: 2^-a <= |q|/4 < |q|/2, so |q| > 2*2^-a holds strictly
        const std::uint32_t a = Rational::ceil_log2(Rational(2) / abs(q)) + 1;
        const FractalReal sum = xp + xq;
        const FractalReal dif = xp - xq;
        const FractalReal prod = xp * xq;
        const FractalReal inv = invert(xq, a);
        const Rational es = p + q, ed = p - q, ep = p * q, ei = Rational(1) / q;
        for (std::uint32_t k = 0; k <= 20; ++k) {
            if (sum.approx(k) != es) return false;
            if (dif.approx(k) != ed) return false;
            if (prod.approx(k) != ep) return false;
            if (inv.approx(k) != ei) return false;
        }
    }
    return true;
}

// 3. sqrt(2) residual: |approx(k)^2 - 2| < 6 * 2^-k for k <= 20.
bool sqrt2_residual() {
    const FractalReal s = sqrt2();
    for (std::int64_t k = 0; k <= 20; ++k) {
        const Rational q = s.approx(static_cast<std::uint32_t>(k));
        if (!(abs(q * q - Rational(2)) < Rational(6) * pow2(-k))) return false;
    }
    return true;
}

// 4. Named constants against independent oracles: the base-10 Liouville
//    number truncates to 110001/1000000 at 2^-20; e lands within 2^-20 of
//    a directly summed factorial series; the Machin-style pi sits inside
//    consecutive Leibniz partial sums (alternating-series bracket).
bool worked_constants() {
    if (constant_liouville(10).approx(20) != Rational(110001, 1000000)) return false;
    Rational s(0);
    BigInt fact = 1;
    for (int i = 0; i <= 16; ++i) {
        if (i > 0) fact *= i;
        s = s + Rational(BigInt(1), fact);
    }
    if (!(abs(constant_e().approx(20) - s) < pow2(-20))) return false;
    auto leibniz = [](int n) {
        Rational t(0);
        for (int j = 0; j <= n; ++j) {
            const Rational term(4, 2 * j + 1);
            t = (j % 2 == 0) ? t + term : t - term;
        }
        return t;
    };
    const Rational s200 = leibniz(200); // above pi (last term added)
    const Rational s201 = leibniz(201); // below pi (last term subtracted)
    const Rational q = constant_pi().approx(15);
    return s201 - pow2(-15) < q && q < s200 + pow2(-15);
}

// 5. Calculus: |integral of x^2 over [0,1] - 1/3| < 2^-15; the
//    derivative of the antiderivative returns to the integrand
//    (|value at 1/2 - 1/4| < 2^-8); each operation lifts the level by
//    exactly one.
bool calculus() {
    const EffectiveFunction F = from_polynomial(
        RationalPolynomial({Rational(0), Rational(0), Rational(1)}), Rational(0), Rational(1));
    const FractalReal I = integrate(F, Rational(0), Rational(1));
    if (!(abs(I.approx(16) - Rational(1, 3)) < pow2(-15))) return false;
    if (I.level().index != 1) return false;
    const EffectiveFunction G = antiderivative(F, Rational(0));
    if (G.level.index != 1) return false;
    // forward-quotient error of G' = F is at most 2h on [0,1], so eps/2 steps suffice
    const FractalReal D =
        differentiate(G, embed_rational(Rational(1, 2)), Modulus::lipschitz(Rational(2)));
    if (!(abs(D.approx(8) - Rational(1, 4)) < pow2(-8))) return false;
    return D.level().index == 2;
}

// 6. Interval minimum within 2^-10 of the closed form: (x-1)^2 on [0,1]
//    and 20 seeded monic quadratics with vertex inside [0,1].
bool effective_minimum() {
    auto close_to = [](const RationalPolynomial& p, const Rational& expected) {
        const EffectiveFunction F = from_polynomial(p, Rational(0), Rational(1));
        const MinWitness w = effective_min(F, CompactInterval(Rational(0), Rational(1)), 11);
        return abs(w.value.approx(11) - expected) < pow2(-10);
    };
    if (!close_to(RationalPolynomial({Rational(1), Rational(-2), Rational(1)}), Rational(0))) {
        return false;
    }
    std::mt19937 rng(777u);
    std::uniform_int_distribution<int> vd(3, 50);
    std::uniform_int_distribution<int> cn(-50, 50);
    std::uniform_int_distribution<int> cd(1, 50);
    for (int t = 0; t < 20; ++t) {
        const int d = vd(rng);
        std::uniform_int_distribution<int> vn(0, d);
        const Rational v(vn(rng), d);
        const Rational c(cn(rng), cd(rng));
        // (x - v)^2 + c attains its minimum c at the vertex v in [0, 1]
        const RationalPolynomial p({v * v + c, Rational(-2) * v, Rational(1)});
        if (!close_to(p, c)) return false;
    }
    return true;
}

// 7. Separation: 50 pairs of distinct constants produce disjoint
//    intervals of radius exactly 2^-p around the precision-p approximants.
bool separation() {
    std::vector<FractalReal> pool;
    pool.push_back(embed_rational(Rational(0)));
    pool.push_back(embed_rational(Rational(1)));
    pool.push_back(embed_rational(Rational(-1)));
    pool.push_back(embed_rational(Rational(1, 2)));
    pool.push_back(embed_rational(Rational(2, 3)));
    pool.push_back(embed_rational(Rational(22, 7)));
    pool.push_back(sqrt2());
    pool.push_back(golden_ratio());
    pool.push_back(constant_e());
    pool.push_back(constant_pi());
    pool.push_back(constant_liouville(2));
    pool.push_back(constant_liouville(10));
    int done = 0;
    for (std::size_t i = 0; i < pool.size() && done < 50; ++i) {
        for (std::size_t j = i + 1; j < pool.size() && done < 50; ++j) {
            const auto sep = separate(pool[i], pool[j], 64);
            if (!sep) return false;
            const std::uint32_t p = sep->precision;
            const Rational w = pow2(-static_cast<std::int64_t>(p));
            const Rational cx = pool[i].approx(p);
            const Rational cy = pool[j].approx(p);
            if (sep->around_x.lo != cx - w || sep->around_x.hi != cx + w) return false;
            if (sep->around_y.lo != cy - w || sep->around_y.hi != cy + w) return false;
            if (!(sep->around_x.hi <= sep->around_y.lo ||
                  sep->around_y.hi <= sep->around_x.lo)) {
                return false;
            }
            ++done;
        }
    }
    return done == 50;
}

// 8. Measure bounds: canonical covers of point sets (size <= 8) total
//    exactly epsilon for every epsilon = 2^-k, k <= 20; a family whose
//    exact total length falls short of an interval is detected and the
//    greedy subcover search reports unknown.
bool measure_bounds() {
    std::vector<FractalReal> pool;
    pool.push_back(embed_rational(Rational(1, 2)));
    pool.push_back(sqrt2());
    pool.push_back(constant_e());
    pool.push_back(constant_pi());
    pool.push_back(constant_liouville(2));
    pool.push_back(embed_rational(Rational(-3, 4)));
    pool.push_back(golden_ratio());
    pool.push_back(embed_rational(Rational(22, 7)));
    for (std::size_t s = 1; s <= pool.size(); ++s) {
        for (std::int64_t k = 0; k <= 20; ++k) {
            const Rational eps = pow2(-k);
            const Rational share = eps / Rational(static_cast<int>(s));
            std::vector<RationalInterval> all;
            for (std::size_t i = 0; i < s; ++i) {
                const CoverBound cb = canonical_point_cover(pool[i], share, 2);
                if (cb.total_length != share) return false;
                all.insert(all.end(), cb.cover.begin(), cb.cover.end());
            }
            if (outer_measure_upper(all) != eps) return false; // s * (eps/s), exactly
        }
    }
    std::vector<RationalInterval> shorty;
    for (int i = 0; i < 8; ++i) {
        const Rational c(2 * i + 1, 16);
        shorty.push_back(RationalInterval{c - Rational(1, 32), c + Rational(1, 32)});
    }
    if (outer_measure_upper(shorty) != Rational(1, 2)) return false;
    if (!(outer_measure_upper(shorty) < Rational(1))) return false; // cannot cover [0,1]
    OpenSetEnum U([shorty](std::uint32_t i) { return shorty[i % shorty.size()]; }, Level(0));
    return !finite_subcover(CompactInterval(Rational(0), Rational(1)), U, 40).has_value();
}

// 9. Extension demos: weighted-l1 dominators give the exact admissible
//    intervals [-2, 2] and [-pi, pi] for the second coordinate, the
//    midpoint choice is 0, levels lift by one past the join, and
//    domination holds across the {-2..2}^2 grid.
bool hahn_banach() {
    const RationalVector e1 = unit_vector(2, 0);
    const RationalVector e2 = unit_vector(2, 1);
    std::vector<RationalVector> grid;
    for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) grid.push_back(RationalVector({Rational(a), Rational(b)}));
    }
    LinearFunctional f({e1}, {embed_rational(Rational(1))}, Level(0));
    {
        std::vector<FractalReal> w;
        w.push_back(sqrt2());
        w.push_back(embed_rational(Rational(2)));
        SublinearFunctional p = SublinearFunctional::weighted_l1(w, Level(1));
        const AdmissibleInterval box = admissible_interval(f, p, e2);
        if (box.lo.approx(10) != Rational(-2) || box.hi.approx(10) != Rational(2)) return false;
        const LinearFunctional g = extend(f, p, {ExtensionStep::midpoint(e2)});
        if (g.eval(e1).approx(10) != Rational(1)) return false;
        if (g.values()[1].approx(10) != Rational(0)) return false;
        if (g.level().index != 2) return false;
        if (!verify_domination(g, p, grid, 16).verified) return false;
    }
    {
        std::vector<FractalReal> w;
        w.push_back(sqrt2());
        w.push_back(constant_pi());
        SublinearFunctional p = SublinearFunctional::weighted_l1(w, Level(2));
        const AdmissibleInterval box = admissible_interval(f, p, e2);
        const FractalReal pi = constant_pi();
        if (box.hi.approx(24) != pi.approx(24)) return false;
        if (box.lo.approx(24) != Rational(0) - pi.approx(24)) return false;
        const LinearFunctional g = extend(f, p, {ExtensionStep::midpoint(e2)});
        if (g.values()[1].approx(10) != Rational(0)) return false;
        if (g.level().index != 3) return false;
        if (!verify_domination(g, p, grid, 16).verified) return false;
    }
    return true;
}

// 10. Gap certificate: for (x-1)^2 on [0,1] and reference point 9/10,
//     a certified gap of at least 2^-7 with witness within 1/64 of the
//     true minimizer, one level above the body.
bool gap_criterion() {
    const ExprPtr body = parse_expression("x^2 - 2*x + 1");
    const auto cert = gap_certificate(*body, Rational(0), Rational(1), Rational(9, 10), 10);
    if (!cert) return false;
    if (!(cert->gap >= pow2(-7))) return false;
    if (!(abs(cert->witness - Rational(1)) <= Rational(1, 64))) return false;
    return cert->level.index == 1 && cert->precision == 10;
}

// 11. Bernstein approximants: for the tent |x - 1/2| the certified
//     uniform-distance bounds obey (3/2)/sqrt(m) + 2^-10 for
//     m = 16, 64, 256 and do not increase; for x^2 at m = 16 the bound
//     pins the exact error 1/64 to within 2^-12.
bool bernstein_jackson() {
    EffectiveFunction tent;
    tent.rational_eval = [](const Rational& q) {
        return embed_rational(abs(q - Rational(1, 2)));
    };
    tent.exact_eval = [](const Rational& q) { return abs(q - Rational(1, 2)); };
    tent.modulus = Modulus::lipschitz(Rational(1));
    tent.level = Level(0);
    tent.domain_lo = Rational(0);
    tent.domain_hi = Rational(1);

    Rational prev(0);
    bool first = true;
    const std::uint32_t ms[3] = {16, 64, 256};
    for (const std::uint32_t m : ms) {
        const EffectiveFunction B =
            from_polynomial(bernstein_approx(tent, m), Rational(0), Rational(1));
        const Rational u = sup_norm_bound(tent, B, 6);
        Rational root_m(4);
        if (m == 64) root_m = Rational(8);
        if (m == 256) root_m = Rational(16);
        if (!(u <= Rational(3) / (Rational(2) * root_m) + pow2(-10))) return false;
        if (!first && !(u <= prev)) return false;
        prev = u;
        first = false;
    }
    const EffectiveFunction F = from_polynomial(
        RationalPolynomial({Rational(0), Rational(0), Rational(1)}), Rational(0), Rational(1));
    const EffectiveFunction B16 = from_polynomial(bernstein_approx(F, 16), Rational(0), Rational(1));
    const Rational u = sup_norm_bound(F, B16, 12);
    return abs(u - Rational(1, 64)) < pow2(-12);
}

// 12. Budgets: the level-2 default rule admits the series constant e for
//     k = 2..12 (the k^8 allowances at k <= 1 are 0 and 1 steps — below
//     even one approximant invocation, so metering starts at k = 2);
//     a constant budget of one step is exceeded; budgets are strictly
//     increasing in the level for k >= 2.
bool budgets() {
    const FractalReal e = constant_e();
    for (std::uint32_t k = 2; k <= 12; ++k) {
        if (!metered_approx(e, k).value.has_value()) return false;
    }
    FuelBudget tight;
    tight.set_rule(Level(2), BudgetRule{1, 0});
    if (metered_approx(e, 10, tight).value.has_value()) return false;
    const FuelBudget def;
    for (std::uint32_t k = 2; k <= 10; ++k) {
        for (std::uint32_t n = 0; n <= 4; ++n) {
            if (!(budget_for(def, Level(n), k) < budget_for(def, Level(n + 1), k))) return false;
        }
    }
    return true;
}

// 13. Enumeration: the first 10000 terms print to pairwise distinct
//     strings and parse back to structurally equal trees; level
//     inference matches the intended table on the four flagship shapes.
bool dsl_roundtrip() {
    std::unordered_set<std::string> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const ExprPtr t = enumerate_terms(i);
        const std::string s = print_expr(t);
        if (!seen.insert(s).second) return false;
        if (!expr_equal(parse_expression(s), t)) return false;
    }
    if (infer_level(parse_expression("root(x^2 - 2; 1; 2)")).index != 1) return false;
    if (infer_level(parse_expression("e")).index != 2) return false;
    if (infer_level(parse_expression("liouville(2)")).index != 3) return false;
    return infer_level(parse_expression("integral(e; 0; 1)")).index == 3;
}

} // namespace

int main() {
    run_criterion(1, "every constructor is Cauchy-consistent through k = 25", cauchy_consistency);
    run_criterion(2, "embedded rational arithmetic matches the exact oracle bit-for-bit",
                  rational_oracle);
    run_criterion(3, "sqrt(2) approximants square to 2 within 6*2^-k", sqrt2_residual);
    run_criterion(4, "named constants match independent series oracles", worked_constants);
    run_criterion(5, "integration and the derivative round-trip, lifting levels by one", calculus);
    run_criterion(6, "interval minima land within 2^-10 of closed forms", effective_minimum);
    run_criterion(7, "distinct constants separate into exactly disjoint intervals", separation);
    run_criterion(8, "point covers account exactly; short families are detected", measure_bounds);
    run_criterion(9, "extension demos: admissible intervals, midpoint choice, domination",
                  hahn_banach);
    run_criterion(10, "a near-minimal reference point draws a certified gap", gap_criterion);
    run_criterion(11, "Bernstein bounds decay Jackson-style and pin the x^2 error",
                  bernstein_jackson);
    run_criterion(12, "per-level step budgets admit and refuse as configured", budgets);
    run_criterion(13, "term enumeration prints injectively and round-trips", dsl_roundtrip);
    return failures;
}
