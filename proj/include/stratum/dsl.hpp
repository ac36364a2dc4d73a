#pragma once

/**
 * Semantics for the definability language: level inference, evaluation
 * to level-tagged reals, number-class inference, symbolic
 * differentiation on the polynomial fragment, a total enumeration of
 * canonical terms, and net-based gap certificates for binder bodies.
 *
 * Levels are inferred syntactically: literals and the variable sit at
 * level 0, algebraic roots at 1, the exponential and circle constants
 * at 2, the fast-converging series family at 3; field operations take
 * the maximum of their operands and each binder (derivative, integral,
 * minimum) adds one. Evaluation re-tags every result at its inferred
 * level, which is always at or above the level the construction itself
 * produced — inference never claims less access than the value used.
 *
 * Binder bodies are canonicalized to polynomials in the bound variable
 * with level-tagged real coefficients (closed subterms evaluate to
 * coefficients; nested derivative nodes are lowered symbolically and
 * composed). Variable-dependent divisors and variable-dependent
 * integration bounds fall outside this fragment and raise
 * UnsupportedNodeError; division inside the language searches for an
 * apartness witness below a configurable precision bound and raises
 * ApartnessError when none is found.
 *
 * Number classes form a sound upper-bound lattice (rational, algebraic,
 * transcendental, unknown), not a minimal-degree oracle: every claimed
 * tag is mathematically justified for well-defined expressions, and
 * anything uncertain degrades to unknown. Algebraic tags carry a
 * construction-depth level, transcendental and unknown tags carry the
 * inferred level of the witnessing subterm.
 */

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stratum/analysis.hpp"
#include "stratum/constants.hpp"
#include "stratum/errors.hpp"
#include "stratum/expr.hpp"
#include "stratum/real.hpp"
#include "stratum/topology.hpp"

namespace stratum {

// ---- level inference -------------------------------------------------------

inline Level infer_level(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::IntLit:
        case Expr::Kind::RatLit:
        case Expr::Kind::Var: return Level(0);
        case Expr::Kind::Root: return Level(1);
        case Expr::Kind::ConstE:
        case Expr::Kind::ConstPi: return Level(2);
        case Expr::Kind::ConstLiouville: return Level(3);
        case Expr::Kind::Add:
        case Expr::Kind::Sub:
        case Expr::Kind::Mul:
        case Expr::Kind::Div:
            return level_join(infer_level(*e.a), infer_level(*e.b));
        case Expr::Kind::Neg:
        case Expr::Kind::Pow: return infer_level(*e.a);
        case Expr::Kind::Deriv:
            return level_lift(level_join(infer_level(*e.a), infer_level(*e.b)));
        case Expr::Kind::Integral:
            return level_lift(level_join(infer_level(*e.a),
                                         level_join(infer_level(*e.b), infer_level(*e.c))));
        case Expr::Kind::MinOn: return level_lift(infer_level(*e.a));
    }
    throw Error("unreachable expression kind");
}

inline Level infer_level(const ExprPtr& e) { return infer_level(*e); }

// ---- free variable ---------------------------------------------------------

/// Whether the ambient variable occurs free: binder bodies bind x, so
/// only occurrences in non-body positions (the point of a derivative,
/// the bounds of an integral) count. A closed expression has none.
inline bool has_free_var(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Var: return true;
        case Expr::Kind::Deriv: return has_free_var(*e.b);
        case Expr::Kind::Integral: return has_free_var(*e.b) || has_free_var(*e.c);
        case Expr::Kind::MinOn: return false;
        default:
            for (const ExprPtr* ch : {&e.a, &e.b, &e.c}) {
                if (*ch && has_free_var(**ch)) return true;
            }
            return false;
    }
}

// ---- exact folding ---------------------------------------------------------

/// Exact rational value of a literal-arithmetic expression; nullopt as
/// soon as a constant, root, binder, variable, or zero divisor appears.
inline std::optional<Rational> fold_rational(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::IntLit: return Rational(e.int_value);
        case Expr::Kind::RatLit: return e.rat_value;
        case Expr::Kind::Add:
        case Expr::Kind::Sub:
        case Expr::Kind::Mul:
        case Expr::Kind::Div: {
            auto a = fold_rational(*e.a);
            auto b = fold_rational(*e.b);
            if (!a || !b) return std::nullopt;
            switch (e.kind) {
                case Expr::Kind::Add: return *a + *b;
                case Expr::Kind::Sub: return *a - *b;
                case Expr::Kind::Mul: return *a * *b;
                default:
                    if (b->is_zero()) return std::nullopt;
                    return *a / *b;
            }
        }
        case Expr::Kind::Neg: {
            auto a = fold_rational(*e.a);
            if (!a) return std::nullopt;
            return Rational(0) - *a;
        }
        case Expr::Kind::Pow: {
            auto a = fold_rational(*e.a);
            if (!a) return std::nullopt;
            return Rational::pow(*a, e.nat);
        }
        default: return std::nullopt;
    }
}

// ---- symbolic differentiation ---------------------------------------------

/// Capture-safe substitution of the free variable (replacements never
/// reach into binder bodies, which bind their own x).
inline ExprPtr subst_var(const ExprPtr& e, const ExprPtr& replacement) {
    if (!has_free_var(*e)) return e;
    switch (e->kind) {
        case Expr::Kind::Var: return replacement;
        case Expr::Kind::Add: return ex_add(subst_var(e->a, replacement), subst_var(e->b, replacement));
        case Expr::Kind::Sub: return ex_sub(subst_var(e->a, replacement), subst_var(e->b, replacement));
        case Expr::Kind::Mul: return ex_mul(subst_var(e->a, replacement), subst_var(e->b, replacement));
        case Expr::Kind::Div: return ex_div(subst_var(e->a, replacement), subst_var(e->b, replacement));
        case Expr::Kind::Neg: return ex_neg(subst_var(e->a, replacement));
        case Expr::Kind::Pow: return ex_pow(subst_var(e->a, replacement), e->nat);
        case Expr::Kind::Deriv:
            return ex_deriv(e->a, subst_var(e->b, replacement));
        case Expr::Kind::Integral:
            return ex_integral(e->a, subst_var(e->b, replacement), subst_var(e->c, replacement));
        default: return e; // closed kinds are caught by the guard above
    }
}

namespace detail {

inline bool is_int_literal(const ExprPtr& e, unsigned v) {
    return e->kind == Expr::Kind::IntLit && e->int_value == v;
}

inline ExprPtr smart_add(ExprPtr a, ExprPtr b) {
    if (is_int_literal(a, 0)) return b;
    if (is_int_literal(b, 0)) return a;
    return ex_add(std::move(a), std::move(b));
}
inline ExprPtr smart_sub(ExprPtr a, ExprPtr b) {
    if (is_int_literal(b, 0)) return a;
    if (is_int_literal(a, 0)) return ex_neg(std::move(b));
    return ex_sub(std::move(a), std::move(b));
}
inline ExprPtr smart_mul(ExprPtr a, ExprPtr b) {
    if (is_int_literal(a, 0) || is_int_literal(b, 0)) return ex_int(0);
    if (is_int_literal(a, 1)) return b;
    if (is_int_literal(b, 1)) return a;
    return ex_mul(std::move(a), std::move(b));
}
inline ExprPtr smart_neg(ExprPtr a) {
    if (is_int_literal(a, 0)) return a;
    return ex_neg(std::move(a));
}
inline ExprPtr smart_pow(ExprPtr a, std::uint32_t n) {
    if (n == 0) return ex_int(1);
    if (n == 1) return a;
    return ex_pow(std::move(a), n);
}

} // namespace detail

/// d/dx on the polynomial-in-x fragment (plus variable-free divisors
/// and nested derivative nodes, which lower through the chain rule).
/// Variable-dependent divisors or integration bounds raise
/// UnsupportedNodeError.
inline ExprPtr symbolic_diff(const ExprPtr& e) {
    using detail::smart_add;
    using detail::smart_mul;
    using detail::smart_neg;
    using detail::smart_pow;
    using detail::smart_sub;
    if (!has_free_var(*e)) return ex_int(0);
    switch (e->kind) {
        case Expr::Kind::Var: return ex_int(1);
        case Expr::Kind::Add: return smart_add(symbolic_diff(e->a), symbolic_diff(e->b));
        case Expr::Kind::Sub: return smart_sub(symbolic_diff(e->a), symbolic_diff(e->b));
        case Expr::Kind::Neg: return smart_neg(symbolic_diff(e->a));
        case Expr::Kind::Mul:
            return smart_add(smart_mul(symbolic_diff(e->a), e->b),
                             smart_mul(e->a, symbolic_diff(e->b)));
        case Expr::Kind::Div:
            if (has_free_var(*e->b)) {
                throw UnsupportedNodeError(
                    "unsupported-node: variable-dependent divisor under differentiation");
            }
            return ex_div(symbolic_diff(e->a), e->b);
        case Expr::Kind::Pow: {
            if (e->nat == 0) return ex_int(0);
            ExprPtr inner = symbolic_diff(e->a);
            return smart_mul(smart_mul(ex_int(e->nat), smart_pow(e->a, e->nat - 1)),
                             std::move(inner));
        }
        case Expr::Kind::Deriv: {
            // d/dx f'(g(x)) = f''(g(x)) g'(x), with f'' lowered symbolically.
            ExprPtr second = symbolic_diff(symbolic_diff(e->a));
            return smart_mul(subst_var(second, e->b), symbolic_diff(e->b));
        }
        default:
            throw UnsupportedNodeError(
                "unsupported-node: cannot differentiate through this binder");
    }
}

// ---- evaluation ------------------------------------------------------------

inline FractalReal eval_expr(const Expr& e, std::uint32_t apartness_bound = 64);

namespace detail {

/// Reciprocal with a bounded apartness search: probe k = 0..bound for a
/// witness |approximant(k)| > 2 * 2^-k; ApartnessError past the bound.
inline FractalReal invert_searched(const FractalReal& y, std::uint32_t bound) {
    for (std::uint32_t k = 0; k <= bound; ++k) {
        const Rational q = y.approx(k);
        if (abs(q) > Rational(2) * Rational::pow2(-static_cast<std::int64_t>(k))) {
            return invert(y, k);
        }
    }
    throw ApartnessError("apartness-not-witnessed: divisor not separated from zero up to 2^-" +
                         std::to_string(bound));
}

inline FractalReal pow_real(const FractalReal& x, std::uint32_t n) {
    if (n == 0) return embed_rational(Rational(1), Level(0));
    FractalReal base = x;
    std::optional<FractalReal> acc;
    std::uint32_t rem = n;
    while (rem > 0) {
        if (rem & 1u) acc = acc ? (*acc) * base : base;
        rem >>= 1;
        if (rem > 0) base = base * base;
    }
    return *acc;
}

/// Polynomial in the bound variable with level-tagged real coefficients;
/// `exact` carries the coefficient's rational value where folding
/// established one (enabling the exact evaluation fast path).
struct BodyPoly {
    std::vector<FractalReal> coeffs;
    std::vector<std::optional<Rational>> exact;

    bool all_exact() const {
        for (const auto& q : exact) {
            if (!q) return false;
        }
        return true;
    }
};

inline BodyPoly body_poly_of(const Expr& e, std::uint32_t apartness_bound) {
    if (!has_free_var(e)) {
        BodyPoly out;
        auto folded = fold_rational(e);
        if (folded) {
            out.coeffs.push_back(embed_rational(*folded, infer_level(e)));
        } else {
            out.coeffs.push_back(eval_expr(e, apartness_bound));
        }
        out.exact.push_back(std::move(folded));
        return out;
    }
    switch (e.kind) {
        case Expr::Kind::Var: {
            BodyPoly out;
            out.coeffs = {embed_rational(Rational(0), Level(0)),
                          embed_rational(Rational(1), Level(0))};
            out.exact = {Rational(0), Rational(1)};
            return out;
        }
        case Expr::Kind::Add:
        case Expr::Kind::Sub: {
            const bool subtract = e.kind == Expr::Kind::Sub;
            BodyPoly p = body_poly_of(*e.a, apartness_bound);
            BodyPoly q = body_poly_of(*e.b, apartness_bound);
            BodyPoly out;
            const std::size_t n = std::max(p.coeffs.size(), q.coeffs.size());
            for (std::size_t i = 0; i < n; ++i) {
                const bool hp = i < p.coeffs.size();
                const bool hq = i < q.coeffs.size();
                FractalReal a = hp ? p.coeffs[i] : embed_rational(Rational(0), Level(0));
                FractalReal b = hq ? q.coeffs[i] : embed_rational(Rational(0), Level(0));
                out.coeffs.push_back(subtract ? a - b : a + b);
                const auto& ea = hp ? p.exact[i] : std::optional<Rational>(Rational(0));
                const auto& eb = hq ? q.exact[i] : std::optional<Rational>(Rational(0));
                if (ea && eb) {
                    out.exact.push_back(subtract ? *ea - *eb : *ea + *eb);
                } else {
                    out.exact.push_back(std::nullopt);
                }
            }
            return out;
        }
        case Expr::Kind::Mul: {
            BodyPoly p = body_poly_of(*e.a, apartness_bound);
            BodyPoly q = body_poly_of(*e.b, apartness_bound);
            BodyPoly out;
            const std::size_t n = p.coeffs.size() + q.coeffs.size() - 1;
            for (std::size_t i = 0; i < n; ++i) {
                std::optional<FractalReal> cell;
                std::optional<Rational> cell_exact = Rational(0);
                for (std::size_t a = 0; a < p.coeffs.size(); ++a) {
                    if (a > i || i - a >= q.coeffs.size()) continue;
                    const std::size_t b = i - a;
                    FractalReal prod = p.coeffs[a] * q.coeffs[b];
                    cell = cell ? (*cell) + prod : prod;
                    if (cell_exact && p.exact[a] && q.exact[b]) {
                        cell_exact = *cell_exact + (*p.exact[a] * *q.exact[b]);
                    } else {
                        cell_exact = std::nullopt;
                    }
                }
                out.coeffs.push_back(cell ? *cell : embed_rational(Rational(0), Level(0)));
                out.exact.push_back(cell ? cell_exact : std::optional<Rational>(Rational(0)));
            }
            return out;
        }
        case Expr::Kind::Neg: {
            BodyPoly p = body_poly_of(*e.a, apartness_bound);
            for (auto& c : p.coeffs) c = neg(c);
            for (auto& q : p.exact) {
                if (q) q = Rational(0) - *q;
            }
            return p;
        }
        case Expr::Kind::Pow: {
            // has_free_var and Pow imply nat >= 1 reaches here; square by
            // iterated Mul through the Mul case for uniform exactness.
            BodyPoly base = body_poly_of(*e.a, apartness_bound);
            BodyPoly acc;
            acc.coeffs = {embed_rational(Rational(1), Level(0))};
            acc.exact = {Rational(1)};
            for (std::uint32_t i = 0; i < e.nat; ++i) {
                // inline product acc * base
                BodyPoly out;
                const std::size_t n = acc.coeffs.size() + base.coeffs.size() - 1;
                for (std::size_t t = 0; t < n; ++t) {
                    std::optional<FractalReal> cell;
                    std::optional<Rational> cell_exact = Rational(0);
                    for (std::size_t a = 0; a < acc.coeffs.size(); ++a) {
                        if (a > t || t - a >= base.coeffs.size()) continue;
                        const std::size_t b = t - a;
                        FractalReal prod = acc.coeffs[a] * base.coeffs[b];
                        cell = cell ? (*cell) + prod : prod;
                        if (cell_exact && acc.exact[a] && base.exact[b]) {
                            cell_exact = *cell_exact + (*acc.exact[a] * *base.exact[b]);
                        } else {
                            cell_exact = std::nullopt;
                        }
                    }
                    out.coeffs.push_back(cell ? *cell
                                              : embed_rational(Rational(0), Level(0)));
                    out.exact.push_back(cell ? cell_exact
                                             : std::optional<Rational>(Rational(0)));
                }
                acc = std::move(out);
            }
            return acc;
        }
        case Expr::Kind::Div: {
            if (has_free_var(*e.b)) {
                throw UnsupportedNodeError(
                    "unsupported-node: variable-dependent divisor under a binder");
            }
            BodyPoly p = body_poly_of(*e.a, apartness_bound);
            auto folded = fold_rational(*e.b);
            if (folded) {
                if (folded->is_zero()) {
                    throw ApartnessError("apartness-not-witnessed: division by exact zero");
                }
                const Rational inv = Rational(1) / *folded;
                for (auto& c : p.coeffs) c = scale_by_rational(c, inv);
                for (auto& q : p.exact) {
                    if (q) q = *q * inv;
                }
                return p;
            }
            const FractalReal inv = invert_searched(eval_expr(*e.b, apartness_bound),
                                                    apartness_bound);
            for (auto& c : p.coeffs) c = c * inv;
            for (auto& q : p.exact) q = std::nullopt;
            return p;
        }
        case Expr::Kind::Deriv: {
            // Lower f'(g(x)) to the composed polynomial before expansion.
            ExprPtr lowered = subst_var(symbolic_diff(e.a), e.b);
            return body_poly_of(*lowered, apartness_bound);
        }
        case Expr::Kind::Integral:
            throw UnsupportedNodeError(
                "unsupported-node: integral bounds depending on the variable");
        default:
            throw UnsupportedNodeError("unsupported-node: not a polynomial body");
    }
}

/// Coefficient magnitude bounds -> Lipschitz data on [lo, hi]:
/// L >= sum i B_i R^(i-1) >= max |p'|, with R = max(|lo|, |hi|, 1).
inline Rational crude_slope_bound(const BodyPoly& p, const Rational& lo, const Rational& hi) {
    Rational R = abs(lo);
    if (abs(hi) > R) R = abs(hi);
    if (R < Rational(1)) R = Rational(1);
    Rational L(0);
    Rational rpow(1); // R^(i-1)
    for (std::size_t i = 1; i < p.coeffs.size(); ++i) {
        const Rational Bi = p.exact[i] ? abs(*p.exact[i]) : p.coeffs[i].magnitude_bound();
        L = L + Rational(static_cast<int>(i)) * Bi * rpow;
        rpow = rpow * R;
    }
    return L;
}

/// Same shape one derivative deeper: M2 >= sum i(i-1) B_i R^(i-2) >= max |p''|.
inline Rational crude_curvature_bound(const BodyPoly& p, const Rational& lo,
                                      const Rational& hi) {
    Rational R = abs(lo);
    if (abs(hi) > R) R = abs(hi);
    if (R < Rational(1)) R = Rational(1);
    Rational M(0);
    Rational rpow(1); // R^(i-2)
    for (std::size_t i = 2; i < p.coeffs.size(); ++i) {
        const Rational Bi = p.exact[i] ? abs(*p.exact[i]) : p.coeffs[i].magnitude_bound();
        M = M + Rational(static_cast<int>(i)) * Rational(static_cast<int>(i - 1)) * Bi * rpow;
        rpow = rpow * R;
    }
    return M;
}

inline Level poly_level(const BodyPoly& p) {
    Level lvl(0);
    for (const auto& c : p.coeffs) lvl = level_join(lvl, c.level());
    return lvl;
}

inline EffectiveFunction effective_from_body_poly(const BodyPoly& p, const Rational& lo,
                                                  const Rational& hi) {
    EffectiveFunction F;
    F.level = poly_level(p);
    F.domain_lo = lo;
    F.domain_hi = hi;
    if (p.all_exact()) {
        std::vector<Rational> cs;
        cs.reserve(p.exact.size());
        for (const auto& q : p.exact) cs.push_back(*q);
        RationalPolynomial rp(std::move(cs));
        const Level lvl = F.level;
        F.rational_eval = [rp, lvl](const Rational& q) {
            return embed_rational(rp.eval(q), lvl);
        };
        F.exact_eval = [rp](const Rational& q) { return rp.eval(q); };
        F.modulus = Modulus::lipschitz(rp.slope_bound_on(lo, hi));
        return F;
    }
    const std::vector<FractalReal> coeffs = p.coeffs;
    F.rational_eval = [coeffs](const Rational& q) {
        FractalReal acc = embed_rational(Rational(0), Level(0));
        Rational power(1);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (i > 0) power = power * q;
            acc = acc + scale_by_rational(coeffs[i], power);
        }
        return acc;
    };
    F.exact_eval = std::nullopt;
    F.modulus = Modulus::lipschitz(crude_slope_bound(p, lo, hi));
    return F;
}

} // namespace detail

/// A binder body as an effective function on [lo, hi]: the canonical
/// polynomial with its certified Lipschitz modulus (Bernstein-sharp for
/// exact rational coefficients, coefficient-bound crude otherwise).
inline EffectiveFunction effective_function_of(const Expr& body, const Rational& lo,
                                               const Rational& hi,
                                               std::uint32_t apartness_bound = 64) {
    if (!(lo <= hi)) throw Error("effective_function_of needs lo <= hi");
    return detail::effective_from_body_poly(detail::body_poly_of(body, apartness_bound), lo,
                                            hi);
}

/// Evaluate a closed expression to a level-tagged real. Results are
/// re-tagged at the inferred level of the node (never below the level
/// of the construction).
inline FractalReal eval_expr(const Expr& e, std::uint32_t apartness_bound) {
    FractalReal out = [&]() -> FractalReal {
        switch (e.kind) {
            case Expr::Kind::IntLit: return FractalReal::embed_integer(e.int_value, Level(0));
            case Expr::Kind::RatLit: return embed_rational(e.rat_value, Level(0));
            case Expr::Kind::Var:
                throw OpenExpressionError(
                    "open-expression: the variable is not bound at top level");
            case Expr::Kind::Add:
                return eval_expr(*e.a, apartness_bound) + eval_expr(*e.b, apartness_bound);
            case Expr::Kind::Sub:
                return eval_expr(*e.a, apartness_bound) - eval_expr(*e.b, apartness_bound);
            case Expr::Kind::Mul:
                return eval_expr(*e.a, apartness_bound) * eval_expr(*e.b, apartness_bound);
            case Expr::Kind::Div:
                return eval_expr(*e.a, apartness_bound) *
                       detail::invert_searched(eval_expr(*e.b, apartness_bound),
                                               apartness_bound);
            case Expr::Kind::Neg: return neg(eval_expr(*e.a, apartness_bound));
            case Expr::Kind::Pow:
                return detail::pow_real(eval_expr(*e.a, apartness_bound), e.nat);
            case Expr::Kind::Root:
                return poly_root(RationalPolynomial(e.poly), e.lo, e.hi, Level(1));
            case Expr::Kind::ConstE: return constant_e();
            case Expr::Kind::ConstPi: return constant_pi();
            case Expr::Kind::ConstLiouville: return constant_liouville(e.nat);
            case Expr::Kind::Deriv: {
                const FractalReal at = eval_expr(*e.b, apartness_bound);
                const Rational q0 = at.approx(0);
                const Rational lo = q0 - Rational(2);
                const Rational hi = q0 + Rational(2);
                detail::BodyPoly p = detail::body_poly_of(*e.a, apartness_bound);
                const EffectiveFunction F = detail::effective_from_body_poly(p, lo, hi);
                const Rational M2 = detail::crude_curvature_bound(p, lo, hi);
                Modulus dmod;
                if (M2 > Rational(0)) {
                    dmod = Modulus([M2](const Rational& eps) {
                        const Rational d = eps / M2;
                        return d > Rational(1) ? Rational(1) : d;
                    });
                }
                return differentiate(F, at, dmod);
            }
            case Expr::Kind::Integral: {
                const auto qlo = fold_rational(*e.b);
                const auto qhi = fold_rational(*e.c);
                if (!qlo || !qhi) {
                    throw UnsupportedNodeError(
                        "unsupported-node: integral bounds must be exact rationals");
                }
                const bool flipped = *qhi < *qlo;
                const Rational a = flipped ? *qhi : *qlo;
                const Rational b = flipped ? *qlo : *qhi;
                const EffectiveFunction F =
                    effective_function_of(*e.a, a, b, apartness_bound);
                const FractalReal I = integrate(F, a, b);
                return flipped ? neg(I) : I;
            }
            case Expr::Kind::MinOn: {
                const EffectiveFunction F =
                    effective_function_of(*e.a, e.lo, e.hi, apartness_bound);
                const CompactInterval K(e.lo, e.hi);
                auto fn = [F, K](std::uint32_t k) {
                    return effective_min(F, K, k + 1).value.approx(k + 1);
                };
                return FractalReal::from_approximant(fn, level_lift(F.level),
                                                     Provenance::derived("min_on"));
            }
        }
        throw Error("unreachable expression kind");
    }();
    return out.with_level(infer_level(e));
}

inline FractalReal eval_expr(const ExprPtr& e, std::uint32_t apartness_bound = 64) {
    return eval_expr(*e, apartness_bound);
}

/// Minimum of a binder body over [lo, hi] with its witness point,
/// value-tagged like the corresponding MinOn node.
inline MinWitness min_on_witness(const Expr& body, const Rational& lo, const Rational& hi,
                                 std::uint32_t k, std::uint32_t apartness_bound = 64) {
    const EffectiveFunction F = effective_function_of(body, lo, hi, apartness_bound);
    MinWitness w = effective_min(F, CompactInterval(lo, hi), k);
    w.value = w.value.with_level(level_lift(infer_level(body)));
    return w;
}

// ---- number classes --------------------------------------------------------

struct NumberClass {
    enum class Tag { Rational, Algebraic, Transcendental, Unknown };

    Tag tag = Tag::Unknown;
    Level level{0};

    std::string str() const {
        switch (tag) {
            case Tag::Rational: return "rational";
            case Tag::Algebraic: return "algebraic";
            case Tag::Transcendental: return "transcendental";
            case Tag::Unknown: return "unknown";
        }
        return "unknown";
    }
};

namespace detail {

inline bool folds_to_zero(const Expr& e) {
    const auto q = fold_rational(e);
    return q && q->is_zero();
}

inline NumberClass combine_ring(const NumberClass& ca, const NumberClass& cb,
                                Level infer_here) {
    using Tag = NumberClass::Tag;
    if (ca.tag == Tag::Unknown || cb.tag == Tag::Unknown) return {Tag::Unknown, infer_here};
    if (ca.tag == Tag::Rational && cb.tag == Tag::Rational) return {Tag::Rational, Level(0)};
    if (ca.tag == Tag::Rational) {
        return {cb.tag, cb.level}; // algebraic or transcendental survives a rational shift
    }
    if (cb.tag == Tag::Rational) return {ca.tag, ca.level};
    if (ca.tag == Tag::Algebraic && cb.tag == Tag::Algebraic) {
        return {Tag::Algebraic,
                level_lift(level_join(ca.level, cb.level))}; // deeper construction
    }
    return {Tag::Unknown, infer_here}; // transcendental against transcendental/algebraic
}

} // namespace detail

/// Sound number-class inference for closed expressions (presuming every
/// division in the expression is well-defined). Rational shifts and
/// scalings preserve algebraicity and transcendence; everything the
/// lattice cannot justify degrades to Unknown at the node's inferred
/// level.
inline NumberClass classify(const Expr& e) {
    using Tag = NumberClass::Tag;
    switch (e.kind) {
        case Expr::Kind::IntLit:
        case Expr::Kind::RatLit: return {Tag::Rational, Level(0)};
        case Expr::Kind::Var:
            throw OpenExpressionError("open-expression: cannot classify a free variable");
        case Expr::Kind::Root: return {Tag::Algebraic, Level(1)};
        case Expr::Kind::ConstE:
        case Expr::Kind::ConstPi: return {Tag::Transcendental, Level(2)};
        case Expr::Kind::ConstLiouville: return {Tag::Transcendental, Level(3)};
        case Expr::Kind::Neg: return classify(*e.a);
        case Expr::Kind::Add:
        case Expr::Kind::Sub: {
            const NumberClass ca = classify(*e.a);
            const NumberClass cb = classify(*e.b);
            return detail::combine_ring(ca, cb, infer_level(e));
        }
        case Expr::Kind::Mul: {
            // A zero factor collapses the product before lattice rules.
            if (detail::folds_to_zero(*e.a) || detail::folds_to_zero(*e.b)) {
                return {Tag::Rational, Level(0)};
            }
            const NumberClass ca = classify(*e.a);
            const NumberClass cb = classify(*e.b);
            return detail::combine_ring(ca, cb, infer_level(e));
        }
        case Expr::Kind::Div: {
            if (detail::folds_to_zero(*e.a)) return {Tag::Rational, Level(0)};
            const NumberClass ca = classify(*e.a);
            const NumberClass cb = classify(*e.b);
            if (cb.tag == Tag::Rational && detail::folds_to_zero(*e.b)) {
                return {Tag::Unknown, infer_level(e)}; // undefined; evaluation rejects it
            }
            // 1/y preserves the class of y, then combine multiplicatively.
            return detail::combine_ring(ca, cb, infer_level(e));
        }
        case Expr::Kind::Pow: {
            if (e.nat == 0) return {Tag::Rational, Level(0)};
            NumberClass ca = classify(*e.a);
            if (e.nat == 1) return ca;
            if (ca.tag == Tag::Algebraic) return {Tag::Algebraic, level_lift(ca.level)};
            return ca; // rational^n rational; transcendental^n transcendental
        }
        case Expr::Kind::Deriv:
        case Expr::Kind::Integral:
        case Expr::Kind::MinOn: return {Tag::Unknown, infer_level(e)};
    }
    throw Error("unreachable expression kind");
}

inline NumberClass classify(const ExprPtr& e) { return classify(*e); }

// ---- term enumeration ------------------------------------------------------

namespace detail {

inline std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
    const BigInt zb(z);
    const BigInt disc = 8 * zb + 1;
    BigInt w = (boost::multiprecision::sqrt(disc) - 1) / 2;
    while ((w + 1) * (w + 2) / 2 <= zb) ++w;
    while (w * (w + 1) / 2 > zb) --w;
    const BigInt t = w * (w + 1) / 2;
    const BigInt y = zb - t;
    const BigInt x = w - y;
    return {static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y)};
}

/// (fusc(n), fusc(n+1)) by one MSB-to-LSB pass over n's bits.
inline std::pair<BigInt, BigInt> fusc_pair(std::uint64_t n) {
    BigInt u = 0, v = 1; // (fusc(0), fusc(1))
    if (n == 0) return {u, v};
    int top = 63;
    while (((n >> top) & 1u) == 0) --top;
    for (int i = top; i >= 0; --i) {
        if ((n >> i) & 1u) {
            u = u + v; // (fusc(2k+1), fusc(2k+2))
        } else {
            v = u + v; // (fusc(2k), fusc(2k+1))
        }
    }
    return {u, v};
}

/// n-th positive rational in Calkin-Wilf order (n >= 1): fusc(n)/fusc(n+1).
inline Rational calkin_wilf(std::uint64_t n) {
    auto [u, v] = fusc_pair(n);
    return Rational(u, v);
}

inline Rational rat_nonneg(std::uint64_t u) {
    return u == 0 ? Rational(0) : calkin_wilf(u);
}
inline Rational rat_positive(std::uint64_t u) { return calkin_wilf(u + 1); }
inline Rational rat_signed(std::uint64_t u) {
    if (u == 0) return Rational(0);
    return (u % 2 == 1) ? calkin_wilf((u + 1) / 2) : Rational(0) - calkin_wilf(u / 2);
}
inline Rational rat_nonzero(std::uint64_t u) {
    return (u % 2 == 0) ? calkin_wilf(u / 2 + 1) : Rational(0) - calkin_wilf((u + 1) / 2);
}

inline std::uint32_t wrap_base(std::uint64_t rest, std::uint64_t offset) {
    std::uint64_t b = rest - offset; // callers guarantee rest >= offset
    std::uint32_t base = static_cast<std::uint32_t>(b & 0xffffffffull);
    if (base < 2) base += 2;
    return base;
}

inline ExprPtr term_at(std::uint64_t index, bool scoped) {
    const std::uint64_t kind = index % 13;
    const std::uint64_t rest = index / 13;
    switch (kind) {
        case 0: return ex_int(BigInt(rest));
        case 1: return ex_rat(rat_nonneg(rest));
        case 2: {
            if (scoped) {
                if (rest == 0) return ex_var();
                if (rest == 1) return ex_e();
                if (rest == 2) return ex_pi();
                return ex_liouville(wrap_base(rest, 1));
            }
            if (rest == 0) return ex_e();
            if (rest == 1) return ex_pi();
            return ex_liouville(wrap_base(rest, 0));
        }
        case 3: {
            auto [l, r] = cantor_unpair(rest);
            return ex_add(term_at(l, scoped), term_at(r, scoped));
        }
        case 4: {
            auto [l, r] = cantor_unpair(rest);
            return ex_sub(term_at(l, scoped), term_at(r, scoped));
        }
        case 5: {
            auto [l, r] = cantor_unpair(rest);
            return ex_mul(term_at(l, scoped), term_at(r, scoped));
        }
        case 6: {
            auto [l, r] = cantor_unpair(rest);
            return ex_div(term_at(l, scoped), term_at(r, scoped));
        }
        case 7: return ex_neg(term_at(rest, scoped));
        case 8: {
            auto [l, r] = cantor_unpair(rest);
            return ex_pow(term_at(l, scoped),
                          static_cast<std::uint32_t>(r & 0xffffffffull));
        }
        case 9: {
            auto [pcode, bcode] = cantor_unpair(rest);
            auto [lenm1, payload] = cantor_unpair(pcode);
            std::vector<Rational> coeffs;
            for (std::uint64_t i = 0; i < lenm1; ++i) {
                auto [head, tail] = cantor_unpair(payload);
                coeffs.push_back(rat_signed(head));
                payload = tail;
            }
            coeffs.push_back(rat_nonzero(payload)); // nonzero leading coefficient
            auto [lcode, wcode] = cantor_unpair(bcode);
            const Rational lo = rat_signed(lcode);
            const Rational hi = lo + rat_positive(wcode);
            return ex_root(std::move(coeffs), lo, hi);
        }
        case 10: {
            auto [l, r] = cantor_unpair(rest);
            return ex_deriv(term_at(l, true), term_at(r, scoped));
        }
        case 11: {
            auto [l, r] = cantor_unpair(rest);
            auto [m, r2] = cantor_unpair(r);
            return ex_integral(term_at(l, true), term_at(m, scoped), term_at(r2, scoped));
        }
        default: { // 12
            auto [l, r] = cantor_unpair(rest);
            auto [u, v] = cantor_unpair(r);
            const Rational lo = rat_signed(u);
            return ex_min_on(term_at(l, true), lo, lo + rat_positive(v));
        }
    }
}

} // namespace detail

/// index-th closed canonical term. Total: every index yields a
/// well-formed closed expression, index 0 is the integer literal 0, and
/// the map is injective below the 32-bit caps on exponents and series
/// bases (far beyond any enumerable prefix).
inline ExprPtr enumerate_terms(std::uint64_t index) { return detail::term_at(index, false); }

/// Same enumeration over bodies: the variable joins the atom family.
inline ExprPtr enumerate_scoped_terms(std::uint64_t index) {
    return detail::term_at(index, true);
}

// ---- gap certificates ------------------------------------------------------

/// A certificate that x0 does not minimize the body on [lo, hi]: a net
/// point `witness` and a dyadic `gap` with F(witness) + gap < F(x0)
/// certified by a comparison at `precision`. Consuming completed values
/// of the body function makes the certificate live one level above it.
struct GapCertificate {
    Rational witness;
    Rational gap;
    std::uint32_t precision = 0;
    Level level{0};
};

/// Scan the modulus net of [lo, hi] at precision k + 2, find the best
/// competitor y*, subtract the sampling slack, round the observed gap
/// down to a dyadic, and only return a certificate if the strict
/// comparison F(y*) + gap < F(x0) is certified at precision k. nullopt
/// means no gap was found at this precision (never that x0 minimizes).
inline std::optional<GapCertificate> gap_certificate(const Expr& body, const Rational& lo,
                                                     const Rational& hi, const Rational& x0,
                                                     std::uint32_t k,
                                                     std::uint32_t apartness_bound = 64) {
    if (x0 < lo || hi < x0) {
        throw DomainViolation("domain-violation: reference point outside [lo, hi]");
    }
    const EffectiveFunction F = effective_function_of(body, lo, hi, apartness_bound);
    const Rational eps = Rational::pow2(-static_cast<std::int64_t>(k) - 2);
    const Rational mesh = F.modulus(eps) / Rational(2);
    const std::vector<Rational> net = epsilon_net(CompactInterval(lo, hi), mesh);
    const Rational a0 = F.sample(x0, k + 2);
    Rational best = F.sample(net[0], k + 2);
    Rational best_at = net[0];
    for (std::size_t i = 1; i < net.size(); ++i) {
        const Rational v = F.sample(net[i], k + 2);
        if (v < best) {
            best = v;
            best_at = net[i];
        }
    }
    const Rational observed = a0 - best - Rational::pow2(-static_cast<std::int64_t>(k) - 1);
    if (!(observed > Rational(0))) return std::nullopt;
    Rational gap(1);
    while (gap > observed) gap = gap / Rational(2);
    const FractalReal fx0 = eval_fn(F, embed_rational(x0, Level(0)));
    const FractalReal fy = eval_fn(F, embed_rational(best_at, Level(0)));
    const FractalReal lifted = fy + embed_rational(gap, Level(0));
    if (compare_at(lifted, fx0, k) != Ordering3::Less) return std::nullopt;
    return GapCertificate{best_at, gap, k, level_lift(infer_level(body))};
}

} // namespace stratum
