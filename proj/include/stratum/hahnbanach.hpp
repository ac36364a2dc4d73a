#pragma once

/**
 * Constructive one-dimensional-at-a-time extension of a dominated linear
 * functional, over finite-dimensional rational coordinate spaces.
 *
 * A LinearFunctional is given by a rational basis of its subspace and a
 * level-tagged real value on each basis vector; membership and
 * coordinates in the subspace are decided exactly by rational Gaussian
 * elimination. A SublinearFunctional is either a weighted l1 seminorm
 * with real weights (the closed-form case) or a caller-supplied
 * evaluator with an explicit Lipschitz bound (the certified-search
 * case).
 *
 * Extending f from U to U + span(v) means choosing the new value in
 *
 *   [ sup_u (-p(-v - u) - f(u)),  inf_u (p(v - u) - f(u)) ],
 *
 * and the work here is producing certified inner approximations of that
 * interval:
 *
 *   - weighted l1 over coordinate subspaces admits the exact interval
 *     [-w_j, +w_j] once domination |f(e_i)| <= w_i is certified on the
 *     basis (certified violation raises DominanceViolated);
 *   - general sublinear functionals get a finite grid search over a
 *     stated coefficient box, with Lipschitz-plus-approximation slack
 *     rounded inward so any reported interval is admissible relative to
 *     that box.
 *
 * Each performed extension step raises the level of the result by one
 * over the join of the inputs: the choice consults the ordering of
 * completed infinite objects, which is exactly what level tracking
 * charges for.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stratum/errors.hpp"
#include "stratum/rational.hpp"
#include "stratum/real.hpp"

namespace stratum {

struct RationalVector {
    std::vector<Rational> coords;

    RationalVector() = default;
    explicit RationalVector(std::vector<Rational> c) : coords(std::move(c)) {}

    std::size_t dim() const { return coords.size(); }

    const Rational& operator[](std::size_t i) const { return coords[i]; }

    std::string str() const {
        std::string out = "(";
        for (std::size_t i = 0; i < coords.size(); ++i) {
            if (i) out += ", ";
            out += coords[i].str();
        }
        return out + ")";
    }
};

inline RationalVector unit_vector(std::size_t dim, std::size_t j) {
    std::vector<Rational> c(dim, Rational(0));
    c.at(j) = Rational(1);
    return RationalVector(std::move(c));
}

namespace detail {

/// Exact coordinates of x in the given (not necessarily independent)
/// list of vectors, or nullopt when x is outside their span. Plain
/// Gauss-Jordan over the rationals on [B^T | x].
inline std::optional<std::vector<Rational>> span_coordinates(
    const std::vector<RationalVector>& basis, const RationalVector& x) {
    const std::size_t n = basis.size();
    const std::size_t d = x.dim();
    for (const auto& b : basis) {
        if (b.dim() != d) throw Error("vector dimensions disagree");
    }
    // rows: ambient coordinates; columns: basis vectors, then x.
    std::vector<std::vector<Rational>> m(d, std::vector<Rational>(n + 1, Rational(0)));
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < n; ++c) m[r][c] = basis[c][r];
        m[r][n] = x[r];
    }
    std::vector<std::size_t> pivot_col_of_row;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < d; ++col) {
        std::size_t pr = row;
        while (pr < d && m[pr][col] == Rational(0)) ++pr;
        if (pr == d) continue;
        std::swap(m[pr], m[row]);
        const Rational inv = Rational(1) / m[row][col];
        for (std::size_t c = col; c <= n; ++c) m[row][c] = m[row][c] * inv;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == row || m[r][col] == Rational(0)) continue;
            const Rational factor = m[r][col];
            for (std::size_t c = col; c <= n; ++c) {
                m[r][c] = m[r][c] - factor * m[row][c];
            }
        }
        pivot_col_of_row.push_back(col);
        ++row;
    }
    // Inconsistent iff some zeroed row keeps a nonzero last column.
    for (std::size_t r = row; r < d; ++r) {
        if (m[r][n] != Rational(0)) return std::nullopt;
    }
    std::vector<Rational> coords(n, Rational(0));
    for (std::size_t r = 0; r < row; ++r) {
        coords[pivot_col_of_row[r]] = m[r][n];
    }
    return coords;
}

} // namespace detail

/// Linear functional on the span of explicit rational vectors, with a
/// level-tagged real value on each of them.
class LinearFunctional {
public:
    LinearFunctional(std::vector<RationalVector> basis, std::vector<FractalReal> values,
                     Level level)
        : basis_(std::move(basis)), values_(std::move(values)), level_(level) {
        if (basis_.size() != values_.size()) {
            throw Error("one value per basis vector required");
        }
        for (std::size_t i = 1; i < basis_.size(); ++i) {
            if (basis_[i].dim() != basis_[0].dim()) {
                throw Error("vector dimensions disagree");
            }
        }
    }

    const std::vector<RationalVector>& basis() const { return basis_; }
    const std::vector<FractalReal>& values() const { return values_; }
    Level level() const { return level_; }

    std::size_t ambient_dim() const { return basis_.empty() ? 0 : basis_[0].dim(); }

    bool contains(const RationalVector& x) const {
        return detail::span_coordinates(basis_, x).has_value();
    }

    /// f(x) for x in the subspace; Error outside it.
    FractalReal eval(const RationalVector& x) const {
        auto coords = detail::span_coordinates(basis_, x);
        if (!coords) throw Error("point outside the functional's subspace");
        FractalReal acc = embed_rational(Rational(0), Level(0));
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            if ((*coords)[i] == Rational(0)) continue;
            acc = acc + scale_by_rational(values_[i], (*coords)[i]);
        }
        return acc;
    }

private:
    std::vector<RationalVector> basis_;
    std::vector<FractalReal> values_;
    Level level_;
};

/// Sublinear (positively homogeneous, subadditive) functional.
class SublinearFunctional {
public:
    enum class Kind { WeightedL1, General };

    /// p(x) = sum_i w_i |x_i| with nonnegative real weights.
    static SublinearFunctional weighted_l1(std::vector<FractalReal> weights, Level level) {
        SublinearFunctional p;
        p.kind_ = Kind::WeightedL1;
        p.weights_ = std::move(weights);
        p.level_ = level;
        return p;
    }

    /// Arbitrary evaluator with a certified Lipschitz bound with respect
    /// to the sup norm on ambient coordinates.
    static SublinearFunctional general(std::function<FractalReal(const RationalVector&)> fn,
                                       Rational lipschitz_bound, Level level) {
        SublinearFunctional p;
        p.kind_ = Kind::General;
        p.general_ = std::move(fn);
        p.lipschitz_ = std::move(lipschitz_bound);
        p.level_ = level;
        return p;
    }

    Kind kind() const { return kind_; }
    Level level() const { return level_; }
    const std::vector<FractalReal>& weights() const { return weights_; }
    const Rational& lipschitz_bound() const { return lipschitz_; }

    FractalReal eval(const RationalVector& x) const {
        if (kind_ == Kind::General) return general_(x);
        if (x.dim() != weights_.size()) throw Error("vector dimensions disagree");
        FractalReal acc = embed_rational(Rational(0), Level(0));
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            if (x[i] == Rational(0)) continue;
            acc = acc + scale_by_rational(weights_[i], abs(x[i]));
        }
        return acc;
    }

private:
    SublinearFunctional() : lipschitz_(0) {}

    Kind kind_ = Kind::General;
    std::vector<FractalReal> weights_;
    std::function<FractalReal(const RationalVector&)> general_;
    Rational lipschitz_;
    Level level_{0};
};

/// Certified range of admissible values for the next extension step.
struct AdmissibleInterval {
    FractalReal lo;
    FractalReal hi;
};

/// Box-and-mesh parameters for the general-kind certified grid search,
/// and the precision used for dominance checks and choice verification.
struct SearchParams {
    Rational box_radius = Rational(1);
    std::uint32_t subdivisions = 16;
    std::uint32_t precision = 16;
};

namespace detail {

inline bool is_unit_vector(const RationalVector& v, std::size_t& index_out) {
    bool seen = false;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (v[i] == Rational(0)) continue;
        if (seen || v[i] != Rational(1)) return false;
        seen = true;
        index_out = i;
    }
    return seen;
}

/// Enumerate grid coefficient tuples c in [-R, R]^n with the given mesh,
/// invoking visit(u) for u = sum c_i basis_i (ambient dimension d).
inline void for_each_grid_point(const std::vector<RationalVector>& basis, std::size_t d,
                                const Rational& R, std::uint32_t subdivisions,
                                const std::function<void(const RationalVector&)>& visit) {
    const std::size_t n = basis.size();
    const Rational mesh = (Rational(2) * R) / Rational(static_cast<int>(subdivisions));
    std::vector<std::uint32_t> idx(n, 0);
    while (true) {
        std::vector<Rational> u(d, Rational(0));
        for (std::size_t i = 0; i < n; ++i) {
            const Rational ci = Rational(-1) * R + mesh * Rational(static_cast<int>(idx[i]));
            for (std::size_t r = 0; r < d; ++r) u[r] = u[r] + ci * basis[i][r];
        }
        visit(RationalVector(u));
        std::size_t pos = 0;
        while (pos < n && idx[pos] == subdivisions) {
            idx[pos] = 0;
            ++pos;
        }
        if (pos == n) break;
        ++idx[pos];
    }
}

inline RationalVector vec_sub(const RationalVector& a, const RationalVector& b) {
    std::vector<Rational> c(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) c[i] = a[i] - b[i];
    return RationalVector(std::move(c));
}

inline RationalVector vec_neg_sub(const RationalVector& a, const RationalVector& b) {
    std::vector<Rational> c(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) c[i] = Rational(0) - a[i] - b[i];
    return RationalVector(std::move(c));
}

} // namespace detail

/// Admissible interval for extending f to f + span(v).
///
/// Weighted-l1 closed form (requires f's basis and v to be standard
/// unit vectors): after certifying |f(e_i)| <= w_i on the basis at the
/// stated precision — a certified violation raises DominanceViolated —
/// the interval is exactly [-w_j, +w_j] for v = e_j, because each term
/// -w_i |u_i| - f(e_i) u_i of the defining sup is nonpositive and
/// vanishes at u = 0.
///
/// General kind: a grid search over the coefficient box [-R, R]^dim(U)
/// maximizing -p(-v - u) - f(u) and minimizing p(v - u) - f(u), with
/// Lipschitz slack for the mesh and approximation slack for the real
/// evaluations both rounded inward. The reported interval is admissible
/// against every u in the searched box; Error if the rounding leaves
/// nothing certifiable.
inline AdmissibleInterval admissible_interval(const LinearFunctional& f,
                                              const SublinearFunctional& p,
                                              const RationalVector& v,
                                              const SearchParams& params = {}) {
    if (f.ambient_dim() != 0 && v.dim() != f.ambient_dim()) {
        throw Error("vector dimensions disagree");
    }
    if (f.contains(v)) throw Error("vector already in the functional's subspace");

    if (p.kind() == SublinearFunctional::Kind::WeightedL1) {
        std::size_t j = 0;
        bool coordinate_form = detail::is_unit_vector(v, j);
        std::vector<std::size_t> basis_axes;
        for (const auto& b : f.basis()) {
            std::size_t i = 0;
            if (!detail::is_unit_vector(b, i)) {
                coordinate_form = false;
                break;
            }
            basis_axes.push_back(i);
        }
        if (coordinate_form) {
            if (v.dim() != p.weights().size()) throw Error("vector dimensions disagree");
            for (std::size_t t = 0; t < basis_axes.size(); ++t) {
                const FractalReal& c = f.values()[t];
                const FractalReal& w = p.weights()[basis_axes[t]];
                if (compare_at(c, w, params.precision) == Ordering3::Greater ||
                    compare_at(neg(c), w, params.precision) == Ordering3::Greater) {
                    throw DominanceViolated(
                        "dominance-violated: |f(e_" + std::to_string(basis_axes[t]) +
                        ")| certified above its weight");
                }
            }
            const FractalReal& wj = p.weights()[j];
            return AdmissibleInterval{neg(wj), wj};
        }
    }

    // Certified grid search. Slack: Lipschitz variation of both
    // objectives over one mesh cell plus two approximation errors.
    const Rational mesh =
        (Rational(2) * params.box_radius) / Rational(static_cast<int>(params.subdivisions));
    Rational basis_scale(0);
    for (const auto& b : f.basis()) {
        Rational m(0);
        for (std::size_t r = 0; r < b.dim(); ++r) {
            if (abs(b[r]) > m) m = abs(b[r]);
        }
        basis_scale = basis_scale + m;
    }
    Rational f_scale(0);
    for (const auto& val : f.values()) f_scale = f_scale + val.magnitude_bound();
    Rational lip;
    if (p.kind() == SublinearFunctional::Kind::General) {
        lip = p.lipschitz_bound() * basis_scale + f_scale;
    } else {
        Rational wsum(0);
        for (const auto& w : p.weights()) wsum = wsum + w.magnitude_bound();
        lip = wsum * basis_scale + f_scale;
    }
    const Rational approx_err =
        Rational(4) * Rational::pow2(-static_cast<std::int64_t>(params.precision));
    const Rational slack = lip * mesh + approx_err;

    std::optional<Rational> best_lo;
    std::optional<Rational> best_hi;
    detail::for_each_grid_point(
        f.basis(), v.dim(), params.box_radius, params.subdivisions,
        [&](const RationalVector& u) {
            const FractalReal fu = f.basis().empty()
                                       ? embed_rational(Rational(0), Level(0))
                                       : f.eval(u);
            const Rational lo_val =
                (neg(p.eval(detail::vec_neg_sub(v, u))) - fu).approx(params.precision);
            const Rational hi_val =
                (p.eval(detail::vec_sub(v, u)) - fu).approx(params.precision);
            if (!best_lo || lo_val > *best_lo) best_lo = lo_val;
            if (!best_hi || hi_val < *best_hi) best_hi = hi_val;
        });
    if (!best_lo || !best_hi) throw Error("empty grid search");
    const Rational lo_in = *best_lo + slack;
    const Rational hi_in = *best_hi - slack;
    if (!(lo_in <= hi_in)) {
        throw Error("admissible interval not certified at this mesh; refine the search");
    }
    const Level lvl = level_join(f.level(), p.level());
    return AdmissibleInterval{embed_rational(lo_in, lvl), embed_rational(hi_in, lvl)};
}

/// One extension step: the vector to adjoin and how to pick its value.
struct ExtensionStep {
    enum class Choice { Midpoint, Value };

    RationalVector vector;
    Choice choice = Choice::Midpoint;
    Rational value = Rational(0); // used when choice == Value

    static ExtensionStep midpoint(RationalVector v) {
        return ExtensionStep{std::move(v), Choice::Midpoint, Rational(0)};
    }
    static ExtensionStep with_value(RationalVector v, Rational q) {
        return ExtensionStep{std::move(v), Choice::Value, std::move(q)};
    }
};

/// Extend f step by step, keeping domination by p. Midpoint steps take
/// the midpoint of the certified admissible interval at the stated
/// precision; explicit values are verified against the interval, and a
/// certified-outside value raises ChoiceOutsideInterval. If at least
/// one step runs, the result's level is the lifted join of the inputs'
/// levels: the choices consulted order relations on completed reals.
inline LinearFunctional extend(const LinearFunctional& f, const SublinearFunctional& p,
                               const std::vector<ExtensionStep>& steps,
                               const SearchParams& params = {}) {
    std::vector<RationalVector> basis = f.basis();
    std::vector<FractalReal> values = f.values();
    const Level result_level =
        steps.empty() ? f.level() : level_lift(level_join(f.level(), p.level()));
    LinearFunctional cur(basis, values, f.level());
    for (const ExtensionStep& step : steps) {
        const AdmissibleInterval box = admissible_interval(cur, p, step.vector, params);
        Rational alpha;
        if (step.choice == ExtensionStep::Choice::Midpoint) {
            alpha = (box.lo.approx(params.precision) + box.hi.approx(params.precision)) /
                    Rational(2);
        } else {
            alpha = step.value;
        }
        const FractalReal alpha_real = embed_rational(alpha, Level(0));
        if (compare_at(alpha_real, box.lo, params.precision) == Ordering3::Less ||
            compare_at(alpha_real, box.hi, params.precision) == Ordering3::Greater) {
            throw ChoiceOutsideInterval("choice-outside-interval: " + alpha.str() +
                                        " certified outside the admissible range");
        }
        basis.push_back(step.vector);
        values.push_back(embed_rational(alpha, result_level));
        cur = LinearFunctional(basis, values, result_level);
    }
    return cur;
}

/// Result of sampling-based domination verification.
struct DominationReport {
    bool verified = false;
    std::optional<RationalVector> violated_at;
};

/// Check f(x) <= p(x) at each sample at precision k: any certified
/// Greater is reported as a violation witness; Less or Indistinguishable
/// both pass (soundness: a true violation of margin above 2^-(k-1)
/// cannot be certified Less).
inline DominationReport verify_domination(const LinearFunctional& f,
                                          const SublinearFunctional& p,
                                          const std::vector<RationalVector>& samples,
                                          std::uint32_t k) {
    for (const RationalVector& x : samples) {
        if (compare_at(f.eval(x), p.eval(x), k) == Ordering3::Greater) {
            return DominationReport{false, x};
        }
    }
    return DominationReport{true, std::nullopt};
}

} // namespace stratum
