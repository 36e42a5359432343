#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "hirschlab/error.hpp"
#include "hirschlab/hrep.hpp"
#include "hirschlab/linalg.hpp"
#include "hirschlab/rational.hpp"

namespace hirschlab {

enum class Sense { Maximize, Minimize };

struct LPProblem {
    Sense sense = Sense::Maximize;
    QVector objective;
    HPolyhedron feasible_set;
};

/**
 * Optimal vertex with dual multipliers, one per inequality, satisfying
 *   value - c.x = sum_i dual_i * (b_i + a_i.x)   (maximize)
 *   c.x - value = sum_i dual_i * (b_i + a_i.x)   (minimize)
 * identically in x.
 */
struct Optimal {
    QVector point;
    Rational value;
    QVector dual;
};

/// feasible_point + t * ray stays feasible for all t >= 0 and improves the objective.
struct Unbounded {
    QVector feasible_point;
    QVector ray;
};

/// Nonnegative multipliers with sum_i farkas_i * a_i = 0 and sum_i farkas_i * b_i < 0.
struct Infeasible {
    QVector farkas;
};

using LPOutcome = std::variant<Optimal, Unbounded, Infeasible>;

inline const char* status_name(const LPOutcome& o)
{
    switch (o.index()) {
    case 0: return "optimal";
    case 1: return "unbounded";
    default: return "infeasible";
    }
}

namespace detail {

/**
 * Simplex dictionary over the variables
 *   x_0 .. x_{d-1}      free (ids 0 .. d-1)
 *   s_0 .. s_{m-1}      slacks s_i = b_i + a_i.x >= 0 (ids d .. d+m-1)
 *   t                   phase-one artificial (id d+m)
 * Every basic variable is stored as const + sum_k coef(row, k) * nonbasic_k.
 */
class Dictionary {
public:
    Dictionary() = default;

    explicit Dictionary(const HPolyhedron& p)
        : dim_(p.dim()), m_(p.size()), rows_(p.size()), cols_(p.dim()),
          basic_(rows_), nonbasic_(cols_), constant_(rows_), coef_(rows_ * cols_)
    {
        for (std::size_t i = 0; i < rows_; ++i) {
            basic_[i] = dim_ + i;
            constant_[i] = p[i].offset;
            for (std::size_t j = 0; j < cols_; ++j)
                at(i, j) = p[i].normal[j];
        }
        for (std::size_t j = 0; j < cols_; ++j)
            nonbasic_[j] = j;
        objective_.assign(cols_, Rational{});
    }

    std::size_t dim() const { return dim_; }
    std::size_t num_constraints() const { return m_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t basic(std::size_t r) const { return basic_[r]; }
    std::size_t nonbasic(std::size_t c) const { return nonbasic_[c]; }
    const Rational& constant(std::size_t r) const { return constant_[r]; }
    const Rational& coef(std::size_t r, std::size_t c) const { return coef_[r * cols_ + c]; }
    const Rational& objective(std::size_t c) const { return objective_[c]; }
    const Rational& objective_constant() const { return objective_constant_; }

    bool is_free(std::size_t var) const { return var < dim_; }
    bool is_slack(std::size_t var) const { return var >= dim_ && var < dim_ + m_; }
    std::size_t artificial_id() const { return dim_ + m_; }

    void pivot(std::size_t r, std::size_t c)
    {
        Rational inv = at(r, c).inverse();
        // Solve row r for the entering variable.
        for (std::size_t k = 0; k < cols_; ++k)
            if (k != c && !at(r, k).is_zero())
                at(r, k) = -at(r, k) * inv;
        constant_[r] = -constant_[r] * inv;
        at(r, c) = inv;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r || at(i, c).is_zero())
                continue;
            substitute(&coef_[i * cols_], constant_[i], r, c);
        }
        if (!objective_.empty() && !objective_[c].is_zero())
            substitute(objective_.data(), objective_constant_, r, c);
        std::swap(basic_[r], nonbasic_[c]);
    }

    /// Pivot every free variable into the basis, first usable row in order.
    void make_free_basic()
    {
        for (std::size_t c = 0; c < cols_; ++c) {
            if (!is_free(nonbasic_[c]))
                continue;
            for (std::size_t r = 0; r < rows_; ++r) {
                if (!is_free(basic_[r]) && !at(r, c).is_zero()) {
                    pivot(r, c);
                    break;
                }
            }
        }
    }

    bool primal_feasible() const
    {
        for (std::size_t r = 0; r < rows_; ++r)
            if (!is_free(basic_[r]) && constant_[r].sign() < 0)
                return false;
        return true;
    }

    /// Current values of x (nonbasic free variables are 0).
    QVector point() const
    {
        QVector x(dim_);
        for (std::size_t r = 0; r < rows_; ++r)
            if (is_free(basic_[r]))
                x[basic_[r]] = constant_[r];
        return x;
    }

    /// Change in x per unit increase of nonbasic column c.
    QVector direction(std::size_t c) const
    {
        QVector y(dim_);
        for (std::size_t r = 0; r < rows_; ++r)
            if (is_free(basic_[r]))
                y[basic_[r]] = coef(r, c);
        if (is_free(nonbasic_[c]))
            y[nonbasic_[c]] = 1;
        return y;
    }

    void set_objective(const QVector& c)
    {
        objective_.assign(cols_, Rational{});
        objective_constant_ = Rational{};
        for (std::size_t r = 0; r < rows_; ++r) {
            std::size_t var = basic_[r];
            if (!is_free(var) || c[var].is_zero())
                continue;
            objective_constant_.add_product(c[var], constant_[r]);
            for (std::size_t k = 0; k < cols_; ++k)
                if (!coef(r, k).is_zero())
                    objective_[k].add_product(c[var], coef(r, k));
        }
        for (std::size_t k = 0; k < cols_; ++k)
            if (is_free(nonbasic_[k]))
                objective_[k] += c[nonbasic_[k]];
    }

    /// Multipliers -objective(k) read off the nonbasic slack columns.
    QVector reduced_cost_multipliers() const
    {
        QVector lambda(m_);
        for (std::size_t k = 0; k < cols_; ++k)
            if (is_slack(nonbasic_[k]))
                lambda[nonbasic_[k] - dim_] = -objective_[k];
        return lambda;
    }

    /// Rows achieving the minimum ratio for entering column c; empty when unblocked.
    std::vector<std::size_t> blocking_rows(std::size_t c) const
    {
        std::vector<std::size_t> best;
        Rational best_ratio;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (is_free(basic_[r]) || coef(r, c).sign() >= 0)
                continue;
            Rational ratio = constant_[r] / -coef(r, c);
            if (best.empty() || ratio < best_ratio) {
                best.assign(1, r);
                best_ratio = std::move(ratio);
            } else if (ratio == best_ratio) {
                best.push_back(r);
            }
        }
        return best;
    }

    /// One pivot of Bland's rule (smallest eligible variable id enters and leaves).
    enum class Step { Pivoted, Optimal, Unbounded };
    Step bland_step(std::size_t& entering_column)
    {
        std::size_t enter = cols_;
        for (std::size_t k = 0; k < cols_; ++k) {
            if (is_free(nonbasic_[k])) {
                if (!objective_[k].is_zero()) {
                    entering_column = k;
                    return Step::Unbounded;
                }
                continue;
            }
            if (objective_[k].sign() > 0 && (enter == cols_ || nonbasic_[k] < nonbasic_[enter]))
                enter = k;
        }
        if (enter == cols_)
            return Step::Optimal;
        auto rows = blocking_rows(enter);
        if (rows.empty()) {
            entering_column = enter;
            return Step::Unbounded;
        }
        std::size_t leave = rows.front();
        for (std::size_t r : rows)
            if (basic_[r] < basic_[leave])
                leave = r;
        pivot(leave, enter);
        return Step::Pivoted;
    }

    Step run_bland(std::size_t& entering_column)
    {
        for (;;) {
            Step s = bland_step(entering_column);
            if (s != Step::Pivoted)
                return s;
        }
    }

    /// Adds the artificial column with coefficient 1 in every non-free row.
    void add_artificial()
    {
        std::vector<Rational> grown(rows_ * (cols_ + 1));
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t k = 0; k < cols_; ++k)
                grown[r * (cols_ + 1) + k] = std::move(coef_[r * cols_ + k]);
            grown[r * (cols_ + 1) + cols_] = is_free(basic_[r]) ? Rational{} : Rational{1};
        }
        coef_ = std::move(grown);
        nonbasic_.push_back(artificial_id());
        objective_.assign(cols_ + 1, Rational{});
        objective_constant_ = Rational{};
        ++cols_;
    }

    /// Drops the artificial column; it must be nonbasic.
    void remove_artificial()
    {
        std::size_t col = cols_;
        for (std::size_t k = 0; k < cols_; ++k)
            if (nonbasic_[k] == artificial_id())
                col = k;
        if (col == cols_)
            throw std::logic_error("artificial variable is basic");
        std::vector<Rational> shrunk(rows_ * (cols_ - 1));
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0, out = 0; k < cols_; ++k)
                if (k != col)
                    shrunk[r * (cols_ - 1) + out++] = std::move(coef_[r * cols_ + k]);
        coef_ = std::move(shrunk);
        nonbasic_.erase(nonbasic_.begin() + static_cast<std::ptrdiff_t>(col));
        objective_.erase(objective_.begin() + static_cast<std::ptrdiff_t>(col));
        --cols_;
    }

    std::optional<std::size_t> column_of(std::size_t var) const
    {
        for (std::size_t k = 0; k < cols_; ++k)
            if (nonbasic_[k] == var)
                return k;
        return std::nullopt;
    }
    std::optional<std::size_t> row_of(std::size_t var) const
    {
        for (std::size_t r = 0; r < rows_; ++r)
            if (basic_[r] == var)
                return r;
        return std::nullopt;
    }

    void set_phase_one_objective()
    {
        objective_.assign(cols_, Rational{});
        objective_constant_ = Rational{};
        objective_[*column_of(artificial_id())] = -1;
    }

private:
    Rational& at(std::size_t r, std::size_t c) { return coef_[r * cols_ + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return coef_[r * cols_ + c]; }

    // row := row with the entering variable (column c) replaced by pivot row r.
    void substitute(Rational* row, Rational& constant, std::size_t r, std::size_t c)
    {
        Rational f = row[c];
        const Rational* prow = &coef_[r * cols_];
        for (std::size_t k = 0; k < cols_; ++k)
            if (k != c && !prow[k].is_zero())
                row[k].add_product(f, prow[k]);
        constant.add_product(f, constant_[r]);
        row[c] = f * prow[c];
    }

    std::size_t dim_ = 0;
    std::size_t m_ = 0;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> basic_;
    std::vector<std::size_t> nonbasic_;
    std::vector<Rational> constant_;
    std::vector<Rational> coef_;
    std::vector<Rational> objective_;
    Rational objective_constant_;
};

}  // namespace detail

/**
 * Exact simplex solver over one inequality system. Feasibility (phase one) is
 * settled once at construction; solve() then starts every objective from the
 * same feasible basis, so repeated queries against one system are cheap.
 */
class LPSolver {
public:
    explicit LPSolver(HPolyhedron system) : system_(std::move(system)), dict_(system_)
    {
        dict_.make_free_basic();
        if (dict_.primal_feasible())
            return;

        dict_.add_artificial();
        std::size_t most_negative = dict_.rows();
        for (std::size_t r = 0; r < dict_.rows(); ++r) {
            if (dict_.is_free(dict_.basic(r)))
                continue;
            if (most_negative == dict_.rows() || dict_.constant(r) < dict_.constant(most_negative))
                most_negative = r;
        }
        std::size_t t_col = *dict_.column_of(dict_.artificial_id());
        dict_.set_phase_one_objective();
        dict_.pivot(most_negative, t_col);
        std::size_t unused = 0;
        if (dict_.run_bland(unused) != detail::Dictionary::Step::Optimal)
            throw std::logic_error("phase one cannot be unbounded");

        if (dict_.objective_constant().sign() < 0) {
            infeasible_ = Infeasible{dict_.reduced_cost_multipliers()};
            return;
        }
        if (auto r = dict_.row_of(dict_.artificial_id())) {
            // Degenerate: t is basic at zero; swap it for any slack column.
            std::size_t col = dict_.cols();
            for (std::size_t k = 0; k < dict_.cols(); ++k)
                if (!dict_.is_free(dict_.nonbasic(k)) && !dict_.coef(*r, k).is_zero() &&
                    (col == dict_.cols() || dict_.nonbasic(k) < dict_.nonbasic(col)))
                    col = k;
            if (col == dict_.cols())
                throw std::logic_error("artificial row has no slack coefficient");
            dict_.pivot(*r, col);
        }
        dict_.remove_artificial();
    }

    const HPolyhedron& system() const { return system_; }
    bool feasible() const { return !infeasible_.has_value(); }
    const std::optional<Infeasible>& infeasibility() const { return infeasible_; }

    /// Feasible dictionary after phase one; only meaningful when feasible().
    const detail::Dictionary& feasible_dictionary() const { return dict_; }

    LPOutcome solve(Sense sense, const QVector& objective) const
    {
        if (objective.size() != system_.dim())
            throw DimensionError("objective length does not match dimension");
        if (infeasible_)
            return *infeasible_;
        detail::Dictionary d = dict_;
        QVector c = objective;
        if (sense == Sense::Minimize)
            for (auto& v : c)
                v = -v;
        d.set_objective(c);
        std::size_t column = 0;
        if (d.run_bland(column) == detail::Dictionary::Step::Unbounded) {
            QVector ray = d.direction(column);
            if (d.is_free(d.nonbasic(column)) && d.objective(column).sign() < 0)
                for (auto& v : ray)
                    v = -v;
            return Unbounded{d.point(), std::move(ray)};
        }
        Rational value = sense == Sense::Maximize ? d.objective_constant() : -d.objective_constant();
        return Optimal{d.point(), std::move(value), d.reduced_cost_multipliers()};
    }

private:
    HPolyhedron system_;
    detail::Dictionary dict_;
    std::optional<Infeasible> infeasible_;
};

inline LPOutcome lp_solve(const LPProblem& p)
{
    return LPSolver(p.feasible_set).solve(p.sense, p.objective);
}

/**
 * Validates an outcome by substitution only: no pivoting, no elimination.
 * True iff the attached certificate proves the claimed outcome for p.
 */
inline bool check_certificate(const LPProblem& p, const LPOutcome& outcome)
{
    const auto& sys = p.feasible_set;
    const std::size_t d = sys.dim();
    if (p.objective.size() != d)
        return false;

    // sum_i lambda_i * a_i and sum_i lambda_i * b_i; false on a negative or misplaced multiplier.
    auto combine = [&](const QVector& lambda, QVector& normal, Rational& offset) {
        if (lambda.size() != sys.size())
            return false;
        normal.assign(d, Rational{});
        offset = Rational{};
        for (std::size_t i = 0; i < sys.size(); ++i) {
            if (lambda[i].sign() < 0)
                return false;
            if (lambda[i].is_zero())
                continue;
            offset.add_product(lambda[i], sys[i].offset);
            for (std::size_t j = 0; j < d; ++j)
                normal[j].add_product(lambda[i], sys[i].normal[j]);
        }
        return true;
    };

    if (const auto* opt = std::get_if<Optimal>(&outcome)) {
        if (opt->point.size() != d || !sys.contains(opt->point))
            return false;
        if (dot(p.objective, opt->point) != opt->value)
            return false;
        QVector normal;
        Rational offset;
        if (!combine(opt->dual, normal, offset))
            return false;
        if (p.sense == Sense::Maximize) {
            for (std::size_t j = 0; j < d; ++j)
                if (normal[j] != -p.objective[j])
                    return false;
            return offset == opt->value;
        }
        return normal == p.objective && offset == -opt->value;
    }
    if (const auto* unb = std::get_if<Unbounded>(&outcome)) {
        if (unb->feasible_point.size() != d || unb->ray.size() != d || !sys.contains(unb->feasible_point))
            return false;
        for (const auto& ineq : sys.inequalities())
            if (dot(ineq.normal, unb->ray).sign() < 0)
                return false;
        int gain = dot(p.objective, unb->ray).sign();
        return p.sense == Sense::Maximize ? gain > 0 : gain < 0;
    }
    const auto& inf = std::get<Infeasible>(outcome);
    QVector normal;
    Rational offset;
    if (!combine(inf.farkas, normal, offset))
        return false;
    return is_zero(normal) && offset.sign() < 0;
}

/**
 * Certificate that `system` implies a target inequality:
 *   sum_i multipliers_i * (b_i + a_i.x) + slack == target(x) identically,
 * with every multiplier and the slack nonnegative.
 */
struct FarkasImplication {
    QVector multipliers;
    Rational slack;
};

/// A point satisfying the system and violating the target.
struct NotImplied {
    QVector witness;
};

/// The system is empty, so it implies everything; carries the Farkas proof.
struct VacuouslyImplied {
    Infeasible certificate;
};

using Implication = std::variant<FarkasImplication, NotImplied, VacuouslyImplied>;

inline bool is_implied(const Implication& r) { return !std::holds_alternative<NotImplied>(r); }

inline bool check_implication(const HPolyhedron& system, const Inequality& target, const Implication& result)
{
    if (const auto* f = std::get_if<FarkasImplication>(&result)) {
        if (f->multipliers.size() != system.size() || f->slack.sign() < 0)
            return false;
        QVector normal(system.dim());
        Rational offset = f->slack;
        for (std::size_t i = 0; i < system.size(); ++i) {
            const Rational& l = f->multipliers[i];
            if (l.sign() < 0)
                return false;
            if (l.is_zero())
                continue;
            offset.add_product(l, system[i].offset);
            for (std::size_t j = 0; j < system.dim(); ++j)
                normal[j].add_product(l, system[i].normal[j]);
        }
        return offset == target.offset && normal == target.normal;
    }
    if (const auto* n = std::get_if<NotImplied>(&result))
        return n->witness.size() == system.dim() && system.contains(n->witness) && !target.satisfied_by(n->witness);
    const auto& v = std::get<VacuouslyImplied>(result);
    return check_certificate(LPProblem{Sense::Maximize, QVector(system.dim()), system}, v.certificate);
}

namespace detail {

// Single inequality of the system that is a positive multiple of the target
// normal with a compatible offset.
inline std::optional<FarkasImplication> direct_implication(const HPolyhedron& system, const Inequality& target)
{
    std::size_t lead = target.dim();
    for (std::size_t j = 0; j < target.dim(); ++j)
        if (!target.normal[j].is_zero()) {
            lead = j;
            break;
        }
    if (lead == target.dim())
        return std::nullopt;
    for (std::size_t i = 0; i < system.size(); ++i) {
        const auto& a = system[i].normal;
        if (a[lead].is_zero() || a[lead].sign() != target.normal[lead].sign())
            continue;
        Rational scale = target.normal[lead] / a[lead];
        bool parallel = true;
        for (std::size_t j = 0; j < target.dim() && parallel; ++j)
            parallel = a[j] * scale == target.normal[j];
        if (!parallel)
            continue;
        Rational slack = target.offset - scale * system[i].offset;
        if (slack.sign() < 0)
            continue;
        FarkasImplication f{QVector(system.size()), std::move(slack)};
        f.multipliers[i] = std::move(scale);
        return f;
    }
    return std::nullopt;
}

}  // namespace detail

/**
 * Decide whether every point of the solver's system satisfies `target`.
 * Parallel constraints are matched directly; otherwise one LP maximizes
 * -target.normal . x and the dual gives the multipliers.
 */
inline Implication implies(const LPSolver& solver, const Inequality& target)
{
    const auto& system = solver.system();
    if (target.dim() != system.dim())
        throw DimensionError("target inequality dimension mismatch");
    if (!solver.feasible())
        return VacuouslyImplied{*solver.infeasibility()};
    if (auto direct = detail::direct_implication(system, target))
        return *direct;

    QVector objective(target.dim());
    for (std::size_t j = 0; j < target.dim(); ++j)
        objective[j] = -target.normal[j];
    LPOutcome outcome = solver.solve(Sense::Maximize, objective);
    if (auto* opt = std::get_if<Optimal>(&outcome)) {
        // max(-a.x) = v  gives  a.x + v = sum lambda_i s_i(x), so target = sum + (b - v).
        Rational slack = target.offset - opt->value;
        if (slack.sign() >= 0)
            return FarkasImplication{std::move(opt->dual), std::move(slack)};
        return NotImplied{std::move(opt->point)};
    }
    const auto& unb = std::get<Unbounded>(outcome);
    // target(x0 + k r) = target(x0) + k (a.r) with a.r < 0; pick k so the value is -1.
    Rational at_start = target.evaluate(unb.feasible_point);
    Rational rate = dot(target.normal, unb.ray);
    Rational k = at_start.sign() < 0 ? Rational{} : (at_start + 1) / -rate;
    QVector witness = unb.feasible_point;
    for (std::size_t j = 0; j < witness.size(); ++j)
        witness[j].add_product(k, unb.ray[j]);
    return NotImplied{std::move(witness)};
}

inline Implication implies(const HPolyhedron& system, const Inequality& target)
{
    return implies(LPSolver(system), target);
}

}  // namespace hirschlab
