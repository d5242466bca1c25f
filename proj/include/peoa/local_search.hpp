#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include "peoa/core_types.hpp"

namespace peoa {

/// Box of half-width y_size around the incumbent, clipped to the space.
struct Territory {
    double y_size = 0.0;
    Vector lower;
    Vector upper;
    Vector start;
};

/// y_size = max(rho * min_j(upper_j - lower_j), 1); start is best.position.
Territory territory(const Eagle& best, const SearchSpace& space, double rho);

struct LocalResult {
    Vector best_point;
    double best_value = 0.0;
    std::uint64_t evals_consumed = 0;
};

/// Objective as seen by a local minimizer: returns std::nullopt once the
/// evaluation budget for this call is spent.
class BudgetedFunction {
public:
    using Fn = std::function<double(std::span<const double>)>;

    BudgetedFunction(Fn fn, std::uint64_t budget) : fn_(std::move(fn)), budget_(budget) {}

    std::optional<double> operator()(std::span<const double> x);
    bool has_budget() const noexcept { return used_ < budget_; }
    std::uint64_t used() const noexcept { return used_; }

private:
    Fn fn_;
    std::uint64_t budget_;
    std::uint64_t used_ = 0;
};

/// Strategy interface for the territory search. Implementations must only
/// evaluate points inside [terr.lower, terr.upper] and must return a point
/// no worse than the start.
class LocalMinimizer {
public:
    virtual ~LocalMinimizer() = default;
    virtual std::string_view name() const = 0;
    virtual LocalResult minimize(BudgetedFunction& fn, const Territory& terr, double start_value) const = 0;
};

/// Coordinate pattern search: poll +/- step along each axis, accept the first
/// improvement, halve the step after a failed sweep.
class CompassSearch final : public LocalMinimizer {
public:
    explicit CompassSearch(double initial_step_fraction = 0.1) : initial_step_fraction_(initial_step_fraction) {}
    std::string_view name() const override { return "compass"; }
    LocalResult minimize(BudgetedFunction& fn, const Territory& terr, double start_value) const override;

private:
    double initial_step_fraction_;
};

/// Projected BFGS with forward-difference gradients and an Armijo backtracking
/// search along the projection arc. Variables pinned at a bound with the
/// gradient pointing outward are frozen for the iteration.
class ProjectedQuasiNewton final : public LocalMinimizer {
public:
    std::string_view name() const override { return "quasi-newton"; }
    LocalResult minimize(BudgetedFunction& fn, const Territory& terr, double start_value) const override;
};

/// Default: quasi-Newton descent, then a compass search polish from its result
/// with whatever budget is left. Handles both smooth and kinked objectives.
class HybridLocalSearch final : public LocalMinimizer {
public:
    std::string_view name() const override { return "hybrid"; }
    LocalResult minimize(BudgetedFunction& fn, const Territory& terr, double start_value) const override;
};

/// Free-function forms. compass_search polls from `initial_step`;
/// projected_quasi_newton reports the length of its last accepted step.
LocalResult compass_search(BudgetedFunction& fn, const Territory& terr, double start_value, double initial_step);
LocalResult projected_quasi_newton(BudgetedFunction& fn, const Territory& terr, double start_value,
                                   double* last_step);

const LocalMinimizer& default_local_minimizer();

/// Stop once the step (or simplex) size falls below this fraction of y_size.
inline constexpr double kLocalStepTolerance = 1e-12;

using EvalObserver = std::function<void(std::span<const double>, double)>;

/// Runs `method` from terr.start (whose value is start_value; not re-evaluated)
/// with at most min(budget, counter.remaining()) evaluations through
/// `evaluate`. `observer` sees every evaluated point.
LocalResult local_minimize(const Objective& obj, const Territory& terr, double start_value, std::uint64_t budget,
                           EvalCounter& counter, const LocalMinimizer& method = default_local_minimizer(),
                           const EvalObserver& observer = {});

/// Y* of the previous generation when X* did not move, otherwise X*.
Vector warm_start_rule(const std::optional<Eagle>& prev_best, const std::optional<LocalResult>& prev_local,
                       const Eagle& current_best);

}  // namespace peoa
