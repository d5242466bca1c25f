#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "peoa/operators.hpp"
#include "peoa/sampling.hpp"

namespace peoa {

inline constexpr double kProbabilityFloor = 0.1;
inline constexpr double kProbabilityCeiling = 0.9;
inline constexpr double kInitialScalingMean = 0.2;
inline constexpr double kScalingCauchyScale = 0.1;
inline constexpr int kScalingMaxRedraws = 100;

/// Linear population size reduction, rounded half away from zero and kept in
/// [S_min, S0].
std::size_t reduce_population_size(std::size_t s0, std::size_t s_min, std::uint64_t evals, std::uint64_t max_evals);

/// sum(max(0, old - new)) / sum(old). Returns 0 for an empty subpopulation
/// and when the denominator is not a positive finite number.
double improvement_rate(std::span<const double> old_values, std::span<const double> new_values);

class ProbabilityVector {
public:
    ProbabilityVector() : p_{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0} {}

    const Probabilities& values() const noexcept { return p_; }
    double operator[](std::size_t i) const { return p_[i]; }

    /// P_i = clamp(R_i / sum(R), 0.1, 0.9). An all-zero R keeps the previous P.
    void update(const std::array<double, kOperatorCount>& rates);

private:
    Probabilities p_;
};

ProbabilityVector update_probabilities(ProbabilityVector previous, const std::array<double, kOperatorCount>& rates);

/// Success-history memory of scaling-factor means (all start at 0.2) with a
/// cyclic write cursor.
class ScalingMemory {
public:
    explicit ScalingMemory(std::size_t size) : means_(size, kInitialScalingMean) {}

    std::size_t size() const noexcept { return means_.size(); }
    std::size_t cursor() const noexcept { return cursor_; }
    double operator[](std::size_t i) const { return means_[i]; }
    std::span<const double> means() const noexcept { return means_; }

    /// Writes mean_WL(successes) at the cursor and advances it. No-op when
    /// `successes` is empty.
    void lehmer_update(std::span<const double> successes, std::span<const double> deltas);

private:
    std::vector<double> means_;
    std::size_t cursor_ = 0;
};

/// Weighted Lehmer mean sum(w F^2) / sum(w F) with w_k = df_k / sum(df). If
/// every delta is zero the weights fall back to uniform.
double weighted_lehmer_mean(std::span<const double> values, std::span<const double> deltas);

struct ScalingDraw {
    double f = 0.0;
    std::size_t memory_index = 0;
};

/// Turns a stream of raw Cauchy draws into F: redraw while <= 0, truncate at 1.
/// After kScalingMaxRedraws failures the slot mean (clamped to (0,1]) is used.
double resolve_scaling_factor(const std::function<double()>& draw, double mu);

ScalingDraw draw_scaling_factor(const ScalingMemory& mem, RandomSource& rng);

}  // namespace peoa
