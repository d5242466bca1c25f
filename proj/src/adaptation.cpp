#include "peoa/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace peoa {

std::size_t reduce_population_size(std::size_t s0, std::size_t s_min, std::uint64_t evals, std::uint64_t max_evals) {
    if (max_evals == 0 || evals >= max_evals) return s_min;
    const double frac = static_cast<double>(evals) / static_cast<double>(max_evals);
    const double target = static_cast<double>(s0) + (static_cast<double>(s_min) - static_cast<double>(s0)) * frac;
    const auto rounded = static_cast<std::size_t>(std::round(target));
    return std::clamp(rounded, s_min, s0);
}

double improvement_rate(std::span<const double> old_values, std::span<const double> new_values) {
    if (old_values.empty()) return 0.0;
    double gain = 0.0;
    double base = 0.0;
    for (std::size_t z = 0; z < old_values.size(); ++z) {
        gain += std::max(0.0, old_values[z] - new_values[z]);
        base += old_values[z];
    }
    if (!(base > 0.0) || !std::isfinite(base)) return 0.0;
    return gain / base;
}

void ProbabilityVector::update(const std::array<double, kOperatorCount>& rates) {
    const double total = rates[0] + rates[1] + rates[2];
    if (!(total > 0.0)) return;
    for (std::size_t i = 0; i < kOperatorCount; ++i)
        p_[i] = std::max(kProbabilityFloor, std::min(kProbabilityCeiling, rates[i] / total));
}

ProbabilityVector update_probabilities(ProbabilityVector previous, const std::array<double, kOperatorCount>& rates) {
    previous.update(rates);
    return previous;
}

double weighted_lehmer_mean(std::span<const double> values, std::span<const double> deltas) {
    double total = 0.0;
    for (double d : deltas) total += d;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double w = total > 0.0 ? deltas[k] / total : 1.0 / static_cast<double>(values.size());
        num += w * values[k] * values[k];
        den += w * values[k];
    }
    return num / den;
}

void ScalingMemory::lehmer_update(std::span<const double> successes, std::span<const double> deltas) {
    if (successes.empty()) return;
    means_[cursor_] = weighted_lehmer_mean(successes, deltas);
    cursor_ = (cursor_ + 1) % means_.size();
}

double resolve_scaling_factor(const std::function<double()>& draw, double mu) {
    for (int attempt = 0; attempt < kScalingMaxRedraws; ++attempt) {
        const double f = draw();
        if (f > 0.0) return std::min(f, 1.0);
    }
    std::clog << "peoa: scaling factor redraw limit hit, using memory mean " << mu << '\n';
    return mu > 0.0 ? std::min(mu, 1.0) : kInitialScalingMean;
}

ScalingDraw draw_scaling_factor(const ScalingMemory& mem, RandomSource& rng) {
    ScalingDraw out;
    out.memory_index = rng.below(mem.size());
    const double mu = mem[out.memory_index];
    out.f = resolve_scaling_factor([&] { return rng.cauchy(mu, kScalingCauchyScale); }, mu);
    return out;
}

}  // namespace peoa
