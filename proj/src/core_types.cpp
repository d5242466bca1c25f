#include "peoa/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace peoa {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::UnknownFunction: return "UnknownFunction";
        case ErrorCode::BudgetExhausted: return "BudgetExhausted";
        case ErrorCode::NonFiniteObjective: return "NonFiniteObjective";
        case ErrorCode::InsufficientPopulation: return "InsufficientPopulation";
        case ErrorCode::TranscriptionMismatch: return "TranscriptionMismatch";
        case ErrorCode::ProtocolError: return "ProtocolError";
        case ErrorCode::Timeout: return "Timeout";
        case ErrorCode::ChildExit: return "ChildExit";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

const char* to_string(Termination t) {
    return t == Termination::ToleranceReached ? "ToleranceReached" : "BudgetExhausted";
}

SearchSpace::SearchSpace(Vector lower_bounds, Vector upper_bounds)
    : lower(std::move(lower_bounds)), upper(std::move(upper_bounds)) {
    if (lower.empty() || lower.size() != upper.size())
        throw Error(ErrorCode::ConfigError, "search space bounds must be non-empty and of equal length");
    for (std::size_t j = 0; j < lower.size(); ++j) {
        if (!(lower[j] < upper[j]) || !std::isfinite(lower[j]) || !std::isfinite(upper[j])) {
            std::ostringstream msg;
            msg << "invalid bounds in dimension " << j << ": [" << lower[j] << ", " << upper[j] << "]";
            throw Error(ErrorCode::ConfigError, msg.str());
        }
    }
}

SearchSpace SearchSpace::uniform(std::size_t dim, double lo, double hi) {
    return SearchSpace(Vector(dim, lo), Vector(dim, hi));
}

bool SearchSpace::contains(std::span<const double> x) const noexcept {
    if (x.size() != dimension()) return false;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] < lower[j] || x[j] > upper[j]) return false;
    return true;
}

double SearchSpace::min_width() const noexcept {
    double w = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < lower.size(); ++j) w = std::min(w, upper[j] - lower[j]);
    return w;
}

OptimizerConfig OptimizerConfig::defaults_for(std::size_t dim) {
    OptimizerConfig cfg;
    cfg.initial_pop_size = 20 * dim * dim;
    cfg.local_budget = 10 * dim * dim;
    cfg.memory_size = 20 * dim;
    cfg.max_evals = 10000 * static_cast<std::uint64_t>(dim);
    return cfg;
}

void OptimizerConfig::validate() const {
    auto fail = [](const std::string& m) { throw Error(ErrorCode::ConfigError, m); };
    if (min_pop_size < 5) fail("min_pop_size must be at least 5");
    if (initial_pop_size < min_pop_size) fail("initial_pop_size must be >= min_pop_size");
    if (local_budget < 1) fail("local_budget must be positive");
    if (!(territory_fraction > 0.0 && territory_fraction < 1.0)) fail("territory_fraction must lie in (0,1)");
    if (!(archive_rate > 0.0) || !std::isfinite(archive_rate)) fail("archive_rate must be positive");
    if (memory_size < 1) fail("memory_size must be positive");
    if (!(levy_beta > 1.0 && levy_beta <= 2.0)) fail("levy_beta must lie in (1,2]");
    if (max_evals < 1) fail("max_evals must be positive");
    if (!(target_tolerance >= 0.0)) fail("target_tolerance must be non-negative");
}

std::size_t OptimizerConfig::archive_capacity() const noexcept {
    return static_cast<std::size_t>(std::floor(archive_rate * static_cast<double>(initial_pop_size)));
}

void EvalCounter::consume() {
    if (exhausted()) throw Error(ErrorCode::BudgetExhausted, "evaluation budget exhausted");
    ++used_;
}

double evaluate(const Objective& obj, std::span<const double> position, EvalCounter& counter) {
    counter.consume();
    const double v = obj(position);
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "objective returned a non-finite value (" << v << ") at evaluation " << counter.used();
        throw Error(ErrorCode::NonFiniteObjective, msg.str());
    }
    return v;
}

Eagle& evaluate(const Objective& obj, Eagle& eagle, EvalCounter& counter) {
    eagle.value = evaluate(obj, std::span<const double>(eagle.position), counter);
    return eagle;
}

double function_error(double value, double f_true) { return std::fabs(value - f_true); }

double reported_error(double value, double f_true) {
    const double e = function_error(value, f_true);
    return e < kZeroErrorThreshold ? 0.0 : e;
}

}  // namespace peoa
