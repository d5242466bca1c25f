#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace peoa {

using Vector = std::vector<double>;

enum class ErrorCode {
    InvalidArgument,
    ConfigError,
    DomainError,
    UnknownFunction,
    BudgetExhausted,
    NonFiniteObjective,
    InsufficientPopulation,
    TranscriptionMismatch,
    ProtocolError,
    Timeout,
    ChildExit,
    IoError,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this type; the code survives the
// trip through the C API.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct SearchSpace {
    Vector lower;
    Vector upper;

    SearchSpace() = default;
    // Throws ConfigError unless lower[j] < upper[j] for every j.
    SearchSpace(Vector lower_bounds, Vector upper_bounds);
    static SearchSpace uniform(std::size_t dim, double lo, double hi);

    std::size_t dimension() const noexcept { return lower.size(); }
    bool contains(std::span<const double> x) const noexcept;
    double min_width() const noexcept;
};

struct Eagle {
    Vector position;
    std::optional<double> value;

    bool evaluated() const noexcept { return value.has_value(); }
    double fitness() const { return value.value(); }
};

// Black-box objective. `function` must be callable with a vector of the
// space's dimension. Stochastic objectives (Xin-She Yang 1) own their random
// state and must not be shared between concurrent runs.
struct Objective {
    std::function<double(std::span<const double>)> function;
    std::optional<double> known_optimum;
    std::optional<Vector> known_solution;
    bool stochastic = false;

    double operator()(std::span<const double> x) const { return function(x); }
};

struct OptimizerConfig {
    std::size_t initial_pop_size = 0;  // S0
    std::size_t min_pop_size = 5;      // S_min
    std::size_t local_budget = 0;      // S_loc
    double territory_fraction = 0.04;  // rho
    double archive_rate = 2.6;         // A
    std::size_t memory_size = 0;       // H
    double levy_beta = 1.5;
    std::uint64_t max_evals = 0;       // N_max
    double target_tolerance = 1e-8;
    std::uint64_t seed = 0;

    // S0 = 20 D^2, S_loc = 10 D^2, H = 20 D, N_max = 10000 D.
    static OptimizerConfig defaults_for(std::size_t dim);

    // Throws ConfigError describing the first violated constraint.
    void validate() const;
    std::size_t archive_capacity() const noexcept;
};

enum class Termination { ToleranceReached, BudgetExhausted };

const char* to_string(Termination t);

struct TracePoint {
    std::uint64_t evals = 0;
    double best = 0.0;
};

struct GenerationInfo {
    std::uint64_t generation = 0;
    std::uint64_t evals_at_start = 0;
    std::size_t pop_size = 0;
    double best = 0.0;
};

struct RunRecord {
    double best_value = 0.0;
    Vector best_position;
    std::uint64_t evals_used = 0;
    std::uint64_t generations = 0;
    // One point per strict improvement of the best-so-far value.
    std::vector<TracePoint> trace;
    std::vector<GenerationInfo> generation_log;
    Termination terminated_by = Termination::BudgetExhausted;
};

class EvalCounter {
public:
    explicit EvalCounter(std::uint64_t max_evals) : max_(max_evals) {}

    std::uint64_t used() const noexcept { return used_; }
    std::uint64_t max() const noexcept { return max_; }
    std::uint64_t remaining() const noexcept { return max_ - used_; }
    bool exhausted() const noexcept { return used_ >= max_; }

    // Throws BudgetExhausted when no evaluation is left.
    void consume();

private:
    std::uint64_t used_ = 0;
    std::uint64_t max_;
};

// The single entry point for objective evaluation. Increments the counter by
// exactly one and rejects non-finite values.
double evaluate(const Objective& obj, std::span<const double> position, EvalCounter& counter);
Eagle& evaluate(const Objective& obj, Eagle& eagle, EvalCounter& counter);

// Errors below this threshold count as exact under the reporting protocol.
inline constexpr double kZeroErrorThreshold = 1e-8;

double function_error(double value, double f_true);
double reported_error(double value, double f_true);

}  // namespace peoa
