#pragma once

#include <cstdint>
#include <optional>

#include "peoa/adaptation.hpp"
#include "peoa/core_types.hpp"
#include "peoa/local_search.hpp"
#include "peoa/operators.hpp"
#include "peoa/sampling.hpp"

namespace peoa {

struct Incumbent {
    Vector position;
    double value = 0.0;
};

struct OptimizerState {
    Population population;
    Archive archive;
    ProbabilityVector prob;
    ScalingMemory scaling_mem;
    EvalCounter counter;
    std::uint64_t generation = 0;
    Incumbent incumbent;
    std::optional<LocalResult> prev_local;
    std::optional<Eagle> prev_best;

    OptimizerState(const OptimizerConfig& cfg)
        : archive(cfg.archive_capacity()), scaling_mem(cfg.memory_size), counter(cfg.max_evals) {}
};

/// True once the budget is spent or, with a known optimum, the incumbent error
/// is strictly below the tolerance.
bool terminate_check(const OptimizerState& state, const OptimizerConfig& cfg, std::optional<double> f_true);

/// Thrown when a run stops on an error. Carries the record up to the failure
/// (evaluations used, best found so far).
class RunFailure : public Error {
public:
    RunFailure(const Error& cause, RunRecord partial)
        : Error(cause.code(), cause.what()), partial_(std::move(partial)) {}
    const RunRecord& partial() const noexcept { return partial_; }

private:
    RunRecord partial_;
};

struct RunHooks {
    /// Invoked after each generation's selection and local phase.
    std::function<void(const OptimizerState&)> after_generation;
    const LocalMinimizer* local_method = nullptr;
};

/// One full PEOA run. Deterministic in (objective, space, cfg). Throws
/// ConfigError for an invalid configuration and RunFailure for objective
/// errors raised mid-run.
RunRecord run(const Objective& obj, const SearchSpace& space, const OptimizerConfig& cfg, const RunHooks& hooks = {});

}  // namespace peoa
