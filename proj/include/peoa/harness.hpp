#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "peoa/core_types.hpp"

namespace peoa::harness {

struct ExperimentPlan {
    /// Benchmark names; "all" expands to the full registry.
    std::vector<std::string> functions;
    std::vector<std::size_t> dims{2};
    std::size_t runs = 30;
    std::uint64_t base_seed = 0;
    /// 0 means 10000 * D.
    std::uint64_t max_evals = 0;
    double tolerance = kZeroErrorThreshold;
    std::optional<double> territory_fraction;
    /// Empty: no files are written.
    std::filesystem::path output_dir;
    /// 0 means std::thread::hardware_concurrency().
    std::size_t jobs = 0;
    bool write_traces = false;

    /// Run r uses seed base_seed + r.
    std::uint64_t seed_for(std::size_t run) const noexcept { return base_seed + run; }
};

struct RunResult {
    std::string function;  // benchmark id
    std::size_t dim = 0;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    double error = 0.0;  // raw |f_best - f_true|
    double best_value = 0.0;
    std::uint64_t evals = 0;
    std::uint64_t generations = 0;
    Termination terminated_by = Termination::BudgetExhausted;
    std::vector<TracePoint> trace;
    std::vector<GenerationInfo> generation_log;
};

struct StatRow {
    std::string function;
    std::size_t dim = 0;
    std::size_t runs = 0;
    double mean = 0.0;
    double best = 0.0;
    double worst = 0.0;
    double std = 0.0;  // sample standard deviation (n - 1)
    std::size_t successes = 0;
    double mean_evals = 0.0;
};

struct ExperimentResult {
    std::vector<RunResult> runs;  // sorted by (registry order, dim, run)
    std::vector<StatRow> stats;
};

/// Optimizer configuration used for a single benchmark run of the plan.
OptimizerConfig config_for(const ExperimentPlan& plan, std::size_t dim, std::size_t run);

/// Expands "all" and validates names against the registry, keeping registry
/// order and dropping duplicates.
std::vector<std::string> resolve_functions(const std::vector<std::string>& names);

/// Aggregates runs grouped by (function, dim), errors below 1e-8 counted as 0.
std::vector<StatRow> compute_stats(const std::vector<RunResult>& runs);

/// Executes the plan on a worker pool. Writes stats.csv, runs.csv,
/// boxplot.csv and metadata.txt (plus traces.csv on request) when
/// plan.output_dir is set.
ExperimentResult run_experiment(const ExperimentPlan& plan);

struct SweepRow {
    double rho = 0.0;
    std::vector<std::string> functions;
    std::vector<double> mean_errors;  // raw mean error per function
    double average = 0.0;             // mean of mean_errors
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::size_t best_index = 0;  // argmin of average
};

/// For each rho, runs every function of plan.functions (all when empty) at
/// each plan dim and averages raw errors. Writes rho_sweep.csv when
/// plan.output_dir is set.
SweepResult rho_sweep(const std::vector<double>& values, ExperimentPlan plan);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

void write_runs_csv(std::ostream& out, const std::vector<RunResult>& runs);
void write_stats_csv(std::ostream& out, const std::vector<StatRow>& stats);
void write_boxplot_csv(std::ostream& out, const std::vector<RunResult>& runs);
void write_traces_csv(std::ostream& out, const std::vector<RunResult>& runs);

/// Reads back a runs.csv produced by write_runs_csv (traces are not stored).
std::vector<RunResult> read_runs_csv(std::istream& in);

}  // namespace peoa::harness
