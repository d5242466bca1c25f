#include "peoa/peoa.h"

#include <cstring>
#include <memory>
#include <string>

#include "peoa/benchmarks.hpp"
#include "peoa/external_objective.hpp"
#include "peoa/harness.hpp"
#include "peoa/optimizer.hpp"

struct peoa_config {
    peoa::OptimizerConfig cfg;
};

struct peoa_objective {
    peoa::Objective obj;
    peoa::SearchSpace space;
    std::string benchmark;  // non-empty for registry functions
};

struct peoa_result {
    peoa::RunRecord record;
};

struct peoa_plan {
    peoa::harness::ExperimentPlan plan;
};

struct peoa_stats {
    std::vector<peoa::harness::StatRow> rows;
};

struct peoa_sweep {
    peoa::harness::SweepResult result;
};

namespace {

thread_local std::string g_last_error;

int status_of(peoa::ErrorCode code) {
    using peoa::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return PEOA_ERROR_INVALID_ARGUMENT;
        case ErrorCode::ConfigError: return PEOA_ERROR_CONFIG;
        case ErrorCode::DomainError: return PEOA_ERROR_DOMAIN;
        case ErrorCode::UnknownFunction: return PEOA_ERROR_UNKNOWN_FUNCTION;
        case ErrorCode::BudgetExhausted: return PEOA_ERROR_BUDGET_EXHAUSTED;
        case ErrorCode::NonFiniteObjective: return PEOA_ERROR_NON_FINITE_OBJECTIVE;
        case ErrorCode::InsufficientPopulation: return PEOA_ERROR_INSUFFICIENT_POPULATION;
        case ErrorCode::TranscriptionMismatch: return PEOA_ERROR_TRANSCRIPTION_MISMATCH;
        case ErrorCode::ProtocolError: return PEOA_ERROR_PROTOCOL;
        case ErrorCode::Timeout: return PEOA_ERROR_TIMEOUT;
        case ErrorCode::ChildExit: return PEOA_ERROR_CHILD_EXIT;
        case ErrorCode::IoError: return PEOA_ERROR_IO;
    }
    return PEOA_ERROR_UNKNOWN;
}

int fail(int status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

template <typename F>
int guarded(F&& body) {
    try {
        body();
        return PEOA_OK;
    } catch (const peoa::Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(PEOA_ERROR_UNKNOWN, "out of memory");
    } catch (const std::exception& e) {
        return fail(PEOA_ERROR_UNKNOWN, e.what());
    } catch (...) {
        return fail(PEOA_ERROR_UNKNOWN, "unknown exception");
    }
}

#define PEOA_REQUIRE(cond, msg) \
    if (!(cond)) return fail(PEOA_ERROR_INVALID_ARGUMENT, msg)

std::uint64_t* int_field(peoa::OptimizerConfig& c, const char* key) {
    if (!std::strcmp(key, "max_evals")) return &c.max_evals;
    if (!std::strcmp(key, "seed")) return &c.seed;
    return nullptr;
}

std::size_t* size_field(peoa::OptimizerConfig& c, const char* key) {
    if (!std::strcmp(key, "initial_pop_size")) return &c.initial_pop_size;
    if (!std::strcmp(key, "min_pop_size")) return &c.min_pop_size;
    if (!std::strcmp(key, "local_budget")) return &c.local_budget;
    if (!std::strcmp(key, "memory_size")) return &c.memory_size;
    return nullptr;
}

double* real_field(peoa::OptimizerConfig& c, const char* key) {
    if (!std::strcmp(key, "territory_fraction")) return &c.territory_fraction;
    if (!std::strcmp(key, "archive_rate")) return &c.archive_rate;
    if (!std::strcmp(key, "levy_beta")) return &c.levy_beta;
    if (!std::strcmp(key, "tolerance")) return &c.target_tolerance;
    return nullptr;
}

peoa::SearchSpace make_space(size_t dim, const double* lower, const double* upper) {
    return peoa::SearchSpace(peoa::Vector(lower, lower + dim), peoa::Vector(upper, upper + dim));
}

}  // namespace

extern "C" {

const char* peoa_version(void) { return "1.0.0"; }

const char* peoa_status_string(int status) {
    switch (status) {
        case PEOA_OK: return "ok";
        case PEOA_ERROR_INVALID_ARGUMENT: return "invalid argument";
        case PEOA_ERROR_CONFIG: return "configuration error";
        case PEOA_ERROR_DOMAIN: return "domain error";
        case PEOA_ERROR_UNKNOWN_FUNCTION: return "unknown function";
        case PEOA_ERROR_BUDGET_EXHAUSTED: return "evaluation budget exhausted";
        case PEOA_ERROR_NON_FINITE_OBJECTIVE: return "non-finite objective value";
        case PEOA_ERROR_INSUFFICIENT_POPULATION: return "insufficient population";
        case PEOA_ERROR_TRANSCRIPTION_MISMATCH: return "benchmark transcription mismatch";
        case PEOA_ERROR_PROTOCOL: return "external objective protocol error";
        case PEOA_ERROR_TIMEOUT: return "external objective timeout";
        case PEOA_ERROR_CHILD_EXIT: return "external objective exited";
        case PEOA_ERROR_IO: return "I/O error";
        default: return "unknown error";
    }
}

const char* peoa_last_error(void) { return g_last_error.c_str(); }

int peoa_config_create(size_t dim, peoa_config** out) {
    PEOA_REQUIRE(out, "out is NULL");
    PEOA_REQUIRE(dim > 0, "dimension must be positive");
    return guarded([&] { *out = new peoa_config{peoa::OptimizerConfig::defaults_for(dim)}; });
}

void peoa_config_destroy(peoa_config* cfg) { delete cfg; }

int peoa_config_set_int(peoa_config* cfg, const char* key, uint64_t value) {
    PEOA_REQUIRE(cfg && key, "NULL argument");
    if (auto* f = int_field(cfg->cfg, key)) {
        *f = value;
        return PEOA_OK;
    }
    if (auto* f = size_field(cfg->cfg, key)) {
        *f = static_cast<std::size_t>(value);
        return PEOA_OK;
    }
    return fail(PEOA_ERROR_INVALID_ARGUMENT, std::string("unknown integer key '") + key + "'");
}

int peoa_config_set_real(peoa_config* cfg, const char* key, double value) {
    PEOA_REQUIRE(cfg && key, "NULL argument");
    if (auto* f = real_field(cfg->cfg, key)) {
        *f = value;
        return PEOA_OK;
    }
    return fail(PEOA_ERROR_INVALID_ARGUMENT, std::string("unknown real key '") + key + "'");
}

int peoa_config_get_int(const peoa_config* cfg, const char* key, uint64_t* out) {
    PEOA_REQUIRE(cfg && key && out, "NULL argument");
    auto& c = const_cast<peoa_config*>(cfg)->cfg;
    if (auto* f = int_field(c, key)) {
        *out = *f;
        return PEOA_OK;
    }
    if (auto* f = size_field(c, key)) {
        *out = *f;
        return PEOA_OK;
    }
    return fail(PEOA_ERROR_INVALID_ARGUMENT, std::string("unknown integer key '") + key + "'");
}

int peoa_config_get_real(const peoa_config* cfg, const char* key, double* out) {
    PEOA_REQUIRE(cfg && key && out, "NULL argument");
    if (auto* f = real_field(const_cast<peoa_config*>(cfg)->cfg, key)) {
        *out = *f;
        return PEOA_OK;
    }
    return fail(PEOA_ERROR_INVALID_ARGUMENT, std::string("unknown real key '") + key + "'");
}

int peoa_config_validate(const peoa_config* cfg) {
    PEOA_REQUIRE(cfg, "cfg is NULL");
    return guarded([&] { cfg->cfg.validate(); });
}

int peoa_objective_create_callback(peoa_objective_fn fn, void* user_data, size_t dim, const double* lower,
                                   const double* upper, peoa_objective** out) {
    PEOA_REQUIRE(fn && lower && upper && out, "NULL argument");
    PEOA_REQUIRE(dim > 0, "dimension must be positive");
    return guarded([&] {
        auto h = std::make_unique<peoa_objective>();
        h->space = make_space(dim, lower, upper);
        h->obj.function = [fn, user_data](std::span<const double> x) {
            double v = 0.0;
            if (fn(x.data(), x.size(), &v, user_data) != 0)
                throw peoa::Error(peoa::ErrorCode::InvalidArgument, "objective callback reported failure");
            return v;
        };
        *out = h.release();
    });
}

int peoa_objective_create_benchmark(const char* name, size_t dim, peoa_objective** out) {
    PEOA_REQUIRE(name && out, "NULL argument");
    PEOA_REQUIRE(dim > 0, "dimension must be positive");
    return guarded([&] {
        auto h = std::make_unique<peoa_objective>();
        auto [obj, space] = peoa::benchmarks::make(name, dim);
        h->obj = std::move(obj);
        h->space = std::move(space);
        h->benchmark = std::string(peoa::benchmarks::find(name).id);
        *out = h.release();
    });
}

int peoa_objective_create_external(const char* command, size_t dim, const double* lower, const double* upper,
                                   double timeout_seconds, peoa_objective** out) {
    PEOA_REQUIRE(command && lower && upper && out, "NULL argument");
    PEOA_REQUIRE(dim > 0, "dimension must be positive");
    return guarded([&] {
        auto h = std::make_unique<peoa_objective>();
        h->space = make_space(dim, lower, upper);
        const auto timeout = timeout_seconds > 0.0
                                 ? std::chrono::milliseconds(static_cast<long long>(timeout_seconds * 1000.0))
                                 : std::chrono::milliseconds(std::chrono::seconds(30));
        h->obj = peoa::external_objective(command, timeout);
        *out = h.release();
    });
}

void peoa_objective_destroy(peoa_objective* obj) { delete obj; }

int peoa_objective_set_optimum(peoa_objective* obj, double f_true) {
    PEOA_REQUIRE(obj, "obj is NULL");
    obj->obj.known_optimum = f_true;
    return PEOA_OK;
}

int peoa_objective_clear_optimum(peoa_objective* obj) {
    PEOA_REQUIRE(obj, "obj is NULL");
    obj->obj.known_optimum.reset();
    return PEOA_OK;
}

size_t peoa_objective_dim(const peoa_objective* obj) { return obj ? obj->space.dimension() : 0; }

int peoa_objective_bounds(const peoa_objective* obj, double* lower, double* upper) {
    PEOA_REQUIRE(obj && lower && upper, "NULL argument");
    std::copy(obj->space.lower.begin(), obj->space.lower.end(), lower);
    std::copy(obj->space.upper.begin(), obj->space.upper.end(), upper);
    return PEOA_OK;
}

int peoa_objective_evaluate(peoa_objective* obj, const double* x, size_t dim, double* out) {
    PEOA_REQUIRE(obj && x && out, "NULL argument");
    PEOA_REQUIRE(dim == obj->space.dimension(), "dimension mismatch");
    return guarded([&] { *out = obj->obj(std::span<const double>(x, dim)); });
}

int peoa_run(peoa_objective* obj, const peoa_config* cfg, peoa_result** out) {
    PEOA_REQUIRE(obj && cfg && out, "NULL argument");
    *out = nullptr;
    try {
        peoa::Objective objective = obj->obj;
        // Stochastic registry functions get a stream tied to the run seed.
        if (!obj->benchmark.empty() && objective.stochastic) {
            auto fresh = peoa::benchmarks::make(obj->benchmark, obj->space.dimension(), cfg->cfg.seed).first;
            fresh.known_optimum = objective.known_optimum;
            objective = std::move(fresh);
        }
        *out = new peoa_result{peoa::run(objective, obj->space, cfg->cfg)};
        return PEOA_OK;
    } catch (const peoa::RunFailure& e) {
        *out = new peoa_result{e.partial()};
        return fail(status_of(e.code()), e.what());
    } catch (const peoa::Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::exception& e) {
        return fail(PEOA_ERROR_UNKNOWN, e.what());
    } catch (...) {
        return fail(PEOA_ERROR_UNKNOWN, "unknown exception");
    }
}

void peoa_result_destroy(peoa_result* res) { delete res; }

double peoa_result_best_value(const peoa_result* res) { return res ? res->record.best_value : 0.0; }

size_t peoa_result_dim(const peoa_result* res) { return res ? res->record.best_position.size() : 0; }

size_t peoa_result_best_position(const peoa_result* res, double* buffer, size_t capacity) {
    if (!res) return 0;
    const auto& p = res->record.best_position;
    if (buffer) std::copy_n(p.begin(), std::min(capacity, p.size()), buffer);
    return p.size();
}

uint64_t peoa_result_evals_used(const peoa_result* res) { return res ? res->record.evals_used : 0; }

uint64_t peoa_result_generations(const peoa_result* res) { return res ? res->record.generations : 0; }

peoa_termination peoa_result_terminated_by(const peoa_result* res) {
    return res && res->record.terminated_by == peoa::Termination::ToleranceReached
               ? PEOA_TERMINATED_TOLERANCE_REACHED
               : PEOA_TERMINATED_BUDGET_EXHAUSTED;
}

size_t peoa_result_trace_length(const peoa_result* res) { return res ? res->record.trace.size() : 0; }

int peoa_result_trace_point(const peoa_result* res, size_t index, uint64_t* evals, double* best) {
    PEOA_REQUIRE(res, "res is NULL");
    PEOA_REQUIRE(index < res->record.trace.size(), "trace index out of range");
    const auto& p = res->record.trace[index];
    if (evals) *evals = p.evals;
    if (best) *best = p.best;
    return PEOA_OK;
}

size_t peoa_result_generation_count(const peoa_result* res) { return res ? res->record.generation_log.size() : 0; }

int peoa_result_generation(const peoa_result* res, size_t index, uint64_t* evals_at_start, size_t* pop_size,
                           double* best) {
    PEOA_REQUIRE(res, "res is NULL");
    PEOA_REQUIRE(index < res->record.generation_log.size(), "generation index out of range");
    const auto& g = res->record.generation_log[index];
    if (evals_at_start) *evals_at_start = g.evals_at_start;
    if (pop_size) *pop_size = g.pop_size;
    if (best) *best = g.best;
    return PEOA_OK;
}

size_t peoa_benchmark_count(void) { return peoa::benchmarks::registry().size(); }

int peoa_benchmark_info(size_t index, const char** id, const char** name, const char** family, double* lower,
                        double* upper, double* f_true, int* stochastic) {
    const auto reg = peoa::benchmarks::registry();
    PEOA_REQUIRE(index < reg.size(), "benchmark index out of range");
    const auto& s = reg[index];
    // The string_views point at string literals, so data() is NUL-terminated.
    if (id) *id = s.id.data();
    if (name) *name = s.name.data();
    if (family) *family = peoa::benchmarks::to_string(s.family);
    if (lower) *lower = s.lower;
    if (upper) *upper = s.upper;
    if (f_true) *f_true = s.f_true;
    if (stochastic) *stochastic = s.stochastic ? 1 : 0;
    return PEOA_OK;
}

int peoa_benchmark_verify(const char* name, size_t dim) {
    PEOA_REQUIRE(name, "name is NULL");
    PEOA_REQUIRE(dim > 0, "dimension must be positive");
    return guarded([&] { peoa::benchmarks::verify_optimum(peoa::benchmarks::find(name), dim); });
}

int peoa_plan_create(peoa_plan** out) {
    PEOA_REQUIRE(out, "out is NULL");
    return guarded([&] {
        *out = new peoa_plan{};
        (*out)->plan.dims.clear();
    });
}

void peoa_plan_destroy(peoa_plan* plan) { delete plan; }

int peoa_plan_add_function(peoa_plan* plan, const char* name) {
    PEOA_REQUIRE(plan && name, "NULL argument");
    return guarded([&] {
        if (std::strcmp(name, "all") != 0) peoa::benchmarks::find(name);
        plan->plan.functions.emplace_back(name);
    });
}

int peoa_plan_clear_functions(peoa_plan* plan) {
    PEOA_REQUIRE(plan, "plan is NULL");
    plan->plan.functions.clear();
    return PEOA_OK;
}

int peoa_plan_add_dim(peoa_plan* plan, size_t dim) {
    PEOA_REQUIRE(plan, "plan is NULL");
    PEOA_REQUIRE(dim > 0, "dimension must be positive");
    return guarded([&] { plan->plan.dims.push_back(dim); });
}

int peoa_plan_clear_dims(peoa_plan* plan) {
    PEOA_REQUIRE(plan, "plan is NULL");
    plan->plan.dims.clear();
    return PEOA_OK;
}

int peoa_plan_set_runs(peoa_plan* plan, size_t runs) {
    PEOA_REQUIRE(plan, "plan is NULL");
    plan->plan.runs = runs;
    return PEOA_OK;
}

int peoa_plan_set_seed(peoa_plan* plan, uint64_t base_seed) {
    PEOA_REQUIRE(plan, "plan is NULL");
    plan->plan.base_seed = base_seed;
    return PEOA_OK;
}

int peoa_plan_set_max_evals(peoa_plan* plan, uint64_t max_evals) {
    PEOA_REQUIRE(plan, "plan is NULL");
    plan->plan.max_evals = max_evals;
    return PEOA_OK;
}

int peoa_plan_set_tolerance(peoa_plan* plan, double tolerance) {
    PEOA_REQUIRE(plan, "plan is NULL");
    PEOA_REQUIRE(tolerance >= 0.0, "tolerance must be non-negative");
    plan->plan.tolerance = tolerance;
    return PEOA_OK;
}

int peoa_plan_set_territory_fraction(peoa_plan* plan, double rho) {
    PEOA_REQUIRE(plan, "plan is NULL");
    PEOA_REQUIRE(rho > 0.0 && rho < 1.0, "rho must lie in (0,1)");
    plan->plan.territory_fraction = rho;
    return PEOA_OK;
}

int peoa_plan_set_output_dir(peoa_plan* plan, const char* dir) {
    PEOA_REQUIRE(plan, "plan is NULL");
    return guarded([&] { plan->plan.output_dir = dir ? dir : ""; });
}

int peoa_plan_set_jobs(peoa_plan* plan, size_t jobs) {
    PEOA_REQUIRE(plan, "plan is NULL");
    plan->plan.jobs = jobs;
    return PEOA_OK;
}

int peoa_plan_set_write_traces(peoa_plan* plan, int enabled) {
    PEOA_REQUIRE(plan, "plan is NULL");
    plan->plan.write_traces = enabled != 0;
    return PEOA_OK;
}

int peoa_experiment_run(const peoa_plan* plan, peoa_stats** out) {
    PEOA_REQUIRE(plan && out, "NULL argument");
    *out = nullptr;
    return guarded([&] { *out = new peoa_stats{peoa::harness::run_experiment(plan->plan).stats}; });
}

void peoa_stats_destroy(peoa_stats* stats) { delete stats; }

size_t peoa_stats_count(const peoa_stats* stats) { return stats ? stats->rows.size() : 0; }

int peoa_stats_row(const peoa_stats* stats, size_t index, peoa_stat_row* out) {
    PEOA_REQUIRE(stats && out, "NULL argument");
    PEOA_REQUIRE(index < stats->rows.size(), "row index out of range");
    const auto& r = stats->rows[index];
    *out = peoa_stat_row{r.function.c_str(), r.dim,  r.runs,      r.mean,      r.best,
                         r.worst,            r.std,  r.successes, r.mean_evals};
    return PEOA_OK;
}

int peoa_rho_sweep(const peoa_plan* plan, const double* values, size_t count, peoa_sweep** out) {
    PEOA_REQUIRE(plan && out, "NULL argument");
    PEOA_REQUIRE(values || count == 0, "values is NULL");
    *out = nullptr;
    return guarded([&] {
        *out = new peoa_sweep{peoa::harness::rho_sweep(std::vector<double>(values, values + count), plan->plan)};
    });
}

void peoa_sweep_destroy(peoa_sweep* sweep) { delete sweep; }

size_t peoa_sweep_count(const peoa_sweep* sweep) { return sweep ? sweep->result.rows.size() : 0; }

int peoa_sweep_row(const peoa_sweep* sweep, size_t index, double* rho, double* average) {
    PEOA_REQUIRE(sweep, "sweep is NULL");
    PEOA_REQUIRE(index < sweep->result.rows.size(), "row index out of range");
    if (rho) *rho = sweep->result.rows[index].rho;
    if (average) *average = sweep->result.rows[index].average;
    return PEOA_OK;
}

size_t peoa_sweep_best_index(const peoa_sweep* sweep) { return sweep ? sweep->result.best_index : 0; }

size_t peoa_sweep_function_count(const peoa_sweep* sweep, size_t row) {
    if (!sweep || row >= sweep->result.rows.size()) return 0;
    return sweep->result.rows[row].functions.size();
}

int peoa_sweep_function(const peoa_sweep* sweep, size_t row, size_t index, const char** function,
                        double* mean_error) {
    PEOA_REQUIRE(sweep, "sweep is NULL");
    PEOA_REQUIRE(row < sweep->result.rows.size(), "row index out of range");
    const auto& r = sweep->result.rows[row];
    PEOA_REQUIRE(index < r.functions.size(), "function index out of range");
    if (function) *function = r.functions[index].c_str();
    if (mean_error) *mean_error = r.mean_errors[index];
    return PEOA_OK;
}

}  // extern "C"
