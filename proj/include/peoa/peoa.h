#ifndef PEOA_H
#define PEOA_H

#include <stddef.h>
#include <stdint.h>

#if defined(PEOA_BUILDING_LIBRARY)
#define PEOA_API __attribute__((visibility("default")))
#else
#define PEOA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/*
 * C interface to the Philippine Eagle Optimization Algorithm library.
 *
 * Every function that can fail returns a peoa_status. On failure a
 * human-readable message for the calling thread is available from
 * peoa_last_error() until the next failing call on that thread.
 * Handles are opaque; each *_create has a matching *_destroy that accepts NULL.
 */

typedef enum {
    PEOA_OK = 0,
    PEOA_ERROR_INVALID_ARGUMENT = -1,
    PEOA_ERROR_CONFIG = -2,
    PEOA_ERROR_DOMAIN = -3,
    PEOA_ERROR_UNKNOWN_FUNCTION = -4,
    PEOA_ERROR_BUDGET_EXHAUSTED = -5,
    PEOA_ERROR_NON_FINITE_OBJECTIVE = -6,
    PEOA_ERROR_INSUFFICIENT_POPULATION = -7,
    PEOA_ERROR_TRANSCRIPTION_MISMATCH = -8,
    PEOA_ERROR_PROTOCOL = -9,
    PEOA_ERROR_TIMEOUT = -10,
    PEOA_ERROR_CHILD_EXIT = -11,
    PEOA_ERROR_IO = -12,
    PEOA_ERROR_UNKNOWN = -99
} peoa_status;

typedef enum {
    PEOA_TERMINATED_TOLERANCE_REACHED = 0,
    PEOA_TERMINATED_BUDGET_EXHAUSTED = 1
} peoa_termination;

typedef struct peoa_config peoa_config;
typedef struct peoa_objective peoa_objective;
typedef struct peoa_result peoa_result;
typedef struct peoa_plan peoa_plan;
typedef struct peoa_stats peoa_stats;
typedef struct peoa_sweep peoa_sweep;

PEOA_API const char* peoa_version(void);
PEOA_API const char* peoa_status_string(int status);
PEOA_API const char* peoa_last_error(void);

/* ---- configuration ------------------------------------------------------ */

/* Defaults for dimension `dim`: S0 = 20 D^2, S_loc = 10 D^2, S_min = 5,
 * rho = 0.04, A = 2.6, H = 20 D, beta = 1.5, N_max = 10000 D, tol = 1e-8. */
PEOA_API int peoa_config_create(size_t dim, peoa_config** out);
PEOA_API void peoa_config_destroy(peoa_config* cfg);

/* Integer keys: initial_pop_size, min_pop_size, local_budget, memory_size,
 * max_evals, seed. Real keys: territory_fraction, archive_rate, levy_beta,
 * tolerance. Unknown keys give PEOA_ERROR_INVALID_ARGUMENT. Values are
 * checked together when a run starts. */
PEOA_API int peoa_config_set_int(peoa_config* cfg, const char* key, uint64_t value);
PEOA_API int peoa_config_set_real(peoa_config* cfg, const char* key, double value);
PEOA_API int peoa_config_get_int(const peoa_config* cfg, const char* key, uint64_t* out);
PEOA_API int peoa_config_get_real(const peoa_config* cfg, const char* key, double* out);
PEOA_API int peoa_config_validate(const peoa_config* cfg);

/* ---- objectives --------------------------------------------------------- */

/* User callback: write f(x) to *out and return 0, or return nonzero to abort
 * the run with PEOA_ERROR_INVALID_ARGUMENT. */
typedef int (*peoa_objective_fn)(const double* x, size_t dim, double* out, void* user_data);

PEOA_API int peoa_objective_create_callback(peoa_objective_fn fn, void* user_data, size_t dim, const double* lower,
                                            const double* upper, peoa_objective** out);
/* One of the 20 built-in test functions, with its box and known optimum. */
PEOA_API int peoa_objective_create_benchmark(const char* name, size_t dim, peoa_objective** out);
/* Child process speaking the line protocol (see README). timeout_seconds <= 0
 * selects the default of 30 s per evaluation. */
PEOA_API int peoa_objective_create_external(const char* command, size_t dim, const double* lower,
                                            const double* upper, double timeout_seconds, peoa_objective** out);
PEOA_API void peoa_objective_destroy(peoa_objective* obj);

PEOA_API int peoa_objective_set_optimum(peoa_objective* obj, double f_true);
PEOA_API int peoa_objective_clear_optimum(peoa_objective* obj);
PEOA_API size_t peoa_objective_dim(const peoa_objective* obj);
PEOA_API int peoa_objective_bounds(const peoa_objective* obj, double* lower, double* upper);
/* Direct evaluation, not counted against any budget. */
PEOA_API int peoa_objective_evaluate(peoa_objective* obj, const double* x, size_t dim, double* out);

/* ---- optimization ------------------------------------------------------- */

/* Runs PEOA. On success *out receives a result. If the objective fails
 * mid-run (e.g. an external child exits) the error status is returned and
 * *out still receives the partial result. */
PEOA_API int peoa_run(peoa_objective* obj, const peoa_config* cfg, peoa_result** out);
PEOA_API void peoa_result_destroy(peoa_result* res);

PEOA_API double peoa_result_best_value(const peoa_result* res);
PEOA_API size_t peoa_result_dim(const peoa_result* res);
/* Copies min(dim, capacity) coordinates; returns the full dimension. */
PEOA_API size_t peoa_result_best_position(const peoa_result* res, double* buffer, size_t capacity);
PEOA_API uint64_t peoa_result_evals_used(const peoa_result* res);
PEOA_API uint64_t peoa_result_generations(const peoa_result* res);
PEOA_API peoa_termination peoa_result_terminated_by(const peoa_result* res);
PEOA_API size_t peoa_result_trace_length(const peoa_result* res);
PEOA_API int peoa_result_trace_point(const peoa_result* res, size_t index, uint64_t* evals, double* best);
PEOA_API size_t peoa_result_generation_count(const peoa_result* res);
PEOA_API int peoa_result_generation(const peoa_result* res, size_t index, uint64_t* evals_at_start,
                                    size_t* pop_size, double* best);

/* ---- benchmark registry ------------------------------------------------- */

PEOA_API size_t peoa_benchmark_count(void);
/* Fields of registry entry `index`; any output pointer may be NULL. Strings
 * are static. */
PEOA_API int peoa_benchmark_info(size_t index, const char** id, const char** name, const char** family,
                                 double* lower, double* upper, double* f_true, int* stochastic);
/* Transcription check at the given dimension; failure reports
 * PEOA_ERROR_TRANSCRIPTION_MISMATCH naming the function. */
PEOA_API int peoa_benchmark_verify(const char* name, size_t dim);

/* ---- experiments -------------------------------------------------------- */

PEOA_API int peoa_plan_create(peoa_plan** out);
PEOA_API void peoa_plan_destroy(peoa_plan* plan);
/* "all" adds the whole registry. */
PEOA_API int peoa_plan_add_function(peoa_plan* plan, const char* name);
PEOA_API int peoa_plan_clear_functions(peoa_plan* plan);
PEOA_API int peoa_plan_add_dim(peoa_plan* plan, size_t dim);
PEOA_API int peoa_plan_clear_dims(peoa_plan* plan);
PEOA_API int peoa_plan_set_runs(peoa_plan* plan, size_t runs);
PEOA_API int peoa_plan_set_seed(peoa_plan* plan, uint64_t base_seed);
/* 0 restores the 10000 D default. */
PEOA_API int peoa_plan_set_max_evals(peoa_plan* plan, uint64_t max_evals);
PEOA_API int peoa_plan_set_tolerance(peoa_plan* plan, double tolerance);
PEOA_API int peoa_plan_set_territory_fraction(peoa_plan* plan, double rho);
PEOA_API int peoa_plan_set_output_dir(peoa_plan* plan, const char* dir);
/* 0 uses all logical cores. */
PEOA_API int peoa_plan_set_jobs(peoa_plan* plan, size_t jobs);
PEOA_API int peoa_plan_set_write_traces(peoa_plan* plan, int enabled);

typedef struct {
    const char* function; /* valid while the owning peoa_stats lives */
    size_t dim;
    size_t runs;
    double mean;
    double best;
    double worst;
    double std_sample;
    size_t successes;
    double mean_evals;
} peoa_stat_row;

PEOA_API int peoa_experiment_run(const peoa_plan* plan, peoa_stats** out);
PEOA_API void peoa_stats_destroy(peoa_stats* stats);
PEOA_API size_t peoa_stats_count(const peoa_stats* stats);
PEOA_API int peoa_stats_row(const peoa_stats* stats, size_t index, peoa_stat_row* out);

PEOA_API int peoa_rho_sweep(const peoa_plan* plan, const double* values, size_t count, peoa_sweep** out);
PEOA_API void peoa_sweep_destroy(peoa_sweep* sweep);
PEOA_API size_t peoa_sweep_count(const peoa_sweep* sweep);
PEOA_API int peoa_sweep_row(const peoa_sweep* sweep, size_t index, double* rho, double* average);
PEOA_API size_t peoa_sweep_best_index(const peoa_sweep* sweep);
PEOA_API size_t peoa_sweep_function_count(const peoa_sweep* sweep, size_t row);
PEOA_API int peoa_sweep_function(const peoa_sweep* sweep, size_t row, size_t index, const char** function,
                                 double* mean_error);

#ifdef __cplusplus
}
#endif

#endif /* PEOA_H */
