// Command-line front end. Talks to the library only through the C API.

#include <peoa/peoa.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(int status) {
    if (status != PEOA_OK) throw CliError(std::string(peoa_status_string(status)) + ": " + peoa_last_error());
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
    void operator()(T* p) const { Destroy(p); }
};
using PlanPtr = std::unique_ptr<peoa_plan, Deleter<peoa_plan, peoa_plan_destroy>>;
using StatsPtr = std::unique_ptr<peoa_stats, Deleter<peoa_stats, peoa_stats_destroy>>;
using SweepPtr = std::unique_ptr<peoa_sweep, Deleter<peoa_sweep, peoa_sweep_destroy>>;
using ObjectivePtr = std::unique_ptr<peoa_objective, Deleter<peoa_objective, peoa_objective_destroy>>;
using ConfigPtr = std::unique_ptr<peoa_config, Deleter<peoa_config, peoa_config_destroy>>;
using ResultPtr = std::unique_ptr<peoa_result, Deleter<peoa_result, peoa_result_destroy>>;

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && last[-1] == ' ') --last;
    double v = 0.0;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) throw CliError("not a number: '" + s + "'");
    return v;
}

std::vector<double> parse_csv(const std::string& s) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto end = comma == std::string::npos ? s.size() : comma;
        out.push_back(parse_double(s.substr(start, end - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// "lo..hi" steps by lo, "lo..hi:step" by step, anything else is a comma list.
std::vector<double> parse_values(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) return parse_csv(s);
    const double lo = parse_double(s.substr(0, dots));
    std::string rest = s.substr(dots + 2);
    double step = lo;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
        step = parse_double(rest.substr(colon + 1));
        rest = rest.substr(0, colon);
    }
    const double hi = parse_double(rest);
    if (!(step > 0.0) || hi < lo) throw CliError("bad range '" + s + "'");
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= count; ++k) {
        // Round away accumulated binary noise so 0.01..0.1 gives 0.03, not 0.030000000000000002.
        const double v = lo + static_cast<double>(k) * step;
        out.push_back(std::stod(CLI::detail::to_string(std::round(v * 1e12) / 1e12)));
    }
    return out;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("PEOA_OUT_DIR"); env && *env) return env;
    return "results";
}

// Values from a flat key = value file fill options not given on the command line.
void apply_config_file(CLI::App& sub, const std::string& path) {
    if (path.empty()) return;
    if (!std::filesystem::exists(path)) throw CliError("config file not found: " + path);
    for (const auto& item : CLI::ConfigINI().from_file(path)) {
        if (item.name == "++" || item.name == "--") continue;
        auto* opt = sub.get_option_no_throw("--" + item.name);
        if (!opt) throw CliError("unknown key '" + item.name + "' in " + path + " for '" + sub.get_name() + "'");
        if (opt->count() > 0) continue;
        for (const auto& value : item.inputs) opt->add_result(value);
        opt->run_callback();
    }
}

struct ExperimentArgs {
    std::vector<std::string> functions;
    std::vector<std::size_t> dims;
    std::size_t runs = 30;
    std::uint64_t seed = 0;
    std::uint64_t max_evals = 0;
    double tolerance = 1e-8;
    std::optional<double> rho;
    std::string out;
    std::size_t jobs = 0;
    bool traces = false;
};

PlanPtr make_plan(const ExperimentArgs& a) {
    peoa_plan* raw = nullptr;
    check(peoa_plan_create(&raw));
    PlanPtr plan(raw);
    for (const auto& f : a.functions) check(peoa_plan_add_function(plan.get(), f.c_str()));
    for (auto d : a.dims) check(peoa_plan_add_dim(plan.get(), d));
    check(peoa_plan_set_runs(plan.get(), a.runs));
    check(peoa_plan_set_seed(plan.get(), a.seed));
    check(peoa_plan_set_max_evals(plan.get(), a.max_evals));
    check(peoa_plan_set_tolerance(plan.get(), a.tolerance));
    if (a.rho) check(peoa_plan_set_territory_fraction(plan.get(), *a.rho));
    check(peoa_plan_set_output_dir(plan.get(), a.out.c_str()));
    check(peoa_plan_set_jobs(plan.get(), a.jobs));
    check(peoa_plan_set_write_traces(plan.get(), a.traces ? 1 : 0));
    return plan;
}

void add_common(CLI::App* sub, ExperimentArgs& a) {
    sub->add_option("--function", a.functions, "benchmark ids or 'all' (comma separated)")->delimiter(',');
    sub->add_option("--runs", a.runs, "independent runs per function and dimension")->capture_default_str();
    sub->add_option("--seed", a.seed, "base seed; run r uses seed + r")->capture_default_str();
    sub->add_option("--max-evals", a.max_evals, "evaluation budget per run (0 = 10000 D)")->capture_default_str();
    sub->add_option("--tolerance", a.tolerance, "success threshold on the error")->capture_default_str();
    sub->add_option("--out", a.out, "output directory (default $PEOA_OUT_DIR or ./results)");
    sub->add_option("--jobs", a.jobs, "worker threads (0 = logical cores)")->capture_default_str();
}

int cmd_run(ExperimentArgs a) {
    if (a.functions.empty()) {
        std::cerr << "warning: no functions selected, nothing to do\n";
        return 0;
    }
    if (a.dims.empty()) a.dims = {2};
    if (a.out.empty()) a.out = default_out_dir();
    auto plan = make_plan(a);
    peoa_stats* raw = nullptr;
    check(peoa_experiment_run(plan.get(), &raw));
    StatsPtr stats(raw);
    std::cout << "function,dim,runs,mean,best,worst,std_sample,successes,mean_evals\n";
    for (std::size_t i = 0; i < peoa_stats_count(stats.get()); ++i) {
        peoa_stat_row r{};
        check(peoa_stats_row(stats.get(), i, &r));
        std::cout << r.function << ',' << r.dim << ',' << r.runs << ',' << fmt(r.mean) << ',' << fmt(r.best) << ','
                  << fmt(r.worst) << ',' << fmt(r.std_sample) << ',' << r.successes << ',' << fmt(r.mean_evals)
                  << '\n';
    }
    std::cerr << "wrote results to " << a.out << '\n';
    return 0;
}

int cmd_sweep(ExperimentArgs a, const std::string& values_spec) {
    const auto values = parse_values(values_spec);
    if (a.dims.empty()) a.dims = {5};
    if (a.out.empty()) a.out = default_out_dir();
    auto plan = make_plan(a);
    peoa_sweep* raw = nullptr;
    check(peoa_rho_sweep(plan.get(), values.data(), values.size(), &raw));
    SweepPtr sweep(raw);
    const auto best = peoa_sweep_best_index(sweep.get());
    std::cout << "rho,average\n";
    for (std::size_t i = 0; i < peoa_sweep_count(sweep.get()); ++i) {
        double rho = 0.0, avg = 0.0;
        check(peoa_sweep_row(sweep.get(), i, &rho, &avg));
        std::cout << fmt(rho) << ',' << fmt(avg) << (i == best ? ",best" : "") << '\n';
    }
    std::cerr << "wrote rho_sweep.csv to " << a.out << '\n';
    return 0;
}

int cmd_list() {
    std::cout << "index,id,name,family,lower,upper,f_true,stochastic\n";
    for (std::size_t i = 0; i < peoa_benchmark_count(); ++i) {
        const char *id = nullptr, *name = nullptr, *family = nullptr;
        double lo = 0.0, hi = 0.0, ft = 0.0;
        int st = 0;
        check(peoa_benchmark_info(i, &id, &name, &family, &lo, &hi, &ft, &st));
        std::cout << 'f' << i + 1 << ',' << id << ',' << name << ',' << family << ',' << fmt(lo) << ',' << fmt(hi)
                  << ',' << fmt(ft) << ',' << (st ? "yes" : "no") << '\n';
    }
    return 0;
}

int cmd_verify(const std::vector<std::size_t>& dims) {
    int failures = 0;
    for (std::size_t i = 0; i < peoa_benchmark_count(); ++i) {
        const char* id = nullptr;
        int stochastic = 0;
        check(peoa_benchmark_info(i, &id, nullptr, nullptr, nullptr, nullptr, nullptr, &stochastic));
        if (stochastic) {
            std::cout << "SKIP " << id << " (stochastic)\n";
            continue;
        }
        for (auto d : dims) {
            const int status = peoa_benchmark_verify(id, d);
            if (status == PEOA_OK) {
                std::cout << "PASS " << id << " D=" << d << '\n';
            } else {
                ++failures;
                std::cout << "FAIL " << id << " D=" << d << ": " << peoa_last_error() << '\n';
            }
        }
    }
    std::cout << (failures ? "verify-suite: " + std::to_string(failures) + " failure(s)\n" : "verify-suite: all passed\n");
    return failures ? 1 : 0;
}

struct ExternalArgs {
    std::string cmd;
    std::size_t dim = 0;
    std::string lower, upper;
    std::optional<double> f_true;
    std::uint64_t seed = 0;
    std::uint64_t max_evals = 0;
    double tolerance = 1e-8;
    std::optional<double> rho;
    double timeout = 30.0;
    std::string out;
};

std::vector<double> bounds_for(const std::string& spec, std::size_t dim, const char* what) {
    auto v = parse_csv(spec);
    if (v.size() == 1) v.assign(dim, v.front());
    if (v.size() != dim)
        throw CliError(std::string("--") + what + " needs 1 or " + std::to_string(dim) + " values, got " +
                       std::to_string(v.size()));
    return v;
}

int cmd_external(const ExternalArgs& a) {
    const auto lo = bounds_for(a.lower, a.dim, "lower");
    const auto hi = bounds_for(a.upper, a.dim, "upper");

    peoa_objective* oraw = nullptr;
    check(peoa_objective_create_external(a.cmd.c_str(), a.dim, lo.data(), hi.data(), a.timeout, &oraw));
    ObjectivePtr obj(oraw);
    if (a.f_true) check(peoa_objective_set_optimum(obj.get(), *a.f_true));

    peoa_config* craw = nullptr;
    check(peoa_config_create(a.dim, &craw));
    ConfigPtr cfg(craw);
    check(peoa_config_set_int(cfg.get(), "seed", a.seed));
    if (a.max_evals) check(peoa_config_set_int(cfg.get(), "max_evals", a.max_evals));
    check(peoa_config_set_real(cfg.get(), "tolerance", a.tolerance));
    if (a.rho) check(peoa_config_set_real(cfg.get(), "territory_fraction", *a.rho));

    peoa_result* rraw = nullptr;
    const int status = peoa_run(obj.get(), cfg.get(), &rraw);
    const std::string error = status == PEOA_OK ? "" : peoa_last_error();
    ResultPtr res(rraw);

    if (res) {
        std::vector<double> x(peoa_result_dim(res.get()));
        peoa_result_best_position(res.get(), x.data(), x.size());
        std::cout << "best_value: " << fmt(peoa_result_best_value(res.get())) << '\n';
        std::cout << "best_position:";
        for (double xi : x) std::cout << ' ' << fmt(xi);
        std::cout << "\nevals_used: " << peoa_result_evals_used(res.get()) << '\n';
        std::cout << "generations: " << peoa_result_generations(res.get()) << '\n';
        if (status == PEOA_OK)
            std::cout << "terminated_by: "
                      << (peoa_result_terminated_by(res.get()) == PEOA_TERMINATED_TOLERANCE_REACHED ? "tolerance"
                                                                                                     : "budget")
                      << '\n';

        if (!a.out.empty()) {
            std::filesystem::create_directories(a.out);
            const auto path = std::filesystem::path(a.out) / "trace.csv";
            std::ofstream f(path);
            if (!f) throw CliError("cannot write " + path.string());
            f << "evals,best\n";
            for (std::size_t i = 0; i < peoa_result_trace_length(res.get()); ++i) {
                std::uint64_t e = 0;
                double b = 0.0;
                check(peoa_result_trace_point(res.get(), i, &e, &b));
                f << e << ',' << fmt(b) << '\n';
            }
        }
    }
    if (status != PEOA_OK) throw CliError(std::string(peoa_status_string(status)) + ": " + error);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Philippine Eagle Optimization Algorithm"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(peoa_version()));

    std::string config_path;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key = value file; command-line flags win");
    };

    ExperimentArgs run_args;
    auto* run = app.add_subcommand("run", "multi-run experiment with CSV output");
    add_common(run, run_args);
    run->add_option("--dim", run_args.dims, "dimensions (comma separated)")->delimiter(',');
    run->add_option("--rho", run_args.rho, "territory fraction (default 0.04)");
    run->add_flag("--traces", run_args.traces, "also write traces.csv");
    add_config(run);

    ExperimentArgs sweep_args;
    sweep_args.runs = 20;
    sweep_args.functions = {"all"};
    std::string values_spec = "0.01..0.1";
    auto* sweep = app.add_subcommand("sweep-rho", "territory-fraction sweep");
    add_common(sweep, sweep_args);
    sweep->add_option("--dim", sweep_args.dims, "dimensions (default 5)")->delimiter(',');
    sweep->add_option("--values", values_spec, "rho values: lo..hi[:step] or a comma list")->capture_default_str();
    add_config(sweep);

    auto* list = app.add_subcommand("list-functions", "print the benchmark registry");

    std::vector<std::size_t> verify_dims{2, 5, 10, 20};
    auto* verify = app.add_subcommand("verify-suite", "check every deterministic benchmark at its known optimum");
    verify->add_option("--dim", verify_dims, "dimensions (comma separated)")->delimiter(',')->capture_default_str();
    add_config(verify);

    ExternalArgs ext;
    auto* external = app.add_subcommand("run-external", "optimize a child process speaking the line protocol");
    external->add_option("--cmd", ext.cmd, "shell command of the child")->required();
    external->add_option("--dim", ext.dim, "dimension")->required()->check(CLI::PositiveNumber);
    external->add_option("--lower", ext.lower, "lower bounds: one value or D comma-separated")->required();
    external->add_option("--upper", ext.upper, "upper bounds: one value or D comma-separated")->required();
    external->add_option("--f-true", ext.f_true, "known optimum, enables tolerance termination");
    external->add_option("--seed", ext.seed)->capture_default_str();
    external->add_option("--max-evals", ext.max_evals, "budget (default 10000 D)");
    external->add_option("--tolerance", ext.tolerance)->capture_default_str();
    external->add_option("--rho", ext.rho, "territory fraction (default 0.04)");
    external->add_option("--timeout", ext.timeout, "seconds per evaluation")->capture_default_str();
    external->add_option("--out", ext.out, "directory for trace.csv");
    add_config(external);

    try {
        app.parse(argc, argv);
        for (auto* sub : app.get_subcommands()) apply_config_file(*sub, config_path);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args, values_spec);
        if (list->parsed()) return cmd_list();
        if (verify->parsed()) return cmd_verify(verify_dims);
        if (external->parsed()) return cmd_external(ext);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
