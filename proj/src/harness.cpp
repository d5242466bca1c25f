#include "peoa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "peoa/benchmarks.hpp"
#include "peoa/optimizer.hpp"
#include "peoa/sampling.hpp"

namespace peoa::harness {

namespace {

struct Task {
    std::string function;
    std::size_t dim;
    std::size_t run;
};

std::size_t worker_count(std::size_t requested, std::size_t tasks) {
    std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(n, tasks));
}

RunResult execute(const ExperimentPlan& plan, const Task& task) {
    const OptimizerConfig cfg = config_for(plan, task.dim, task.run);
    auto [obj, space] = benchmarks::make(task.function, task.dim, cfg.seed);
    const RunRecord rec = peoa::run(obj, space, cfg);
    RunResult r;
    r.function = task.function;
    r.dim = task.dim;
    r.run = task.run;
    r.seed = cfg.seed;
    r.error = function_error(rec.best_value, *obj.known_optimum);
    r.best_value = rec.best_value;
    r.evals = rec.evals_used;
    r.generations = rec.generations;
    r.terminated_by = rec.terminated_by;
    if (plan.write_traces) r.trace = rec.trace;
    r.generation_log = rec.generation_log;
    return r;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    return out;
}

void close_output(std::ofstream& out, const std::filesystem::path& path) {
    out.close();
    if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

template <typename T>
T parse_number(const std::string& s) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorCode::IoError, "bad numeric field '" + s + "' in runs.csv");
    return v;
}

std::size_t registry_index(const std::string& id) {
    const auto reg = benchmarks::registry();
    for (std::size_t i = 0; i < reg.size(); ++i)
        if (reg[i].id == id) return i;
    return reg.size();
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

OptimizerConfig config_for(const ExperimentPlan& plan, std::size_t dim, std::size_t run) {
    OptimizerConfig cfg = OptimizerConfig::defaults_for(dim);
    if (plan.max_evals) cfg.max_evals = plan.max_evals;
    cfg.target_tolerance = plan.tolerance;
    if (plan.territory_fraction) cfg.territory_fraction = *plan.territory_fraction;
    cfg.seed = plan.seed_for(run);
    return cfg;
}

std::vector<std::string> resolve_functions(const std::vector<std::string>& names) {
    std::vector<bool> wanted(benchmarks::registry().size(), false);
    for (const auto& n : names) {
        if (n == "all" || n == "ALL") {
            std::fill(wanted.begin(), wanted.end(), true);
            continue;
        }
        wanted[registry_index(std::string(benchmarks::find(n).id))] = true;
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < wanted.size(); ++i)
        if (wanted[i]) out.emplace_back(benchmarks::registry()[i].id);
    return out;
}

std::vector<StatRow> compute_stats(const std::vector<RunResult>& runs) {
    std::map<std::pair<std::size_t, std::size_t>, std::vector<const RunResult*>> groups;
    for (const auto& r : runs) groups[{registry_index(r.function), r.dim}].push_back(&r);

    std::vector<StatRow> out;
    for (const auto& [key, members] : groups) {
        StatRow row;
        row.function = members.front()->function;
        row.dim = key.second;
        row.runs = members.size();
        std::vector<double> errs;
        double evals = 0.0;
        for (const auto* r : members) {
            errs.push_back(r->error < kZeroErrorThreshold ? 0.0 : r->error);
            evals += static_cast<double>(r->evals);
            if (r->terminated_by == Termination::ToleranceReached) ++row.successes;
        }
        double sum = 0.0;
        for (double e : errs) sum += e;
        row.mean = sum / static_cast<double>(errs.size());
        row.best = *std::min_element(errs.begin(), errs.end());
        row.worst = *std::max_element(errs.begin(), errs.end());
        if (errs.size() > 1) {
            double ss = 0.0;
            for (double e : errs) ss += (e - row.mean) * (e - row.mean);
            row.std = std::sqrt(ss / static_cast<double>(errs.size() - 1));
        }
        // Summation order can push the mean a few ulps outside [best, worst].
        row.mean = std::clamp(row.mean, row.best, row.worst);
        row.mean_evals = evals / static_cast<double>(members.size());
        out.push_back(std::move(row));
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
    const auto functions = resolve_functions(plan.functions);
    std::vector<Task> tasks;
    for (const auto& f : functions)
        for (std::size_t d : plan.dims)
            for (std::size_t r = 0; r < plan.runs; ++r) tasks.push_back({f, d, r});
    if (tasks.empty()) std::clog << "peoa: experiment plan has no runs; writing empty outputs\n";

    const std::string started = timestamp();
    std::vector<RunResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                results[i] = execute(plan, tasks[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = tasks.size();
                return;
            }
        }
    };
    const std::size_t nworkers = worker_count(plan.jobs, tasks.size());
    if (nworkers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    ExperimentResult out;
    out.runs = std::move(results);
    std::stable_sort(out.runs.begin(), out.runs.end(), [](const RunResult& a, const RunResult& b) {
        return std::tuple(registry_index(a.function), a.dim, a.run) <
               std::tuple(registry_index(b.function), b.dim, b.run);
    });
    out.stats = compute_stats(out.runs);

    if (!plan.output_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(plan.output_dir, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create '" + plan.output_dir.string() + "': " + ec.message());
        auto emit = [&](const char* name, auto&& writer) {
            const auto path = plan.output_dir / name;
            auto f = open_output(path);
            writer(f);
            close_output(f, path);
        };
        emit("runs.csv", [&](std::ostream& o) { write_runs_csv(o, out.runs); });
        emit("stats.csv", [&](std::ostream& o) { write_stats_csv(o, out.stats); });
        emit("boxplot.csv", [&](std::ostream& o) { write_boxplot_csv(o, out.runs); });
        if (plan.write_traces) emit("traces.csv", [&](std::ostream& o) { write_traces_csv(o, out.runs); });
        emit("metadata.txt", [&](std::ostream& o) {
            o << "started=" << started << "\nfinished=" << timestamp() << "\nrng=" << RandomSource::kAlgorithm
              << "\nbase_seed=" << plan.base_seed << "\nruns=" << plan.runs << "\ntolerance=" << format_double(plan.tolerance)
              << "\nmax_evals=" << plan.max_evals << "\n";
        });
    }
    return out;
}

SweepResult rho_sweep(const std::vector<double>& values, ExperimentPlan plan) {
    for (double rho : values)
        if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorCode::ConfigError, "rho values must lie in (0,1)");
    if (plan.functions.empty()) plan.functions = {"all"};
    const auto out_dir = plan.output_dir;
    plan.output_dir.clear();
    plan.write_traces = false;

    SweepResult sweep;
    for (double rho : values) {
        plan.territory_fraction = rho;
        const ExperimentResult res = run_experiment(plan);
        SweepRow row;
        row.rho = rho;
        std::map<std::pair<std::size_t, std::size_t>, std::pair<double, std::size_t>> acc;
        for (const auto& r : res.runs) {
            auto& slot = acc[{registry_index(r.function), r.dim}];
            slot.first += r.error;
            ++slot.second;
        }
        double total = 0.0;
        for (const auto& [key, v] : acc) {
            std::string label(benchmarks::registry()[key.first].id);
            if (plan.dims.size() > 1) label += "/D" + std::to_string(key.second);
            row.functions.push_back(std::move(label));
            row.mean_errors.push_back(v.first / static_cast<double>(v.second));
            total += row.mean_errors.back();
        }
        row.average = row.mean_errors.empty() ? 0.0 : total / static_cast<double>(row.mean_errors.size());
        sweep.rows.push_back(std::move(row));
    }
    for (std::size_t i = 1; i < sweep.rows.size(); ++i)
        if (sweep.rows[i].average < sweep.rows[sweep.best_index].average) sweep.best_index = i;

    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create '" + out_dir.string() + "': " + ec.message());
        const auto path = out_dir / "rho_sweep.csv";
        auto f = open_output(path);
        f << "rho,function,mean_error\n";
        for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
            const auto& row = sweep.rows[i];
            for (std::size_t k = 0; k < row.functions.size(); ++k)
                f << format_double(row.rho) << ',' << row.functions[k] << ',' << format_double(row.mean_errors[k]) << '\n';
            f << format_double(row.rho) << ",average" << (i == sweep.best_index ? "_best" : "") << ','
              << format_double(row.average) << '\n';
        }
        close_output(f, path);
    }
    return sweep;
}

void write_runs_csv(std::ostream& out, const std::vector<RunResult>& runs) {
    out << "function,dim,run,seed,error,best_value,evals,generations,terminated_by\n";
    for (const auto& r : runs)
        out << r.function << ',' << r.dim << ',' << r.run << ',' << r.seed << ',' << format_double(r.error) << ','
            << format_double(r.best_value) << ',' << r.evals << ',' << r.generations << ',' << to_string(r.terminated_by)
            << '\n';
}

void write_stats_csv(std::ostream& out, const std::vector<StatRow>& stats) {
    out << "function,dim,runs,mean,best,worst,std_sample,successes,mean_evals\n";
    for (const auto& s : stats)
        out << s.function << ',' << s.dim << ',' << s.runs << ',' << format_double(s.mean) << ','
            << format_double(s.best) << ',' << format_double(s.worst) << ',' << format_double(s.std) << ','
            << s.successes << ',' << format_double(s.mean_evals) << '\n';
}

void write_boxplot_csv(std::ostream& out, const std::vector<RunResult>& runs) {
    out << "function,dim,run,error_floored\n";
    for (const auto& r : runs)
        out << r.function << ',' << r.dim << ',' << r.run << ','
            << format_double(std::max(r.error, kZeroErrorThreshold)) << '\n';
}

void write_traces_csv(std::ostream& out, const std::vector<RunResult>& runs) {
    out << "function,dim,run,evals,best\n";
    for (const auto& r : runs)
        for (const auto& p : r.trace)
            out << r.function << ',' << r.dim << ',' << r.run << ',' << p.evals << ',' << format_double(p.best) << '\n';
}

std::vector<RunResult> read_runs_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) return {};
    std::vector<RunResult> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 9) throw Error(ErrorCode::IoError, "runs.csv row has " + std::to_string(f.size()) + " fields");
        RunResult r;
        r.function = f[0];
        r.dim = parse_number<std::size_t>(f[1]);
        r.run = parse_number<std::size_t>(f[2]);
        r.seed = parse_number<std::uint64_t>(f[3]);
        r.error = parse_number<double>(f[4]);
        r.best_value = parse_number<double>(f[5]);
        r.evals = parse_number<std::uint64_t>(f[6]);
        r.generations = parse_number<std::uint64_t>(f[7]);
        r.terminated_by = f[8] == "ToleranceReached" ? Termination::ToleranceReached : Termination::BudgetExhausted;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace peoa::harness
