#include "doctest.h"

#include <cmath>
#include <limits>

#include "peoa/benchmarks.hpp"
#include "peoa/optimizer.hpp"

using namespace peoa;

namespace {

struct Counting {
    std::shared_ptr<std::uint64_t> calls = std::make_shared<std::uint64_t>(0);
    std::shared_ptr<double> best = std::make_shared<double>(std::numeric_limits<double>::infinity());
    std::shared_ptr<bool> in_bounds = std::make_shared<bool>(true);

    Objective wrap(const Objective& inner, const SearchSpace& space) const {
        Objective o = inner;
        o.function = [inner, space, c = *this](std::span<const double> x) {
            ++*c.calls;
            *c.in_bounds = *c.in_bounds && space.contains(x);
            const double v = inner(x);
            *c.best = std::min(*c.best, v);
            return v;
        };
        return o;
    }
};

bool same_record(const RunRecord& a, const RunRecord& b) {
    if (a.best_value != b.best_value || a.best_position != b.best_position || a.evals_used != b.evals_used ||
        a.generations != b.generations || a.trace.size() != b.trace.size())
        return false;
    for (std::size_t i = 0; i < a.trace.size(); ++i)
        if (a.trace[i].evals != b.trace[i].evals || a.trace[i].best != b.trace[i].best) return false;
    return true;
}

}  // namespace

TEST_SUITE("optimizer") {
    TEST_CASE("terminate check") {
        const auto cfg = [] {
            auto c = OptimizerConfig::defaults_for(2);
            c.max_evals = 100;
            return c;
        }();
        OptimizerState s(cfg);
        s.incumbent.value = 1e-9;
        CHECK(terminate_check(s, cfg, 0.0));
        s.incumbent.value = 1e-8;
        CHECK_FALSE(terminate_check(s, cfg, 0.0));
        CHECK_FALSE(terminate_check(s, cfg, std::nullopt));
        for (int i = 0; i < 100; ++i) s.counter.consume();
        CHECK(terminate_check(s, cfg, std::nullopt));
    }

    TEST_CASE("sphere D=2 with defaults reaches the tolerance") {
        auto [obj, space] = benchmarks::make("sphere", 2);
        auto cfg = OptimizerConfig::defaults_for(2);
        cfg.seed = 1;
        const auto rec = run(obj, space, cfg);
        CHECK(rec.terminated_by == Termination::ToleranceReached);
        CHECK(rec.best_value < 1e-8);
        CHECK(rec.evals_used <= 20000);
    }

    TEST_CASE("without a known optimum only the budget stops the run") {
        auto [obj, space] = benchmarks::make("sphere", 2);
        obj.known_optimum.reset();
        auto cfg = OptimizerConfig::defaults_for(2);
        cfg.max_evals = 3000;
        const auto rec = run(obj, space, cfg);
        CHECK(rec.terminated_by == Termination::BudgetExhausted);
        CHECK(rec.evals_used == 3000);
    }

    TEST_CASE("budget equal to S0 evaluates only the initial population") {
        auto [inner, space] = benchmarks::make("rastrigin", 2);
        Counting c;
        const auto obj = c.wrap(inner, space);
        auto cfg = OptimizerConfig::defaults_for(2);
        cfg.max_evals = cfg.initial_pop_size;
        const auto rec = run(obj, space, cfg);
        CHECK(rec.evals_used == 80);
        CHECK(*c.calls == 80);
        CHECK(rec.generations == 0);
        CHECK(rec.best_value == *c.best);
    }

    TEST_CASE("evaluation accounting matches a counting objective") {
        for (const char* name : {"rastrigin", "rosenbrock", "xin_she_yang_4"}) {
            CAPTURE(name);
            auto [inner, space] = benchmarks::make(name, 3);
            Counting c;
            const auto obj = c.wrap(inner, space);
            auto cfg = OptimizerConfig::defaults_for(3);
            cfg.max_evals = 5000;
            cfg.seed = 5;
            const auto rec = run(obj, space, cfg);
            CHECK(rec.evals_used == *c.calls);
            CHECK(rec.evals_used <= cfg.max_evals);
            CHECK(*c.in_bounds);
            CHECK(rec.best_value == *c.best);
            CHECK(inner(rec.best_position) == rec.best_value);
        }
    }

    TEST_CASE("replay with the same seed is bit-identical") {
        auto [obj, space] = benchmarks::make("ackley", 3);
        auto cfg = OptimizerConfig::defaults_for(3);
        cfg.seed = 77;
        cfg.max_evals = 6000;
        const auto a = run(obj, space, cfg);
        const auto b = run(obj, space, cfg);
        CHECK(same_record(a, b));
        cfg.seed = 78;
        const auto c = run(obj, space, cfg);
        CHECK_FALSE(same_record(a, c));
    }

    TEST_CASE("trace is strictly decreasing and ends at the final count") {
        auto [obj, space] = benchmarks::make("griewank", 2);
        auto cfg = OptimizerConfig::defaults_for(2);
        cfg.seed = 3;
        const auto rec = run(obj, space, cfg);
        REQUIRE_FALSE(rec.trace.empty());
        for (std::size_t i = 1; i < rec.trace.size(); ++i) {
            CHECK(rec.trace[i].evals >= rec.trace[i - 1].evals);
            CHECK(rec.trace[i].best <= rec.trace[i - 1].best);
        }
        CHECK(rec.trace.back().evals == rec.evals_used);
        CHECK(rec.trace.back().best == rec.best_value);
    }

    TEST_CASE("population size follows the reduction schedule") {
        auto [obj, space] = benchmarks::make("xin_she_yang_1", 2, 9);
        auto cfg = OptimizerConfig::defaults_for(2);
        cfg.seed = 9;
        const auto rec = run(obj, space, cfg);
        REQUIRE_FALSE(rec.generation_log.empty());
        std::size_t prev = cfg.initial_pop_size;
        for (const auto& g : rec.generation_log) {
            CHECK(g.pop_size == reduce_population_size(80, 5, g.evals_at_start, 20000));
            CHECK(g.pop_size <= prev);
            prev = g.pop_size;
        }
    }

    TEST_CASE("state invariants hold after every generation") {
        auto [obj, space] = benchmarks::make("schwefel_2_22", 3);
        auto cfg = OptimizerConfig::defaults_for(3);
        cfg.seed = 4;
        cfg.max_evals = 8000;
        double last_best = std::numeric_limits<double>::infinity();
        RunHooks hooks;
        int generations = 0;
        hooks.after_generation = [&](const OptimizerState& s) {
            ++generations;
            REQUIRE(s.archive.size() <= cfg.archive_capacity());
            for (std::size_t i = 0; i < 3; ++i) {
                REQUIRE(s.prob[i] >= 0.1);
                REQUIRE(s.prob[i] <= 0.9);
            }
            REQUIRE(s.counter.used() <= cfg.max_evals);
            REQUIRE(s.incumbent.value <= last_best);
            last_best = s.incumbent.value;
            for (double m : s.scaling_mem.means()) {
                REQUIRE(m > 0.0);
                REQUIRE(m <= 1.0);
            }
        };
        run(obj, space, cfg, hooks);
        CHECK(generations > 0);
    }

    TEST_CASE("objective failures surface as RunFailure with a partial record") {
        auto [inner, space] = benchmarks::make("sphere", 2);
        auto calls = std::make_shared<int>(0);
        Objective obj = inner;
        obj.function = [inner, calls](std::span<const double> x) {
            if (++*calls > 500) return std::numeric_limits<double>::quiet_NaN();
            return inner(x);
        };
        obj.known_optimum.reset();
        auto cfg = OptimizerConfig::defaults_for(2);
        try {
            run(obj, space, cfg);
            FAIL("expected RunFailure");
        } catch (const RunFailure& e) {
            CHECK(e.code() == ErrorCode::NonFiniteObjective);
            CHECK(e.partial().evals_used == 501);
            CHECK(std::isfinite(e.partial().best_value));
        }
    }

    TEST_CASE("invalid configuration is rejected up front") {
        auto [obj, space] = benchmarks::make("sphere", 2);
        auto cfg = OptimizerConfig::defaults_for(2);
        cfg.territory_fraction = 0.0;
        try {
            run(obj, space, cfg);
            FAIL("expected ConfigError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ConfigError);
        }
    }
}
