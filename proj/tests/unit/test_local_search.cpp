#include "doctest.h"

#include <cmath>

#include "peoa/local_search.hpp"
#include "peoa/sampling.hpp"

using namespace peoa;

namespace {

Objective make_objective(std::function<double(std::span<const double>)> f) {
    Objective o;
    o.function = std::move(f);
    return o;
}

double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double rosenbrock(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        s += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(x[i] - 1.0, 2);
    return s;
}

Territory box(Vector start, double lo, double hi) {
    Territory t;
    t.y_size = (hi - lo) / 2.0;
    t.lower.assign(start.size(), lo);
    t.upper.assign(start.size(), hi);
    t.start = std::move(start);
    return t;
}

}  // namespace

TEST_SUITE("local_search") {
    TEST_CASE("territory radius and clamping") {
        const auto wide = SearchSpace::uniform(3, -100.0, 100.0);
        auto t = territory(Eagle{{0.0, 50.0, 97.0}, 0.0}, wide, 0.04);
        CHECK(t.y_size == 8.0);
        CHECK(t.lower == Vector{-8.0, 42.0, 89.0});
        CHECK(t.upper == Vector{8.0, 58.0, 100.0});

        const auto unit = SearchSpace::uniform(2, 0.0, 1.0);
        t = territory(Eagle{{0.3, 0.6}, 0.0}, unit, 0.04);
        CHECK(t.y_size == 1.0);
        CHECK(t.lower == unit.lower);
        CHECK(t.upper == unit.upper);

        t = territory(Eagle{{-100.0, -100.0, -100.0}, 0.0}, wide, 0.04);
        CHECK(t.lower == wide.lower);
        CHECK(t.start == Vector{-100.0, -100.0, -100.0});
    }

    TEST_CASE("sphere from (0.3, -0.2) within 40 evaluations") {
        const auto obj = make_objective(sphere);
        const auto terr = box({0.3, -0.2}, -1.0, 1.0);
        EvalCounter counter(1000);
        const auto res = local_minimize(obj, terr, sphere(terr.start), 40, counter);
        CHECK(res.best_value < 1e-8);
        CHECK(res.evals_consumed <= 40);
        CHECK(counter.used() == res.evals_consumed);
    }

    TEST_CASE("one-dimensional quadratic within 1e-6 in 50 evaluations") {
        for (double c : {0.37, -2.9, 4.123456}) {
            const auto obj = make_objective([c](std::span<const double> x) { return (x[0] - c) * (x[0] - c); });
            const auto terr = box({0.0}, -5.0, 5.0);
            EvalCounter counter(50);
            const auto res = local_minimize(obj, terr, obj(terr.start), 50, counter);
            CHECK(std::abs(res.best_point[0] - c) < 1e-6);
            CHECK(counter.used() <= 50);
        }
    }

    TEST_CASE("budget of one never worsens the start") {
        const auto obj = make_objective(sphere);
        const auto terr = box({0.3, -0.2}, -1.0, 1.0);
        EvalCounter counter(10);
        const double f0 = sphere(terr.start);
        const auto res = local_minimize(obj, terr, f0, 1, counter);
        CHECK(res.evals_consumed <= 1);
        CHECK(res.best_value == f0);
        CHECK(res.best_point == terr.start);
    }

    TEST_CASE("stationary start stays put") {
        const auto obj = make_objective([](std::span<const double> x) { return (x[0] - 0.5) * (x[0] - 0.5) + 2.0; });
        const auto terr = box({0.5}, -1.0, 1.0);
        EvalCounter counter(100);
        const auto res = local_minimize(obj, terr, 2.0, 100, counter);
        CHECK(res.best_value == 2.0);
    }

    TEST_CASE("budget is capped by the global counter") {
        const auto obj = make_objective(sphere);
        const auto terr = box({0.9, 0.9}, -1.0, 1.0);
        EvalCounter counter(7);
        const auto res = local_minimize(obj, terr, sphere(terr.start), 40, counter);
        CHECK(res.evals_consumed == 7);
        CHECK(counter.exhausted());
    }

    TEST_CASE("every method keeps iterates inside the territory and never worsens") {
        const CompassSearch compass;
        const ProjectedQuasiNewton qn;
        const HybridLocalSearch hybrid;
        const LocalMinimizer* methods[] = {&compass, &qn, &hybrid};
        RandomSource r(31);
        for (const auto* method : methods) {
            CAPTURE(method->name());
            for (int t = 0; t < 50; ++t) {
                Vector start{r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2)};
                Territory terr = box(start, -2.0, 2.0);
                // Off-centre territory so that bounds are active.
                terr.lower = {start[0] - 0.5, -2.0, start[2] - 1.0};
                terr.upper = {start[0] + 0.25, 2.0, start[2] + 0.1};
                bool inside = true;
                const auto obj = make_objective([&](std::span<const double> x) {
                    for (std::size_t j = 0; j < x.size(); ++j)
                        inside &= x[j] >= terr.lower[j] && x[j] <= terr.upper[j];
                    return rosenbrock(x);
                });
                EvalCounter counter(1000);
                const double f0 = rosenbrock(start);
                const auto res = local_minimize(obj, terr, f0, 90, counter, *method);
                REQUIRE(inside);
                REQUIRE(res.best_value <= f0);
                REQUIRE(counter.used() == res.evals_consumed);
                REQUIRE(res.evals_consumed <= 90);
                REQUIRE(rosenbrock(res.best_point) == res.best_value);
            }
        }
    }

    TEST_CASE("hybrid handles a kinked objective") {
        const auto obj = make_objective([](std::span<const double> x) {
            double s = 0.0;
            for (double v : x) s += std::abs(v);
            return s;
        });
        const auto terr = box({0.31, -0.12, 0.05, 0.2, -0.4}, -8.0, 8.0);
        EvalCounter counter(1000);
        const auto res = local_minimize(obj, terr, obj(terr.start), 1000, counter);
        CHECK(res.best_value < 1e-8);
        CHECK(res.evals_consumed < 1000);

        // The gradient stage alone stalls at the kink.
        EvalCounter qn_counter(1000);
        const auto qn = local_minimize(obj, terr, obj(terr.start), 1000, qn_counter, ProjectedQuasiNewton{});
        CHECK(qn.best_value > res.best_value);
    }

    TEST_CASE("warm start rule") {
        const Eagle current{{1.0, 2.0}, 3.0};
        const LocalResult prev{{1.1, 2.1}, 2.5, 10};
        CHECK(warm_start_rule(std::nullopt, std::nullopt, current) == current.position);
        CHECK(warm_start_rule(Eagle{{1.0, 2.0}, 3.0}, prev, current) == prev.best_point);
        CHECK(warm_start_rule(Eagle{{1.0, 2.5}, 3.0}, prev, current) == current.position);
    }
}
