#include "doctest.h"

#include <cmath>

#include "peoa/benchmarks.hpp"
#include "peoa/external_objective.hpp"
#include "peoa/optimizer.hpp"

using namespace peoa;

namespace {

std::string child(const std::string& mode) { return std::string(PROTOCOL_CHILD) + " " + mode; }

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("external_objective") {
    TEST_CASE("request formatting and reply parsing") {
        CHECK(format_request(Vector{1.0, -0.5, 0.1}) == "1 -0.5 0.1");
        CHECK(parse_reply("6") == 6.0);
        CHECK(parse_reply("  -1.25e-3 \r") == -1.25e-3);
        CHECK(parse_reply("+2.5") == 2.5);
        CHECK(std::isnan(parse_reply("nan")));
        CHECK(code_of([] { parse_reply("twelve"); }) == ErrorCode::ProtocolError);
        CHECK(code_of([] { parse_reply(""); }) == ErrorCode::ProtocolError);
        CHECK(code_of([] { parse_reply("1 2"); }) == ErrorCode::ProtocolError);
    }

    TEST_CASE("sum child") {
        const auto obj = external_objective(child("sum"));
        CHECK(obj(Vector{1.0, 2.0, 3.0}) == 6.0);
        CHECK(obj(Vector{0.1, 0.2}) == 0.1 + 0.2);
    }

    TEST_CASE("nan reply is a non-finite objective") {
        const auto obj = external_objective(child("nan"));
        EvalCounter counter(5);
        CHECK(code_of([&] { evaluate(obj, Vector{1.0}, counter); }) == ErrorCode::NonFiniteObjective);
        CHECK(counter.used() == 1);
    }

    TEST_CASE("malformed reply") {
        const auto obj = external_objective(child("garbage"));
        CHECK(code_of([&] { obj(Vector{1.0}); }) == ErrorCode::ProtocolError);
    }

    TEST_CASE("child exit") {
        const auto obj = external_objective(child("die-after 2"));
        CHECK(obj(Vector{2.0}) == 4.0);
        CHECK(obj(Vector{3.0}) == 9.0);
        CHECK(code_of([&] { obj(Vector{1.0}); }) == ErrorCode::ChildExit);
        CHECK(code_of([&] { obj(Vector{1.0}); }) == ErrorCode::ChildExit);
    }

    TEST_CASE("missing program") {
        const auto obj = external_objective("/nonexistent/peoa_child_program");
        CHECK(code_of([&] { obj(Vector{1.0}); }) == ErrorCode::ChildExit);
    }

    TEST_CASE("timeout") {
        const auto obj = external_objective(child("sleep 2000"), std::chrono::milliseconds(100));
        CHECK(code_of([&] { obj(Vector{1.0}); }) == ErrorCode::Timeout);
        CHECK(code_of([&] { obj(Vector{1.0}); }) == ErrorCode::ChildExit);
    }

    TEST_CASE("child killed mid-run keeps the partial record") {
        // No known optimum, so the run cannot stop on tolerance before the child dies.
        auto obj = external_objective(child("die-after 300"));
        const auto space = SearchSpace::uniform(2, -5.12, 5.12);
        auto cfg = OptimizerConfig::defaults_for(2);
        try {
            run(obj, space, cfg);
            FAIL("expected RunFailure");
        } catch (const RunFailure& e) {
            CHECK(e.code() == ErrorCode::ChildExit);
            CHECK(e.partial().evals_used == 301);
            CHECK(std::isfinite(e.partial().best_value));
        }
    }

    TEST_CASE("bridge reproduces the in-process sphere run") {
        auto [local, space] = benchmarks::make("sphere", 2);
        auto remote = external_objective(child("sphere"));
        remote.known_optimum = local.known_optimum;
        auto cfg = OptimizerConfig::defaults_for(2);
        cfg.seed = 12;
        const auto a = run(local, space, cfg);
        const auto b = run(remote, space, cfg);
        CHECK(a.evals_used == b.evals_used);
        CHECK(a.best_value == b.best_value);
        REQUIRE(a.trace.size() == b.trace.size());
        for (std::size_t i = 0; i < a.trace.size(); ++i) {
            CHECK(a.trace[i].evals == b.trace[i].evals);
            CHECK(a.trace[i].best == b.trace[i].best);
        }
    }
}
