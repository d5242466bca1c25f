#include "peoa/optimizer.hpp"

#include <array>
#include <limits>

namespace peoa {

bool terminate_check(const OptimizerState& state, const OptimizerConfig& cfg, std::optional<double> f_true) {
    if (state.counter.used() >= cfg.max_evals) return true;
    return f_true && function_error(state.incumbent.value, *f_true) < cfg.target_tolerance;
}

namespace {

class Runner {
public:
    Runner(const Objective& obj, const SearchSpace& space, const OptimizerConfig& cfg, const RunHooks& hooks)
        : obj_(obj),
          space_(space),
          cfg_(cfg),
          hooks_(hooks),
          method_(hooks.local_method ? *hooks.local_method : default_local_minimizer()),
          state_(cfg),
          rng_(cfg.seed),
          levy_(LevyParams::make(cfg.levy_beta)) {
        state_.incumbent.value = std::numeric_limits<double>::infinity();
    }

    RunRecord execute() {
        try {
            initialize();
            local_phase();
            while (!terminate_check(state_, cfg_, obj_.known_optimum)) generation();
        } catch (const RunFailure&) {
            throw;
        } catch (const Error& e) {
            throw RunFailure(e, finish());
        }
        return finish();
    }

private:
    double eval_point(std::span<const double> x) {
        const double v = evaluate(obj_, x, state_.counter);
        observe(x, v);
        return v;
    }

    void observe(std::span<const double> x, double v) {
        if (v < state_.incumbent.value) {
            state_.incumbent.value = v;
            state_.incumbent.position.assign(x.begin(), x.end());
            record_.trace.push_back({state_.counter.used(), v});
        }
    }

    void initialize() {
        auto positions = latin_hypercube(space_, cfg_.initial_pop_size, rng_);
        auto& eagles = state_.population.eagles;
        eagles.reserve(positions.size());
        for (auto& p : positions) {
            if (state_.counter.exhausted()) break;
            Eagle e{std::move(p), std::nullopt};
            e.value = eval_point(e.position);
            eagles.push_back(std::move(e));
        }
        state_.population.sort();
    }

    void local_phase() {
        const Eagle& xstar = state_.population.best();
        Territory terr = territory(xstar, space_, cfg_.territory_fraction);
        terr.start = warm_start_rule(state_.prev_best, state_.prev_local, xstar);
        const double start_value = terr.start == xstar.position ? xstar.fitness() : state_.prev_local->best_value;

        LocalResult result{terr.start, start_value, 0};
        if (!state_.counter.exhausted())
            result = local_minimize(obj_, terr, start_value, cfg_.local_budget, state_.counter, method_,
                                    [this](std::span<const double> x, double v) { observe(x, v); });
        state_.prev_local = std::move(result);
        state_.prev_best = xstar;
    }

    void generation() {
        auto& pop = state_.population;
        ++state_.generation;
        pop.truncate(reduce_population_size(cfg_.initial_pop_size, cfg_.min_pop_size, state_.counter.used(),
                                            cfg_.max_evals));
        record_.generation_log.push_back(
            {state_.generation, state_.counter.used(), pop.size(), state_.incumbent.value});

        const std::size_t n = pop.size();
        const SubpopulationAssignment assignment = assign_subpopulations(n, state_.prob.values(), rng_);
        const Vector mean = pop.mean_position();

        std::vector<Vector> offspring(n);
        std::vector<double> scaling(n);
        for (std::size_t i = 0; i < n; ++i) {
            const ScalingDraw draw = draw_scaling_factor(state_.scaling_mem, rng_);
            scaling[i] = draw.f;
            switch (assignment.operator_of[i]) {
                case OperatorKind::Movement:
                    offspring[i] = movement(i, pop, state_.archive, draw.f, space_, rng_);
                    break;
                case OperatorKind::MutationOne:
                    offspring[i] = mutation_one(pop, draw.f, levy_, space_, rng_);
                    break;
                case OperatorKind::MutationTwo:
                    offspring[i] = mutation_two(pop, mean, draw.f, space_, rng_);
                    break;
            }
        }

        // Synchronous batch: every offspring is evaluated before selection.
        std::vector<std::optional<double>> values(n);
        for (std::size_t i = 0; i < n && !state_.counter.exhausted(); ++i) values[i] = eval_point(offspring[i]);

        std::array<std::vector<double>, kOperatorCount> old_values, new_values;
        std::vector<double> successes, deltas;
        for (std::size_t i = 0; i < n; ++i) {
            if (!values[i]) continue;
            const Eagle& parent = pop.eagles[i];
            const auto op = static_cast<std::size_t>(assignment.operator_of[i]);
            old_values[op].push_back(parent.fitness());
            new_values[op].push_back(*values[i]);
            if (*values[i] < parent.fitness()) {
                successes.push_back(scaling[i]);
                deltas.push_back(parent.fitness() - *values[i]);
            }
            pop.eagles[i] = select_and_archive(parent, Eagle{std::move(offspring[i]), values[i]}, state_.archive, rng_);
        }
        pop.sorted = false;
        pop.sort();

        local_phase();

        std::array<double, kOperatorCount> rates{};
        for (std::size_t k = 0; k < kOperatorCount; ++k) rates[k] = improvement_rate(old_values[k], new_values[k]);
        state_.prob.update(rates);
        state_.scaling_mem.lehmer_update(successes, deltas);

        if (hooks_.after_generation) hooks_.after_generation(state_);
    }

    RunRecord finish() {
        record_.best_value = state_.incumbent.value;
        record_.best_position = state_.incumbent.position;
        record_.evals_used = state_.counter.used();
        record_.generations = state_.generation;
        const auto& f_true = obj_.known_optimum;
        record_.terminated_by = f_true && function_error(state_.incumbent.value, *f_true) < cfg_.target_tolerance
                                    ? Termination::ToleranceReached
                                    : Termination::BudgetExhausted;
        if (!record_.trace.empty() && record_.trace.back().evals != record_.evals_used)
            record_.trace.push_back({record_.evals_used, record_.best_value});
        return record_;
    }

    const Objective& obj_;
    const SearchSpace& space_;
    const OptimizerConfig& cfg_;
    const RunHooks& hooks_;
    const LocalMinimizer& method_;
    OptimizerState state_;
    RandomSource rng_;
    LevyParams levy_;
    RunRecord record_;
};

}  // namespace

RunRecord run(const Objective& obj, const SearchSpace& space, const OptimizerConfig& cfg, const RunHooks& hooks) {
    cfg.validate();
    if (space.dimension() == 0 || space.lower.size() != space.upper.size())
        throw Error(ErrorCode::ConfigError, "search space must have a positive dimension");
    if (!obj.function) throw Error(ErrorCode::ConfigError, "objective has no callable");
    return Runner(obj, space, cfg, hooks).execute();
}

}  // namespace peoa
