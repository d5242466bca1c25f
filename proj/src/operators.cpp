#include "peoa/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace peoa {

const char* to_string(OperatorKind op) {
    switch (op) {
        case OperatorKind::Movement: return "movement";
        case OperatorKind::MutationOne: return "mutation_one";
        case OperatorKind::MutationTwo: return "mutation_two";
    }
    return "unknown";
}

void Population::sort() {
    std::stable_sort(eagles.begin(), eagles.end(),
                     [](const Eagle& a, const Eagle& b) { return a.fitness() < b.fitness(); });
    sorted = true;
}

void Population::truncate(std::size_t n) {
    if (n >= eagles.size()) return;
    if (!sorted) sort();
    eagles.resize(n);
}

Vector Population::mean_position() const {
    if (eagles.empty()) return {};
    Vector mean(eagles.front().position.size(), 0.0);
    for (const auto& e : eagles)
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += e.position[j];
    for (auto& m : mean) m /= static_cast<double>(eagles.size());
    return mean;
}

void Archive::add(Vector position, RandomSource& rng) {
    entries_.push_back(std::move(position));
    while (entries_.size() > capacity_) {
        const std::size_t victim = rng.below(entries_.size());
        entries_[victim] = std::move(entries_.back());
        entries_.pop_back();
    }
}

OperatorKind choose_operator(const Probabilities& p, double j) {
    const double total = p[0] + p[1] + p[2];
    const double p1 = p[0] / total;
    const double p2 = p[1] / total;
    if (j <= p1) return OperatorKind::Movement;
    if (j <= p1 + p2) return OperatorKind::MutationOne;
    return OperatorKind::MutationTwo;
}

SubpopulationAssignment assign_subpopulations(std::size_t pop_size, const Probabilities& p, RandomSource& rng) {
    SubpopulationAssignment out;
    out.operator_of.reserve(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
        const OperatorKind op = choose_operator(p, rng.uniform());
        out.operator_of.push_back(op);
        ++out.sizes[static_cast<std::size_t>(op)];
    }
    return out;
}

Vector repair_bounds(Vector candidate, const SearchSpace& space) {
    for (std::size_t j = 0; j < candidate.size(); ++j)
        candidate[j] = std::max(space.lower[j], std::min(space.upper[j], candidate[j]));
    return candidate;
}

Neighbor nearest_neighbor(const Population& pop, std::size_t i) {
    const auto& xi = pop.eagles[i].position;
    Neighbor best{i, std::numeric_limits<double>::infinity()};
    double best_sq = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pop.size(); ++k) {
        if (k == i) continue;
        const auto& xk = pop.eagles[k].position;
        double sq = 0.0;
        for (std::size_t j = 0; j < xi.size() && sq < best_sq; ++j) {
            const double d = xk[j] - xi[j];
            sq += d * d;
        }
        if (sq < best_sq) {
            best_sq = sq;
            best.index = k;
        }
    }
    best.distance = std::sqrt(best_sq);
    return best;
}

MovementPartners pick_movement_partners(std::size_t pop_size, std::size_t archive_size, RandomSource& rng) {
    const std::size_t union_size = pop_size + archive_size;
    if (pop_size < 2 || union_size < 3)
        throw Error(ErrorCode::InsufficientPopulation, "movement operator needs X*, X_r1 and X_arc to be distinct");
    MovementPartners m;
    m.best = 0;
    m.r1 = 1 + rng.below(pop_size - 1);
    // Uniform over the union minus {0, r1}: draw from union_size - 2 slots and
    // skip the two excluded indices (0 < r1).
    std::size_t k = 1 + rng.below(union_size - 2);
    if (k >= m.r1) ++k;
    m.arc = k;
    return m;
}

std::array<std::size_t, 2> pick_distinct_non_best(std::size_t pop_size, RandomSource& rng) {
    if (pop_size < 3)
        throw Error(ErrorCode::InsufficientPopulation, "mutation I needs two eagles distinct from X*");
    const std::size_t a = 1 + rng.below(pop_size - 1);
    std::size_t b = 1 + rng.below(pop_size - 2);
    if (b >= a) ++b;
    return {a, b};
}

Vector movement_formula(std::span<const double> xi, std::span<const double> best, std::span<const double> r1,
                        std::span<const double> arc, std::span<const double> near, double distance, double f) {
    const double attraction = std::exp(-distance * distance);
    Vector out(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j)
        out[j] = xi[j] + f * (best[j] - xi[j] + r1[j] - arc[j] + attraction * (near[j] - xi[j]));
    return out;
}

Vector mutation_one_formula(std::span<const double> r1, std::span<const double> best, std::span<const double> r2,
                            double f, std::span<const double> scale_vec, std::span<const double> levy) {
    Vector out(r1.size());
    for (std::size_t j = 0; j < r1.size(); ++j) out[j] = f * (r1[j] + best[j] - r2[j]) + scale_vec[j] * levy[j];
    return out;
}

Vector mutation_two_formula(std::span<const double> random_point, std::span<const double> best,
                            std::span<const double> mean, double f) {
    Vector out(best.size());
    for (std::size_t j = 0; j < best.size(); ++j) out[j] = f * (random_point[j] + best[j] - mean[j]);
    return out;
}

Vector movement(std::size_t i, const Population& pop, const Archive& archive, double f, const SearchSpace& space,
                RandomSource& rng) {
    const MovementPartners m = pick_movement_partners(pop.size(), archive.size(), rng);
    const Neighbor near = nearest_neighbor(pop, i);
    const Vector& arc = m.arc < pop.size() ? pop.eagles[m.arc].position : archive[m.arc - pop.size()];
    return repair_bounds(movement_formula(pop.eagles[i].position, pop.eagles[m.best].position,
                                          pop.eagles[m.r1].position, arc, pop.eagles[near.index].position,
                                          near.distance, f),
                         space);
}

Vector mutation_one(const Population& pop, double f, const LevyParams& levy, const SearchSpace& space,
                    RandomSource& rng) {
    const auto [r1, r2] = pick_distinct_non_best(pop.size(), rng);
    const std::size_t dim = space.dimension();
    Vector scale_vec(dim);
    for (auto& s : scale_vec) s = rng.uniform();
    const Vector step = levy_step(dim, levy, rng);
    return repair_bounds(
        mutation_one_formula(pop.eagles[r1].position, pop.best().position, pop.eagles[r2].position, f, scale_vec, step),
        space);
}

Vector mutation_two(const Population& pop, std::span<const double> mean, double f, const SearchSpace& space,
                    RandomSource& rng) {
    if (pop.size() == 0) throw Error(ErrorCode::InsufficientPopulation, "mutation II needs a non-empty population");
    Vector random_point(space.dimension());
    for (std::size_t j = 0; j < random_point.size(); ++j)
        random_point[j] = rng.uniform(space.lower[j], space.upper[j]);
    return repair_bounds(mutation_two_formula(random_point, pop.best().position, mean, f), space);
}

Eagle select_and_archive(const Eagle& parent, Eagle offspring, Archive& archive, RandomSource& rng) {
    if (offspring.fitness() <= parent.fitness()) {
        if (offspring.fitness() < parent.fitness()) archive.add(parent.position, rng);
        return offspring;
    }
    return parent;
}

}  // namespace peoa
