#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "peoa/core_types.hpp"
#include "peoa/sampling.hpp"

namespace peoa {

enum class OperatorKind : std::size_t { Movement = 0, MutationOne = 1, MutationTwo = 2 };

inline constexpr std::size_t kOperatorCount = 3;

const char* to_string(OperatorKind op);

/// Evaluated eagles; after sort() the first one is the incumbent X*.
struct Population {
    std::vector<Eagle> eagles;
    bool sorted = false;

    std::size_t size() const noexcept { return eagles.size(); }
    const Eagle& best() const { return eagles.front(); }

    /// Stable ascending sort by objective value.
    void sort();
    /// Drops the worst eagles until `n` remain. Sorts first if needed.
    void truncate(std::size_t n);
    Vector mean_position() const;
};

/// Positions of parents beaten by their offspring. Capacity is floor(A * S0).
class Archive {
public:
    explicit Archive(std::size_t capacity = 0) : capacity_(capacity) {}

    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const Vector& operator[](std::size_t i) const { return entries_[i]; }

    /// Appends, then removes uniformly random entries while over capacity.
    void add(Vector position, RandomSource& rng);

private:
    std::size_t capacity_;
    std::vector<Vector> entries_;
};

struct SubpopulationAssignment {
    std::vector<OperatorKind> operator_of;
    std::array<std::size_t, kOperatorCount> sizes{};
};

using Probabilities = std::array<double, kOperatorCount>;

/// Normalizes `p` to unit sum and maps a uniform draw j onto an operator by
/// cumulative thresholds (j <= p1: Movement, j <= p1 + p2: Mutation I).
OperatorKind choose_operator(const Probabilities& p, double j);

SubpopulationAssignment assign_subpopulations(std::size_t pop_size, const Probabilities& p, RandomSource& rng);

/// Component-wise clamp into the closed box.
Vector repair_bounds(Vector candidate, const SearchSpace& space);

/// Nearest population member to eagles[i] (excluding i itself) by Euclidean
/// distance; ties go to the lowest index.
struct Neighbor {
    std::size_t index = 0;
    double distance = 0.0;
};
Neighbor nearest_neighbor(const Population& pop, std::size_t i);

/// Indices used by the movement operator. `arc` indexes the union of the
/// population (first pop_size entries) and the archive (the rest).
struct MovementPartners {
    std::size_t best = 0;
    std::size_t r1 = 0;
    std::size_t arc = 0;
};
MovementPartners pick_movement_partners(std::size_t pop_size, std::size_t archive_size, RandomSource& rng);

/// Two distinct indices in [1, pop_size), i.e. both different from X* at 0.
std::array<std::size_t, 2> pick_distinct_non_best(std::size_t pop_size, RandomSource& rng);

// Unrepaired operator formulas, element-wise over the dimension.
Vector movement_formula(std::span<const double> xi, std::span<const double> best, std::span<const double> r1,
                        std::span<const double> arc, std::span<const double> near, double distance, double f);
Vector mutation_one_formula(std::span<const double> r1, std::span<const double> best, std::span<const double> r2,
                            double f, std::span<const double> scale_vec, std::span<const double> levy);
Vector mutation_two_formula(std::span<const double> random_point, std::span<const double> best,
                            std::span<const double> mean, double f);

/// Movement operator for eagle i. `pop` must be sorted.
Vector movement(std::size_t i, const Population& pop, const Archive& archive, double f, const SearchSpace& space,
                RandomSource& rng);

/// Mutation I: F (X_r1 + X* - X_r2) + scale_vec * L(D).
Vector mutation_one(const Population& pop, double f, const LevyParams& levy, const SearchSpace& space,
                    RandomSource& rng);

/// Mutation II: F (X_hat + X* - X_mean) with a fresh uniform X_hat. `mean` is
/// the population mean, passed in so it is computed once per generation.
Vector mutation_two(const Population& pop, std::span<const double> mean, double f, const SearchSpace& space,
                    RandomSource& rng);

/// Offspring survives when not worse than its parent. Only a strictly beaten
/// parent enters the archive.
Eagle select_and_archive(const Eagle& parent, Eagle offspring, Archive& archive, RandomSource& rng);

}  // namespace peoa
