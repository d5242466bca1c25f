#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "peoa/core_types.hpp"

namespace peoa {

/// Seedable random stream, generator identity "mt19937_64/v1".
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so every
/// transform used by the optimizer (uniform reals, bounded integers, normals,
/// Cauchy) is implemented here to keep seeded runs bit-identical across
/// standard libraries. Changing any transform is a stream version bump.
class RandomSource {
public:
    static constexpr const char* kAlgorithm = "mt19937_64/v1";

    explicit RandomSource(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Unbiased (rejection sampling). n must be > 0.
    std::size_t below(std::size_t n);

    /// Standard normal via the Marsaglia polar method; the spare value is cached.
    double normal();

    double cauchy(double location, double scale);

    /// Independent stream derived from this source's next output and `stream`.
    RandomSource fork(std::uint64_t stream);

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Classic Latin hypercube: per dimension an independent permutation of the n
/// strata with a uniform offset inside each stratum. Samples lie strictly
/// inside the bounds.
std::vector<Vector> latin_hypercube(const SearchSpace& space, std::size_t n, RandomSource& rng);

/// Mantegna's sigma for a Levy step with exponent beta in (1, 2].
double levy_sigma(double beta);

struct LevyParams {
    double beta = 1.5;
    double sigma = 0.0;

    static LevyParams make(double beta) { return {beta, levy_sigma(beta)}; }
};

/// One Levy component from given normal draws: 0.01 u sigma / |v|^(1/beta).
double levy_component(double u, double v, const LevyParams& params);

/// d independent components; v is redrawn if it is exactly zero.
Vector levy_step(std::size_t d, const LevyParams& params, RandomSource& rng);

/// location + scale * tan(pi (u - 0.5)) for a given uniform u.
double cauchy_from_uniform(double location, double scale, double u);
double cauchy_draw(double location, double scale, RandomSource& rng);

}  // namespace peoa
