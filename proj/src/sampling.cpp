#include "peoa/sampling.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace peoa {

double RandomSource::uniform() {
    // (k + 0.5) / 2^53 with k in [0, 2^53) never hits 0 or 1.
    const std::uint64_t k = engine_() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

std::size_t RandomSource::below(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = engine_();
    } while (r >= limit);
    return static_cast<std::size_t>(r % bound);
}

double RandomSource::normal() {
    if (spare_normal_) {
        const double s = *spare_normal_;
        spare_normal_.reset();
        return s;
    }
    double a, b, s;
    do {
        a = 2.0 * uniform() - 1.0;
        b = 2.0 * uniform() - 1.0;
        s = a * a + b * b;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = b * m;
    return a * m;
}

double RandomSource::cauchy(double location, double scale) {
    return cauchy_from_uniform(location, scale, uniform());
}

RandomSource RandomSource::fork(std::uint64_t stream) {
    return RandomSource(splitmix64(engine_() ^ splitmix64(stream)));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<Vector> latin_hypercube(const SearchSpace& space, std::size_t n, RandomSource& rng) {
    const std::size_t dim = space.dimension();
    std::vector<Vector> samples(n, Vector(dim));
    std::vector<std::size_t> perm(n);
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);

        const double width = space.upper[j] - space.lower[j];
        for (std::size_t i = 0; i < n; ++i) {
            const double unit = (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(n);
            double x = space.lower[j] + width * unit;
            // Rounding can land on the bound itself for very small strata.
            if (x <= space.lower[j]) x = std::nextafter(space.lower[j], space.upper[j]);
            if (x >= space.upper[j]) x = std::nextafter(space.upper[j], space.lower[j]);
            samples[i][j] = x;
        }
    }
    return samples;
}

double levy_sigma(double beta) {
    if (!(beta > 1.0 && beta <= 2.0))
        throw Error(ErrorCode::DomainError, "levy beta must lie in (1, 2]");
    const double pi = std::numbers::pi;
    const double num = std::tgamma(1.0 + beta) * std::sin(pi * beta / 2.0);
    const double den = beta * std::tgamma((1.0 + beta) / 2.0) * std::pow(2.0, (beta - 1.0) / 2.0);
    const double ratio = num / den;
    // sin(pi) evaluates to ~1e-16, not 0.
    if (ratio <= 0.0 || beta == 2.0) return 0.0;
    return std::pow(ratio, 1.0 / beta);
}

double levy_component(double u, double v, const LevyParams& params) {
    return 0.01 * u * params.sigma / std::pow(std::fabs(v), 1.0 / params.beta);
}

Vector levy_step(std::size_t d, const LevyParams& params, RandomSource& rng) {
    Vector step(d);
    for (auto& s : step) {
        const double u = rng.normal();
        double v = rng.normal();
        while (v == 0.0) v = rng.normal();
        s = levy_component(u, v, params);
    }
    return step;
}

double cauchy_from_uniform(double location, double scale, double u) {
    return location + scale * std::tan(std::numbers::pi * (u - 0.5));
}

double cauchy_draw(double location, double scale, RandomSource& rng) {
    return rng.cauchy(location, scale);
}

}  // namespace peoa
