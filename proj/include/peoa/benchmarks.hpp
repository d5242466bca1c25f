#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "peoa/core_types.hpp"

namespace peoa::benchmarks {

enum class Family { UnimodalSeparable, MultimodalSeparable, UnimodalNonseparable, MultimodalNonseparable };

const char* to_string(Family f);

struct BenchmarkSpec {
    std::string_view id;       // CLI identifier, e.g. "schwefel_2_20"
    std::string_view name;     // display name, e.g. "Schwefel 2.20"
    Family family;
    double lower;
    double upper;
    double f_true;
    std::string_view x_true;   // textual description of the minimizer
    bool stochastic = false;
};

/// The 20 test functions, f1..f20 in table order.
std::span<const BenchmarkSpec> registry();

/// Lookup by id or display name, case-insensitive; spaces, dots and hyphens
/// are interchangeable with underscores. Throws UnknownFunction.
const BenchmarkSpec& find(std::string_view name);

/// Known minimizer for dimension d (Qing uses +sqrt(i)).
Vector solution(const BenchmarkSpec& spec, std::size_t dim);

/// Objective and box for `name` in dimension `dim`. `seed` only matters for
/// the stochastic Xin-She Yang 1, whose coefficients are drawn per evaluation.
std::pair<Objective, SearchSpace> make(std::string_view name, std::size_t dim, std::uint64_t seed = 0);

struct VerifyReport {
    std::string function;
    std::size_t dim = 0;
    double value_at_solution = 0.0;
    double min_sampled = 0.0;
};

/// |f(x_true) - f_true| < 1e-10 and no sampled in-range point below
/// f_true - 1e-10. Throws TranscriptionMismatch naming the function.
VerifyReport verify_optimum(const BenchmarkSpec& spec, std::size_t dim, std::size_t samples = 100,
                            std::uint64_t seed = 1);

}  // namespace peoa::benchmarks
