#include "peoa/benchmarks.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "peoa/sampling.hpp"

namespace peoa::benchmarks {

namespace {

using X = std::span<const double>;
constexpr double kPi = std::numbers::pi;

double powell_sum(X x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::fabs(x[i]), static_cast<double>(i + 2));
    return s;
}

double schwefel_2_20(X x) {
    double s = 0.0;
    for (double v : x) s += std::fabs(v);
    return s;
}

double schwefel_2_21(X x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

double sphere(X x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double sum_squares(X x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<double>(i + 1) * x[i] * x[i];
    return s;
}

double alpine_1(X x) {
    double s = 0.0;
    for (double v : x) s += std::fabs(v * std::sin(v) + 0.1 * v);
    return s;
}

double wavy(X x) {
    double s = 0.0;
    for (double v : x) s += std::cos(10.0 * v) * std::exp(-0.5 * v * v);
    return 1.0 - s / static_cast<double>(x.size());
}

double qing(X x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x[i] * x[i] - static_cast<double>(i + 1);
        s += t * t;
    }
    return s;
}

double rastrigin(X x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * kPi * v);
    return s;
}

double brown(X x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i] * x[i];
        const double b = x[i + 1] * x[i + 1];
        s += std::pow(a, b + 1.0) + std::pow(b, a + 1.0);
    }
    return s;
}

double rosenbrock(X x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double schwefel_2_22(X x) {
    double s = 0.0;
    double p = 1.0;
    for (double v : x) {
        s += std::fabs(v);
        p *= std::fabs(v);
    }
    return s + p;
}

double xin_she_yang_3(X x) {
    double a = 0.0, b = 0.0, p = 1.0;
    for (double v : x) {
        a += std::pow(v / 15.0, 10.0);
        b += v * v;
        const double c = std::cos(v);
        p *= c * c;
    }
    return std::exp(-a) - 2.0 * std::exp(-b) * p;
}

double zakharov(X x) {
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s1 += x[i] * x[i];
        s2 += 0.5 * static_cast<double>(i + 1) * x[i];
    }
    const double s2sq = s2 * s2;
    return s1 + s2sq + s2sq * s2sq;
}

double ackley(X x) {
    const double n = static_cast<double>(x.size());
    double sq = 0.0, cs = 0.0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(2.0 * kPi * v);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 + std::numbers::e;
}

double periodic(X x) {
    double s = 0.0, sq = 0.0;
    for (double v : x) {
        const double sn = std::sin(v);
        s += sn * sn;
        sq += v * v;
    }
    return 1.0 + s - 0.1 * std::exp(-sq);
}

double griewank(X x) {
    double s = 0.0, p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * x[i] / 4000.0;
        p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return 1.0 + s - p;
}

double salomon(X x) {
    const double r = std::sqrt(sphere(x));
    return 1.0 - std::cos(2.0 * kPi * r) + 0.1 * r;
}

double xin_she_yang_4(X x) {
    double s = 0.0, sq = 0.0, r = 0.0;
    for (double v : x) {
        const double sn = std::sin(v);
        s += sn * sn;
        sq += v * v;
        const double sr = std::sin(std::sqrt(std::fabs(v)));
        r += sr * sr;
    }
    return (s - std::exp(-sq)) * std::exp(-r);
}

using Fn = double (*)(X);

struct Entry {
    BenchmarkSpec spec;
    Fn fn;  // null for the stochastic function
};

constexpr auto US = Family::UnimodalSeparable;
constexpr auto MS = Family::MultimodalSeparable;
constexpr auto UN = Family::UnimodalNonseparable;
constexpr auto MN = Family::MultimodalNonseparable;
constexpr const char* kOrigin = "(0,...,0)";

const std::array<Entry, 20> kEntries{{
    {{"powell_sum", "Powell Sum", US, -1.0, 1.0, 0.0, kOrigin}, powell_sum},
    {{"schwefel_2_20", "Schwefel 2.20", US, -100.0, 100.0, 0.0, kOrigin}, schwefel_2_20},
    {{"schwefel_2_21", "Schwefel 2.21", US, -100.0, 100.0, 0.0, kOrigin}, schwefel_2_21},
    {{"sphere", "Sphere", US, -5.12, 5.12, 0.0, kOrigin}, sphere},
    {{"sum_squares", "Sum Squares", US, -10.0, 10.0, 0.0, kOrigin}, sum_squares},
    {{"alpine_1", "Alpine 1", MS, 0.0, 10.0, 0.0, kOrigin}, alpine_1},
    {{"wavy", "Wavy", MS, -kPi, kPi, 0.0, kOrigin}, wavy},
    {{"qing", "Qing", MS, -500.0, 500.0, 0.0, "(+-1,...,+-sqrt(D))"}, qing},
    {{"rastrigin", "Rastrigin", MS, -5.12, 5.12, 0.0, kOrigin}, rastrigin},
    {{"xin_she_yang_1", "Xin-She Yang 1", MS, -5.0, 5.0, 0.0, kOrigin, true}, nullptr},
    {{"brown", "Brown", UN, -1.0, 4.0, 0.0, kOrigin}, brown},
    {{"rosenbrock", "Rosenbrock", UN, -5.0, 10.0, 0.0, "(1,...,1)"}, rosenbrock},
    {{"schwefel_2_22", "Schwefel 2.22", UN, -100.0, 100.0, 0.0, kOrigin}, schwefel_2_22},
    {{"xin_she_yang_3", "Xin-She Yang 3", UN, -2.0 * kPi, 2.0 * kPi, -1.0, kOrigin}, xin_she_yang_3},
    {{"zakharov", "Zakharov", UN, -5.0, 10.0, 0.0, kOrigin}, zakharov},
    {{"ackley", "Ackley", MN, -32.768, 32.768, 0.0, kOrigin}, ackley},
    {{"periodic", "Periodic", MN, -10.0, 10.0, 0.9, kOrigin}, periodic},
    {{"griewank", "Griewank", MN, -100.0, 100.0, 0.0, kOrigin}, griewank},
    {{"salomon", "Salomon", MN, -100.0, 100.0, 0.0, kOrigin}, salomon},
    {{"xin_she_yang_4", "Xin-She Yang 4", MN, -10.0, 10.0, -1.0, kOrigin}, xin_she_yang_4},
}};

const std::array<BenchmarkSpec, 20> kSpecs = [] {
    std::array<BenchmarkSpec, 20> out{};
    for (std::size_t i = 0; i < kEntries.size(); ++i) out[i] = kEntries[i].spec;
    return out;
}();

std::string normalize(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == ' ' || c == '.' || c == '-')
            out.push_back('_');
        else
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

const Entry& find_entry(std::string_view name) {
    const std::string key = normalize(name);
    for (const auto& e : kEntries)
        if (normalize(e.spec.id) == key || normalize(e.spec.name) == key) return e;
    throw Error(ErrorCode::UnknownFunction, "unknown benchmark function '" + std::string(name) + "'");
}

}  // namespace

const char* to_string(Family f) {
    switch (f) {
        case Family::UnimodalSeparable: return "unimodal-separable";
        case Family::MultimodalSeparable: return "multimodal-separable";
        case Family::UnimodalNonseparable: return "unimodal-nonseparable";
        case Family::MultimodalNonseparable: return "multimodal-nonseparable";
    }
    return "unknown";
}

std::span<const BenchmarkSpec> registry() { return kSpecs; }

const BenchmarkSpec& find(std::string_view name) {
    const Entry& e = find_entry(name);
    return kSpecs[static_cast<std::size_t>(&e - kEntries.data())];
}

Vector solution(const BenchmarkSpec& spec, std::size_t dim) {
    Vector x(dim, 0.0);
    if (spec.id == "rosenbrock") std::fill(x.begin(), x.end(), 1.0);
    if (spec.id == "qing")
        for (std::size_t i = 0; i < dim; ++i) x[i] = std::sqrt(static_cast<double>(i + 1));
    return x;
}

std::pair<Objective, SearchSpace> make(std::string_view name, std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "benchmark dimension must be positive");
    const Entry& e = find_entry(name);
    Objective obj;
    obj.known_optimum = e.spec.f_true;
    obj.known_solution = solution(e.spec, dim);
    obj.stochastic = e.spec.stochastic;
    if (e.fn) {
        obj.function = e.fn;
    } else {
        // sum rand_i |x_i|^i with fresh U(0,1) coefficients per evaluation.
        auto rng = std::make_shared<RandomSource>(splitmix64(seed ^ 0x5853593155ULL));
        obj.function = [rng](X x) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                s += rng->uniform() * std::pow(std::fabs(x[i]), static_cast<double>(i + 1));
            return s;
        };
    }
    return {std::move(obj), SearchSpace::uniform(dim, e.spec.lower, e.spec.upper)};
}

VerifyReport verify_optimum(const BenchmarkSpec& spec, std::size_t dim, std::size_t samples, std::uint64_t seed) {
    constexpr double kTol = 1e-10;
    auto fail = [&](const std::string& why) {
        std::ostringstream msg;
        msg.precision(17);
        msg << spec.name << " (D=" << dim << "): " << why;
        throw Error(ErrorCode::TranscriptionMismatch, msg.str());
    };
    if (spec.stochastic) fail("stochastic function has no deterministic optimum check");

    auto [obj, space] = make(spec.id, dim);
    VerifyReport report{std::string(spec.name), dim, 0.0, 0.0};
    report.value_at_solution = obj(*obj.known_solution);
    if (!(std::fabs(report.value_at_solution - spec.f_true) < kTol)) {
        std::ostringstream why;
        why.precision(17);
        why << "f(x_true) = " << report.value_at_solution << ", expected " << spec.f_true;
        fail(why.str());
    }
    RandomSource rng(seed);
    report.min_sampled = std::numeric_limits<double>::infinity();
    Vector x(dim);
    for (std::size_t k = 0; k < samples; ++k) {
        for (std::size_t j = 0; j < dim; ++j) x[j] = rng.uniform(space.lower[j], space.upper[j]);
        const double v = obj(x);
        report.min_sampled = std::min(report.min_sampled, v);
        if (!(v >= spec.f_true - kTol)) {
            std::ostringstream why;
            why.precision(17);
            why << "sampled point has value " << v << " below f_true " << spec.f_true;
            fail(why.str());
        }
    }
    return report;
}

}  // namespace peoa::benchmarks
