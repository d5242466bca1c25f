#include "doctest.h"

#include <cmath>
#include <deque>
#include <memory>

#include "peoa/adaptation.hpp"

using namespace peoa;

TEST_SUITE("adaptation") {
    TEST_CASE("population size endpoints and rounding") {
        CHECK(reduce_population_size(80, 5, 0, 20000) == 80);
        CHECK(reduce_population_size(80, 5, 20000, 20000) == 5);
        CHECK(reduce_population_size(80, 5, 25000, 20000) == 5);
        // 80 - 75 * 160 / 20000 = 79.4
        CHECK(reduce_population_size(80, 5, 160, 20000) == 79);
        // 80 - 75 * 400 / 20000 = 78.5, half rounds away from zero
        CHECK(reduce_population_size(80, 5, 400, 20000) == 79);
        CHECK(reduce_population_size(80, 5, 401, 20000) == 78);
    }

    TEST_CASE("population size is non-increasing in N") {
        std::size_t prev = 80;
        for (std::uint64_t n = 0; n <= 20000; n += 7) {
            const auto s = reduce_population_size(80, 5, n, 20000);
            REQUIRE(s <= prev);
            prev = s;
        }
    }

    TEST_CASE("improvement rate") {
        CHECK(improvement_rate(std::vector<double>{10, 20}, std::vector<double>{5, 25}) ==
              doctest::Approx(1.0 / 6.0).epsilon(1e-15));
        CHECK(improvement_rate(std::vector<double>{1, 2}, std::vector<double>{1, 3}) == 0.0);
        CHECK(improvement_rate(std::vector<double>{}, std::vector<double>{}) == 0.0);
        CHECK(improvement_rate(std::vector<double>{-1, 0.5}, std::vector<double>{-2, 0.5}) == 0.0);
    }

    TEST_CASE("probability update") {
        ProbabilityVector p;
        p.update({1.0 / 6.0, 0.0, 0.0});
        CHECK(p[0] == 0.9);
        CHECK(p[1] == 0.1);
        CHECK(p[2] == 0.1);

        p.update({0.0, 0.0, 0.0});
        CHECK(p[0] == 0.9);
        CHECK(p[1] == 0.1);

        const auto q = update_probabilities(ProbabilityVector{}, {1.0, 1.0, 1.0});
        for (std::size_t i = 0; i < 3; ++i) CHECK(q[i] == doctest::Approx(1.0 / 3.0));
    }

    TEST_CASE("probabilities stay clipped for arbitrary rates") {
        RandomSource r(5);
        ProbabilityVector p;
        for (int t = 0; t < 1000; ++t) {
            std::array<double, 3> rates{};
            for (auto& x : rates) x = r.uniform() < 0.3 ? 0.0 : r.uniform();
            p.update(rates);
            for (std::size_t i = 0; i < 3; ++i) {
                REQUIRE(p[i] >= 0.1);
                REQUIRE(p[i] <= 0.9);
            }
        }
    }

    TEST_CASE("weighted Lehmer mean examples") {
        CHECK(weighted_lehmer_mean(std::vector<double>{0.5}, std::vector<double>{7}) == doctest::Approx(0.5));
        CHECK(weighted_lehmer_mean(std::vector<double>{0.2, 0.8}, std::vector<double>{1, 1}) ==
              doctest::Approx(0.68).epsilon(1e-15));
        CHECK(weighted_lehmer_mean(std::vector<double>{0.2, 0.8}, std::vector<double>{0, 1}) ==
              doctest::Approx(0.8).epsilon(1e-15));
    }

    TEST_CASE("memory update writes at a cyclic cursor") {
        ScalingMemory mem(3);
        for (double m : mem.means()) CHECK(m == 0.2);
        mem.lehmer_update(std::vector<double>{}, std::vector<double>{});
        CHECK(mem.cursor() == 0);
        mem.lehmer_update(std::vector<double>{0.5}, std::vector<double>{1});
        mem.lehmer_update(std::vector<double>{0.6}, std::vector<double>{1});
        mem.lehmer_update(std::vector<double>{0.7}, std::vector<double>{1});
        CHECK(mem.cursor() == 0);
        mem.lehmer_update(std::vector<double>{0.9}, std::vector<double>{1});
        CHECK(mem[0] == doctest::Approx(0.9));
        CHECK(mem[1] == doctest::Approx(0.6));
        CHECK(mem[2] == doctest::Approx(0.7));
        CHECK(mem.cursor() == 1);
    }

    TEST_CASE("Lehmer update matches brute force on random inputs") {
        RandomSource r(2024);
        ScalingMemory mem(7);
        std::vector<double> shadow(7, 0.2);
        std::size_t cursor = 0;
        for (int t = 0; t < 1000; ++t) {
            const std::size_t n = 1 + r.below(20);
            std::vector<double> f(n), df(n);
            for (std::size_t k = 0; k < n; ++k) {
                f[k] = r.uniform();
                df[k] = r.uniform() * std::pow(10.0, r.uniform(-3, 3));
            }
            long double sum_df = 0;
            for (double d : df) sum_df += d;
            long double num = 0, den = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const long double w = df[k] / sum_df;
                num += w * f[k] * f[k];
                den += w * f[k];
            }
            shadow[cursor] = static_cast<double>(num / den);
            cursor = (cursor + 1) % shadow.size();
            mem.lehmer_update(f, df);
            for (std::size_t h = 0; h < shadow.size(); ++h) REQUIRE(std::abs(mem[h] - shadow[h]) < 1e-12);
        }
    }

    TEST_CASE("scaling factor resolution") {
        auto scripted = [](std::vector<double> values) {
            auto q = std::make_shared<std::deque<double>>(values.begin(), values.end());
            return [q] {
                const double v = q->front();
                q->pop_front();
                return v;
            };
        };
        CHECK(resolve_scaling_factor(scripted({1.7}), 0.2) == 1.0);
        CHECK(resolve_scaling_factor(scripted({0.35}), 0.2) == 0.35);
        CHECK(resolve_scaling_factor(scripted({-0.2, 0.4}), 0.2) == 0.4);
        CHECK(resolve_scaling_factor(scripted({0.0, 0.5}), 0.2) == 0.5);
        CHECK(resolve_scaling_factor([] { return -1.0; }, 0.3) == 0.3);
    }

    TEST_CASE("drawn scaling factors lie in (0, 1]") {
        RandomSource r(77);
        ScalingMemory mem(10);
        for (int t = 0; t < 100000; ++t) {
            const auto d = draw_scaling_factor(mem, r);
            REQUIRE(d.f > 0.0);
            REQUIRE(d.f <= 1.0);
            REQUIRE(d.memory_index < 10);
        }
    }
}
