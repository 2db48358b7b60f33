#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "gridprobe/rng.hpp"

using namespace gridprobe;

TEST_CASE("mix_seed is deterministic and spreads nearby inputs") {
    CHECK(mix_seed(42) == mix_seed(42));
    CHECK(mix_seed(42, 7) == mix_seed(42, 7));
    CHECK(mix_seed(42, 7, 3) == mix_seed(42, 7, 3));

    std::set<std::uint64_t> outputs;
    for (std::uint64_t i = 0; i < 1000; ++i) outputs.insert(mix_seed(i));
    CHECK(outputs.size() == 1000);

    // derived streams must differ in every argument position
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
    CHECK(mix_seed(1, 2, 3) != mix_seed(1, 3, 2));
    CHECK(mix_seed(0) != 0);
}

TEST_CASE("uniform stays inside its bounds") {
    Rng rng(123);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    // the draw should actually cover the interval
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);

    Rng rng2(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng2.uniform(2.5, 3.5);
        CHECK(u >= 2.5);
        CHECK(u < 3.5);
    }
}

TEST_CASE("uniform_index covers [0, n) without escaping") {
    Rng rng(99);
    std::vector<int> hits(10, 0);
    for (int i = 0; i < 20000; ++i) {
        const std::uint64_t k = rng.uniform_index(10);
        REQUIRE(k < 10);
        ++hits[static_cast<std::size_t>(k)];
    }
    for (int h : hits) CHECK(h > 1500);  // expectation 2000 per bucket
}

TEST_CASE("normal moments match a standard gaussian") {
    Rng rng(2024);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::fabs(mean) < 0.01);
    CHECK(std::fabs(var - 1.0) < 0.02);
}

TEST_CASE("identical seeds replay identical streams") {
    Rng a(555), b(555);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.uniform() == b.uniform());
        CHECK(a.normal() == b.normal());
    }
}

TEST_CASE("shuffle permutes without losing elements") {
    Rng rng(31);
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[static_cast<std::size_t>(i)] = i;
    const std::vector<int> original = v;
    rng.shuffle(v);
    CHECK(v != original);  // 50! permutations; identity would be astronomical luck

    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == original);

    // determinism
    std::vector<int> w = original;
    Rng rng2(31);
    rng2.shuffle(w);
    CHECK(w == v);
}
