#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crowdsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

using crowdsim::RngStream;

TEST_CASE("identical seeds produce identical sequences") {
    RngStream a(42);
    RngStream b(42);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
        CHECK(a.uniform_real(0.0, 1.0) == b.uniform_real(0.0, 1.0));
        CHECK(a.uniform_int(-5, 17) == b.uniform_int(-5, 17));
    }
}

TEST_CASE("different seeds diverge") {
    RngStream a(1);
    RngStream b(2);
    int equal = 0;
    for (int i = 0; i < 100; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    CHECK(equal < 5);
}

TEST_CASE("uniform_int degenerate range") {
    RngStream rng(7);
    for (int i = 0; i < 10; ++i) CHECK(rng.uniform_int(5, 5) == 5);
}

TEST_CASE("uniform_int rejects lo > hi") {
    RngStream rng(7);
    CHECK_THROWS_AS(rng.uniform_int(6, 5), std::invalid_argument);
    CHECK_THROWS_AS(rng.uniform_real(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("uniform_real stays in [lo, hi)") {
    RngStream rng(11);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform_real(-2.5, 3.5);
        CHECK(u >= -2.5);
        CHECK(u < 3.5);
    }
    CHECK(rng.uniform_real(4.0, 4.0) == 4.0);
}

TEST_CASE("uniform_int covers the range inclusively") {
    RngStream rng(13);
    std::set<std::int64_t> seen;
    for (int i = 0; i < 2000; ++i) seen.insert(rng.uniform_int(1, 4));
    CHECK(seen == std::set<std::int64_t>{1, 2, 3, 4});
}

// Frequency oracle: 1e5 draws of uniform_int(1,4) are Binomial(n, 1/4)
// per value, so each count must sit within 3 sigma of n/4 where
// sigma = sqrt(n * p * (1-p)).
TEST_CASE("uniform_int frequencies within 3 sigma of uniform") {
    const int n = 100000;
    const double p = 0.25;
    const double sigma = std::sqrt(n * p * (1.0 - p));
    RngStream rng(2024);
    std::array<int, 4> counts{};
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(rng.uniform_int(1, 4) - 1)];
    for (const int c : counts) CHECK(std::abs(c - n * p) <= 3.0 * sigma);
}

TEST_CASE("shuffle is a permutation") {
    RngStream rng(5);
    for (const int n : {0, 1, 2, 7, 100}) {
        std::vector<int> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
        auto shuffled = v;
        rng.shuffle(shuffled);
        auto sorted = shuffled;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == v);
    }
}

TEST_CASE("shuffle actually reorders") {
    RngStream rng(5);
    std::vector<int> v(100);
    for (int i = 0; i < 100; ++i) v[static_cast<std::size_t>(i)] = i;
    auto shuffled = v;
    rng.shuffle(shuffled);
    CHECK(shuffled != v);
}

TEST_CASE("mix is deterministic and spreads points") {
    CHECK(RngStream::mix(1, 0) == RngStream::mix(1, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t pt = 0; pt < 100; ++pt) seen.insert(RngStream::mix(42, pt));
    CHECK(seen.size() == 100);
}
