#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ibench/random.hpp"

using namespace ibench;

TEST_CASE("same seed, same stream", "[random]") {
    RandomStream a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(RandomStream(42).next_u64() != RandomStream(43).next_u64());
}

TEST_CASE("draw counts per transform", "[random]") {
    RandomStream s(1);
    s.uniform();
    CHECK(s.draws() == 1);
    s.exponential(0.05);
    CHECK(s.draws() == 2);
    s.bernoulli(0.3);
    CHECK(s.draws() == 3);
    s.uniform_int(1, 100);
    CHECK(s.draws() == 4);
    s.gaussian(0, 1);
    CHECK(s.draws() == 6);
}

TEST_CASE("serialize resumes the exact position", "[random]") {
    RandomStream s(99);
    for (int i = 0; i < 37; ++i) s.uniform();
    auto copy = RandomStream::deserialize(s.serialize());
    CHECK(copy == s);
    for (int i = 0; i < 50; ++i) CHECK(copy.next_u64() == s.next_u64());
    CHECK_THROWS_AS(RandomStream::deserialize("garbage"), FormatError);
}

TEST_CASE("uniform ranges", "[random]") {
    RandomStream s(5);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const int k = s.uniform_int(1, 100);
        REQUIRE(k >= 1);
        REQUIRE(k <= 100);
    }
}

TEST_CASE("moments of the transforms", "[random][statistics]") {
    RandomStream s(2024);
    const int n = 200000;
    double se = 0, sg = 0, sg2 = 0, sb = 0;
    for (int i = 0; i < n; ++i) {
        se += s.exponential(0.05);
        const double g = s.gaussian(3.0, 2.0);
        sg += g;
        sg2 += g * g;
        sb += s.bernoulli(0.3);
    }
    const double mg = sg / n;
    CHECK(std::abs(se / n - 0.05) < 5 * 0.05 / std::sqrt(n));
    CHECK(std::abs(mg - 3.0) < 5 * 2.0 / std::sqrt(n));
    CHECK(std::abs(std::sqrt(sg2 / n - mg * mg) - 2.0) < 0.02);
    CHECK(std::abs(sb / n - 0.3) < 5 * std::sqrt(0.21 / n));
}

TEST_CASE("derived seeds differ per stream", "[random]") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST_CASE("suppressed noise", "[random]") {
    SuppressedNoise mean(NoiseHook::Mean), zero(NoiseHook::Zero);
    CHECK(mean.exponential(0.05) == 0.05);
    CHECK(mean.bernoulli(0.3) == 0.3);
    CHECK(mean.bernoulli(1.7) == 1.0);
    CHECK(mean.uniform() == 0.5);
    CHECK(mean.gaussian(2.4, 0.4) == 2.4);
    CHECK(mean.uniform_int(1, 100) == 50);
    CHECK(zero.exponential(0.05) == 0.0);
    CHECK(zero.bernoulli(0.3) == 0.0);
    CHECK(zero.uniform() == 0.0);
    CHECK(zero.gaussian(0.0, 3.0) == 0.0);
    CHECK(zero.uniform_int(1, 100) == 1);
}
