#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>

#include "kslab/rng.hpp"

using namespace kslab;

// Known-answer vectors for Philox4x32-10 (Random123 kat_vectors file).
TEST_CASE("philox block matches published known-answer vectors") {
    {
        const auto r = philox::block({0u, 0u, 0u, 0u}, {0u, 0u});
        CHECK(r[0] == 0x6627e8d5u);
        CHECK(r[1] == 0xe169c58du);
        CHECK(r[2] == 0xbc57ac4cu);
        CHECK(r[3] == 0x9b00dbd8u);
    }
    {
        const uint32_t f = 0xffffffffu;
        const auto r = philox::block({f, f, f, f}, {f, f});
        CHECK(r[0] == 0x408f276du);
        CHECK(r[1] == 0x41c83b0eu);
        CHECK(r[2] == 0xa20bc7c6u);
        CHECK(r[3] == 0x6d5451fdu);
    }
    {
        const auto r = philox::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                     {0xa4093822u, 0x299f31d0u});
        CHECK(r[0] == 0xd16cfe09u);
        CHECK(r[1] == 0x94fdccebu);
        CHECK(r[2] == 0x5001e420u);
        CHECK(r[3] == 0x24126ea1u);
    }
}

TEST_CASE("uniform2 lands strictly inside (0,1) and is deterministic") {
    const CounterRng rng(12345, StreamTag::Property);
    for (uint64_t i = 0; i < 2000; ++i) {
        const auto u = rng.uniform2(i, 7);
        CHECK(u[0] > 0.0);
        CHECK(u[0] < 1.0);
        CHECK(u[1] > 0.0);
        CHECK(u[1] < 1.0);
    }
    const CounterRng again(12345, StreamTag::Property);
    const auto a = rng.uniform2(42, 3);
    const auto b = again.uniform2(42, 3);
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);
}

TEST_CASE("streams with different tags or slots are distinct") {
    const CounterRng s0(99, StreamTag::InitSample);
    const CounterRng s1(99, StreamTag::StepNoise);
    CHECK(s0.uniform2(0, 0)[0] != s1.uniform2(0, 0)[0]);
    CHECK(s0.uniform2(0, 0)[0] != s0.uniform2(0, 1)[0]);
    CHECK(s0.uniform2(0, 0)[0] != s0.uniform2(1, 0)[0]);
}

TEST_CASE("normal2 sample moments match a standard 2-D gaussian") {
    const CounterRng rng(2024, StreamTag::Property);
    const int n = 200000;
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 z = rng.normal2(uint64_t(i), 0);
        sx += z.x;
        sy += z.y;
        sxx += z.x * z.x;
        syy += z.y * z.y;
        sxy += z.x * z.y;
    }
    const double inv = 1.0 / n;
    // mean ~ N(0, 1/n): 4 standard errors.
    const double se = 4.0 / std::sqrt(double(n));
    CHECK(std::abs(sx * inv) < se);
    CHECK(std::abs(sy * inv) < se);
    // var ~ 1 with s.e. sqrt(2/n); cov ~ 0 with s.e. 1/sqrt(n).
    CHECK(std::abs(sxx * inv - 1.0) < 4.0 * std::sqrt(2.0 * inv));
    CHECK(std::abs(syy * inv - 1.0) < 4.0 * std::sqrt(2.0 * inv));
    CHECK(std::abs(sxy * inv) < se);
}
