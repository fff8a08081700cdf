#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "kslab/kernel.hpp"
#include "kslab/kernel_sum.hpp"
#include "kslab/rng.hpp"

using namespace kslab;

namespace {

struct Cloud {
    std::vector<Vec2> targets;
    std::vector<Vec2> sources;
    std::vector<double> weights;
};

Cloud randomCloud(uint64_t seed, int nt, int ns) {
    const CounterRng rng(seed, StreamTag::Property);
    Cloud c;
    for (int i = 0; i < nt; ++i) c.targets.push_back(3.0 * rng.normal2(uint64_t(i), 0));
    for (int j = 0; j < ns; ++j) {
        c.sources.push_back(3.0 * rng.normal2(uint64_t(j), 1));
        c.weights.push_back(0.1 + rng.uniform2(uint64_t(j), 2)[0]);
    }
    // Exercise the coincidence path: one target sits exactly on a source.
    if (nt > 0 && ns > 0) c.targets[0] = c.sources[ns / 2];
    return c;
}

} // namespace

TEST_CASE("scalar backend reproduces the direct pairwise loop") {
    const Cloud c = randomCloud(1, 33, 47);
    const double eps = 0.05;
    const auto out = kernelSumAt(c.targets, c.sources, c.weights, eps, scalarBackend());
    REQUIRE(out.size() == c.targets.size());
    for (std::size_t i = 0; i < c.targets.size(); ++i) {
        Vec2 acc{0.0, 0.0};
        for (std::size_t j = 0; j < c.sources.size(); ++j)
            acc = acc + c.weights[j] * evalKEps(c.targets[i] - c.sources[j], eps);
        CHECK(std::abs(out[i].x - acc.x) <= 1e-13 * (1.0 + std::abs(acc.x)));
        CHECK(std::abs(out[i].y - acc.y) <= 1e-13 * (1.0 + std::abs(acc.y)));
    }
}

TEST_CASE("backend registry exposes scalar and resolves names") {
    CHECK(backendByName("scalar") == &scalarBackend());
    CHECK(backendByName("nope") == nullptr);
    const PairBackend& active = activeBackend();
    CHECK(backendByName(active.name) == &active);
}

TEST_CASE("avx2 backend agrees with scalar when present") {
    const PairBackend* avx2 = backendByName("avx2");
    if (avx2 == nullptr) return; // build without AVX2 support

    for (const uint64_t seed : {2ull, 3ull, 4ull}) {
        // Sizes straddle the vector width so remainder lanes are covered.
        const int nt = 1 + int(seed) * 7;
        const int ns = 3 + int(seed) * 11;
        const Cloud c = randomCloud(seed, nt, ns);
        const double eps = 0.01 * double(seed);

        const auto a = kernelSumAt(c.targets, c.sources, c.weights, eps, scalarBackend());
        const auto b = kernelSumAt(c.targets, c.sources, c.weights, eps, *avx2);
        double mass = 0.0;
        for (const double w : c.weights) mass += w;
        const double scale = mass / (4.0 * kPi * std::sqrt(eps));
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::abs(a[i].x - b[i].x) <= 1e-12 * scale);
            CHECK(std::abs(a[i].y - b[i].y) <= 1e-12 * scale);
        }

        // The ball counter avoids fused ops entirely: bit-identical counts.
        for (const double radius : {0.5, 2.0, 10.0}) {
            const auto ca = ballCountAt(c.targets, c.sources, radius, scalarBackend());
            const auto cb = ballCountAt(c.targets, c.sources, radius, *avx2);
            REQUIRE(ca.size() == cb.size());
            for (std::size_t i = 0; i < ca.size(); ++i) CHECK(ca[i] == cb[i]);
        }
    }
}

TEST_CASE("ballCount counts open balls exactly") {
    std::vector<Vec2> targets{{0.0, 0.0}};
    std::vector<Vec2> sources{{0.0, 0.0}, {1.0, 0.0}, {0.0, 2.0}, {3.0, 0.0}};
    const auto n = ballCountAt(targets, sources, 2.0, scalarBackend());
    CHECK(n[0] == 2); // strict inequality: the distance-2 source is out
}
