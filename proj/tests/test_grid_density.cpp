#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "kslab/grid_density.hpp"
#include "kslab/rng.hpp"

using namespace kslab;

namespace {

GridDensity randomGrid(uint64_t seed, int n, double L) {
    const CounterRng rng(seed, StreamTag::Property);
    GridDensity g;
    g.halfWidth = L;
    g.cellsPerSide = n;
    g.values.resize(std::size_t(n) * n);
    for (std::size_t i = 0; i < g.values.size(); ++i)
        g.values[i] = rng.uniform2(i, 0)[0];
    return g;
}

} // namespace

TEST_CASE("grid functionals match a brute-force double loop on small grids") {
    const GridDensity g = randomGrid(5, 6, 1.3);
    const double h = g.cellSize();
    const double cellMass = h * h;

    double mass = 0.0, m2 = 0.0;
    Vec2 com{0.0, 0.0};
    for (int iy = 0; iy < g.cellsPerSide; ++iy)
        for (int ix = 0; ix < g.cellsPerSide; ++ix) {
            const double m = cellMass * g.values[std::size_t(iy) * g.cellsPerSide + ix];
            const Vec2 c = g.cellCenter(ix, iy);
            mass += m;
            com = com + m * c;
            m2 += m * c.norm2();
        }
    com = (1.0 / mass) * com;

    CHECK(g.mass() == doctest::Approx(mass).epsilon(1e-13));
    CHECK(totalMass(g) == doctest::Approx(mass).epsilon(1e-13));
    CHECK(centerOfMass(g).x == doctest::Approx(com.x).epsilon(1e-12));
    CHECK(centerOfMass(g).y == doctest::Approx(com.y).epsilon(1e-12));
    CHECK(momentGamma(g, 2.0, {0.0, 0.0}) == doctest::Approx(m2).epsilon(1e-12));
}

TEST_CASE("fft pair row equals the brute-force oracle") {
    for (const uint64_t seed : {1ull, 2ull, 3ull}) {
        const int n = 4 + int(seed) * 3;
        const GridDensity g = randomGrid(seed, n, 0.8 + 0.4 * double(seed));
        const double gamma = 0.4 + 0.5 * double(seed % 3);
        const double eps = 0.05 * double(seed + 1);

        const PairRow fast = pairRow(g, gamma, eps);
        const PairRow slow = pairRowBrute(g, gamma, eps);
        const auto close = [](double a, double b) {
            return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b));
        };
        CHECK(close(fast.sGamma, slow.sGamma));
        CHECK(close(fast.dGamma.value, slow.dGamma.value));
        CHECK(close(fast.logPair1.value, slow.logPair1.value));
        CHECK(close(fast.logPair2.value, slow.logPair2.value));
        CHECK(close(fast.ccc1.value, slow.ccc1.value));
        CHECK(fast.dGamma.infinite == slow.dGamma.infinite);
    }
}

TEST_CASE("fft maxBallMass equals the brute-force oracle") {
    for (const uint64_t seed : {4ull, 9ull}) {
        const GridDensity g = randomGrid(seed, 10, 1.0);
        const double h = g.cellSize();
        for (const double nu : {0.4 * h, 1.7 * h, 5.0 * h}) {
            const double fast = maxBallMass(g, nu);
            const double slow = maxBallMassBrute(g, nu);
            CHECK(std::abs(fast - slow) <= 1e-10 * (1.0 + slow));
        }
    }
}

TEST_CASE("coarsen preserves mass and center of mass") {
    const GridDensity g = randomGrid(13, 12, 2.0);
    const CoarseAtoms ca = coarsen(g, 4);
    CHECK(ca.pos.size() == 16);
    double mass = 0.0;
    Vec2 com{0.0, 0.0};
    for (std::size_t i = 0; i < ca.pos.size(); ++i) {
        mass += ca.mass[i];
        com = com + ca.mass[i] * ca.pos[i];
    }
    com = (1.0 / mass) * com;
    CHECK(mass == doctest::Approx(g.mass()).epsilon(1e-13));
    CHECK(com.x == doctest::Approx(centerOfMass(g).x).epsilon(1e-12));
    CHECK(com.y == doctest::Approx(centerOfMass(g).y).epsilon(1e-12));
}

TEST_CASE("grid validation rejects bad states") {
    GridDensity g;
    g.halfWidth = 1.0;
    g.cellsPerSide = 4;
    g.values.assign(15, 0.0); // wrong size
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);

    g.values.assign(16, 0.0);
    g.values[3] = -1.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);

    g.values[3] = 0.0;
    g.halfWidth = 0.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
