#pragma once

// Cell-averaged density on the square box [-L,L]^2, the finite-volume state.
// For measure functionals the cells act as atoms of mass h^2 * value placed
// at cell centers (midpoint quadrature), diagonal displacement excluded, so
// grid and particle diagnostics share one convention. The production path
// evaluates pair functionals through an FFT autocorrelation over cell
// displacements; a brute-force double loop is kept as the test oracle.
// Displacements are always formed as (integer index difference) * h so both
// paths agree on knife-edge predicates.

#include <vector>

#include "kslab/ensemble.hpp"
#include "kslab/vec2.hpp"

namespace kslab {

struct GridDensity {
    double halfWidth = 1.0; // L
    int cellsPerSide = 4;   // n
    std::vector<double> values; // row-major, idx = iy * n + ix, mass / area

    double cellSize() const { return 2.0 * halfWidth / cellsPerSide; }
    Vec2 cellCenter(int ix, int iy) const {
        const double h = cellSize();
        return {-halfWidth + (ix + 0.5) * h, -halfWidth + (iy + 0.5) * h};
    }
    double mass() const;
    void validate() const;
};

double momentGamma(const GridDensity& g, double gamma, const Vec2& center);
double pairMoment(const GridDensity& g, double gamma);
ExtReal pairDissipation(const GridDensity& g, double gamma);
LogPairMoments logPairMoments(const GridDensity& g);
ExtReal ccc1Term(const GridDensity& g, double eps);
double maxBallMass(const GridDensity& g, double radius);
Vec2 centerOfMass(const GridDensity& g);
double totalMass(const GridDensity& g);

// FFT-autocorrelation production path for all pair columns at once.
PairRow pairRow(const GridDensity& g, double gamma, double eps);

// O(n^4) oracles for tests.
PairRow pairRowBrute(const GridDensity& g, double gamma, double eps);
double maxBallMassBrute(const GridDensity& g, double radius);

// Block-aggregated atomic view (mass-weighted centroids of coarse blocks,
// block masses kept individually), used for the g_triple diagnostic column
// on grids.
struct CoarseAtoms {
    std::vector<Vec2> pos;
    std::vector<double> mass;
};
CoarseAtoms coarsen(const GridDensity& g, int blocksPerSide);

} // namespace kslab
