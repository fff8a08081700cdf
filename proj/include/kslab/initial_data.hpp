#pragma once

// Symbolic initial measures: atom + isotropic-Gaussian mixtures. These admit
// closed-form Gaussian mollification (heat smoothing at scale eps), exact
// sampling, and exact box-capture accounting for the grid projection.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kslab/ensemble.hpp"
#include "kslab/grid_density.hpp"
#include "kslab/vec2.hpp"

namespace kslab {

struct Atom {
    Vec2 pos;
    double mass = 0.0;
};

struct GaussianBlob {
    Vec2 mean;
    double var = 1.0; // isotropic variance sigma^2
    double mass = 0.0;
};

enum class MassRegime { Subcritical, Critical, Supercritical };

struct InitialMeasure {
    std::vector<Atom> atoms;
    std::vector<GaussianBlob> gaussians;

    double mass() const;
    Vec2 centerOfMass() const;
    double m2(const Vec2& center) const; // closed form
    // |M - 8 pi| <= 1e-9 * 8 pi classifies as critical
    MassRegime regime() const;
    // every atom mass < 8 pi (criticality admissibility hypothesis)
    bool criticalAdmissible() const;
    void validate() const;
};

class CaptureError : public std::runtime_error {
  public:
    CaptureError(double fraction, std::string msg)
        : std::runtime_error(std::move(msg)), capturedFraction(fraction) {}
    double capturedFraction;
};

// Density of f0 convolved with the Gaussian of variance eps, evaluated at x.
double mollifiedDensity(const InitialMeasure& f0, double eps, const Vec2& x);

// Exact fraction of the mollified mass inside [-L,L]^2.
double boxCaptureFraction(const InitialMeasure& f0, double eps, double L);

// N i.i.d. samples of the mollified measure, weight M/N, reproducible by
// (seed, sample index).
WeightedEnsemble sampleMollified(const InitialMeasure& f0, double eps, int N,
                                 std::uint64_t seed);

// Mollified density at cell centers, rescaled to carry mass M exactly.
// Throws CaptureError when the box captures less than 1 - 1e-6 of the mass.
GridDensity projectToGrid(const InitialMeasure& f0, double eps, double L, int n);

} // namespace kslab
