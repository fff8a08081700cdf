#pragma once

// Deterministic finite-volume discretization on [-L,L]^2: upwind advection
// by the self-consistent velocity U = K_eps * f, central diffusion, zero
// total flux through the box boundary. The velocity is a discrete
// convolution evaluated either by direct summation or by zero-padded FFT;
// both routes are exposed and agree to rounding.

#include <complex>
#include <cstdint>
#include <vector>

#include "kslab/fft_conv.hpp"
#include "kslab/grid_density.hpp"
#include "kslab/initial_data.hpp"
#include "kslab/series.hpp"
#include "kslab/vec2.hpp"

namespace kslab {

struct GridConfig {
    enum class Conv { DirectSum, FftPadded };

    double L = 8.0;
    int n = 128;
    double eps = 0.1;
    double dt = 0.0; // 0 = adaptive: cflSafety * cflLimit each step
    double T = 1.0;
    double cflSafety = 0.4;
    int sampleEvery = 10;
    Conv convolutionMethod = Conv::FftPadded;
    bool driftEnabled = true; // false runs the pure heat flow (order oracle)

    void validate() const;
};

// Normal velocity samples on the staggered faces.
struct FaceVelocity {
    int n = 0;
    std::vector<double> ux; // (n+1) x n, idx = iy * (n+1) + ix
    std::vector<double> uy; // n x (n+1), idx = iy * n + ix

    double maxAbs() const;
};

// U(face) = h^2 sum_cells K_eps(face - cellCenter) * value(cell).
FaceVelocity velocityField(const GridDensity& g, double eps, GridConfig::Conv method);

// Largest stable step for this velocity field: min(h^2/4, h / (2 max|U|)).
double cflLimit(const GridDensity& g, const FaceVelocity& u);

// One conservative update. Throws SolverError when dt exceeds cflLimit or a
// cell goes negative beyond rounding (1e-13 relative); smaller negative
// values clamp to zero.
GridDensity fvStep(const GridDensity& g, const FaceVelocity& u, double dt);

// Weak-form residual instrumentation sampled along a run: time series of the
// terms entering the moment identity and the pair identity, from which the
// convergence probes assemble their residuals.
struct ResidualSample {
    double t = 0.0;
    double phiMom = 0.0;    // integral of phi f, phi = exp(-|x|^2/2)
    double lapTerm = 0.0;   // integral of (Delta phi) f
    double driftTerm = 0.0; // integral of grad phi . U f
    double pairPhi = 0.0;   // double integral of chi(|x-y|^2) f f
    double pairOp = 0.0;    // same with chi' + r^2 chi''
    double tripleTerm = 0.0; // 4 * integral of (W . U) f, W = conv(chi' (.) id)
};

struct ResidualReport {
    double res1 = 0.0;   // |phiMom(T) - phiMom(0) - trapz(lapTerm + driftTerm)|
    double res2 = 0.0;   // |pairPhi(T) - pairPhi(0) - trapz(8 pairOp + tripleTerm)|
    double scale1 = 1.0; // max |phiMom|
    double scale2 = 1.0; // max |pairPhi|
};
ResidualReport residualReport(const std::vector<ResidualSample>& samples);

struct GridRunResult {
    DiagnosticSeries series;
    GridDensity finalDensity;
    bool boxTruncated = false; // boundary ring ever held > 1e-6 of the mass
    std::uint64_t steps = 0;
    std::vector<ResidualSample> residuals; // empty unless requested
};

DiagnosticRow rowFromGrid(const GridDensity& g, double t, double eps,
                          const DiagnosticsConfig& diag);

GridRunResult runGrid(const GridConfig& cfg, const InitialMeasure& f0,
                      const DiagnosticsConfig& diag, bool collectResiduals = false);

} // namespace kslab
