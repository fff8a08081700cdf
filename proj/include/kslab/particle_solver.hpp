#pragma once

// Interacting-particle discretization: N equal-weight particles, pairwise
// regularized attraction, Euler-Maruyama time stepping with counter-based
// noise (stream = (seed, step, particle)), so runs are reproducible and
// restartable at any step index.

#include <cstdint>
#include <vector>

#include "kslab/ensemble.hpp"
#include "kslab/initial_data.hpp"
#include "kslab/rng.hpp"
#include "kslab/series.hpp"
#include "kslab/vec2.hpp"

namespace kslab {

struct ParticleConfig {
    enum class Force { Direct, CellList };

    int N = 1000;
    double eps = 0.1;
    double dt = 0.0; // 0 = use dtMax(eps, M)
    double T = 1.0;
    std::uint64_t seed = 0;
    int sampleEvery = 10;
    Force forceMethod = Force::Direct;
    double cutoff = 1.0;     // cell-list interaction radius
    bool dtOverride = false; // explicitly accept dt above the stability cap

    void validate(double totalMass) const;
};

// Step-size cap min(0.1, 4 pi sqrt(eps) / (10 M)): with the field bound
// M/(4 pi sqrt(eps)) this keeps the worst-case drift displacement per step
// at or below 1/10.
double dtMax(double eps, double totalMass);

// b_i = w * sum_j K_eps(X_i - X_j); the i = j term vanishes.
std::vector<Vec2> driftField(const WeightedEnsemble& e, double eps);

// Same field with pairs beyond `cutoff` dropped. The omitted tail is bounded
// by M / (2 pi cutoff) uniformly in the configuration.
std::vector<Vec2> driftFieldCellList(const WeightedEnsemble& e, double eps, double cutoff);

struct StepHooks {
    bool drift = true;
    bool noise = true;
};

struct ParticleState {
    WeightedEnsemble ensemble;
    double t = 0.0;
    std::uint64_t stepIndex = 0; // noise counter; increments once per step
};

class ParticleStepper {
  public:
    ParticleStepper(double eps, std::uint64_t seed, ParticleConfig::Force method, double cutoff);

    // X_i += b_i dt + sqrt(2 dt) xi_i and advances (t, stepIndex).
    void step(ParticleState& s, double dt, const StepHooks& hooks = {}) const;

  private:
    double eps_;
    double cutoff_;
    ParticleConfig::Force method_;
    CounterRng noise_;
};

DiagnosticRow rowFromEnsemble(const WeightedEnsemble& e, double t, double eps,
                              const DiagnosticsConfig& diag);

struct ParticleRunResult {
    DiagnosticSeries series;
    ParticleState finalState;
};

ParticleRunResult runParticles(const ParticleConfig& cfg, const InitialMeasure& f0,
                               const DiagnosticsConfig& diag);

} // namespace kslab
