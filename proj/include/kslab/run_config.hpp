#pragma once

// JSON run configuration: one solver block, initial mixture, diagnostics
// knobs, and the list of inequality checks to evaluate after the run.
// Parsing is strict: unknown keys, missing required fields, and
// hypothesis-violating combinations are ConfigErrors before anything runs.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "kslab/grid_solver.hpp"
#include "kslab/initial_data.hpp"
#include "kslab/particle_solver.hpp"
#include "kslab/series.hpp"

namespace kslab {

struct CheckTolerances {
    double estimegammaRel = 0.05;     // grid default; particle runs want ~0.20
    double secondMomentBracket = 1.0; // absolute slope slack on each bracket side
    double secondMomentLaw = 5.0;     // absolute slope deviation from the exact law
    double concentrationFloor = 0.0;  // required min of M - maxBallMass
};

struct RunConfig {
    enum class Solver { Particles, Grid };

    Solver solver = Solver::Particles;
    InitialMeasure initial;
    double epsilon = 0.1;
    double T = 1.0;
    std::uint64_t seed = 0;
    std::string output = "out";

    ParticleConfig particles; // eps/T/seed stamped from the top-level fields
    GridConfig grid;

    DiagnosticsConfig diagnostics;
    std::vector<std::string> checks;
    CheckTolerances tolerances;
};

RunConfig parseRunConfig(const nlohmann::json& j);
RunConfig loadRunConfig(const std::string& path);

// Echo used by the manifest; parseRunConfig(toJson(rc)) round-trips.
nlohmann::json toJson(const RunConfig& rc);

// Cross-field rules (solver block consistency, check hypotheses). Called by
// parseRunConfig; exposed for configs assembled in code.
void validateRunConfig(const RunConfig& rc);

} // namespace kslab
