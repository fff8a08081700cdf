#pragma once

// Drivers behind the CLI subcommands: execute one configured run with its
// checks, write the output directory (diagnostics CSV, snapshot, manifest,
// reports), run property suites, and run axis sweeps. Exit codes: 0 ok,
// 2 usage/config, 3 runtime solver failure, 4 diagnostic hard failure.

#include <cstdint>
#include <string>
#include <vector>

#include "kslab/checks.hpp"
#include "kslab/run_config.hpp"

namespace kslab {

struct RunArtifacts {
    DiagnosticSeries series;
    std::vector<InequalityReport> reports;
    bool anyCheckFailed = false;
    bool boxTruncated = false;
    WeightedEnsemble finalParticles; // populated for the particle solver
    GridDensity finalGrid;           // populated for the grid solver
};

RunArtifacts executeRun(const RunConfig& rc);
void writeRunOutputs(const RunConfig& rc, const RunArtifacts& ra);

struct SuiteResult {
    bool pass = true;
    std::vector<std::string> lines; // one human-readable line per property
};

// suite in {kernels, geometry, measures, all}; deterministic in (samples, seed).
SuiteResult runCheckSuite(const std::string& suite, std::int64_t samples, std::uint64_t seed);

int cmdSimulate(const std::string& configPath);
int cmdCheck(const std::string& suite, std::int64_t samples, std::uint64_t seed);
int cmdSweep(const std::string& configPath, const std::string& axis,
             const std::vector<double>& values);

} // namespace kslab
