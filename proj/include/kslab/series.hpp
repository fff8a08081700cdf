#pragma once

// Time-stamped record of the diagnostic functionals. CSV serialization is
// fixed to the 11-column header below with shortest round-trip number
// formatting. Rows additionally carry in-memory fields (gamma-moment about
// the origin, critical companion term) consumed by the inequality checks
// but not serialized.

#include <cstdint>
#include <string>
#include <vector>

#include "kslab/ensemble.hpp"
#include "kslab/vec2.hpp"

namespace kslab {

inline constexpr const char* kDiagnosticsCsvHeader =
    "t,mass,com_x,com_y,m2,s_gamma,d_gamma,logpair1,logpair2,max_ball_mass,g_triple";

struct DiagnosticRow {
    double t = 0.0;
    double mass = 0.0;
    Vec2 com{0.0, 0.0};
    double m2 = 0.0; // second moment about the origin
    double sGamma = 0.0;
    ExtReal dGamma;
    ExtReal logPair1;
    ExtReal logPair2;
    double maxBallMass = 0.0;
    double gTriple = 0.0;

    // not serialized
    double momentGammaOrigin = 0.0;
    ExtReal ccc1;
};

struct SeriesMeta {
    double gamma = 1.5;
    double eps = 1.0;
    double nu = 0.1;
    double mass = 0.0;
    std::uint64_t seed = 0;
};

// Knobs for assembling rows, shared by both solvers. The triple functional
// is cubic in the atom count, so particle rows evaluate it on the leading
// min(N, gTripleSubsample) particles reweighted to full mass, and grid rows
// on gTripleCoarse^2 mass-weighted block centroids. Either set to 0 disables
// the column (NaN).
struct DiagnosticsConfig {
    double gamma = 1.5;
    double nu = 0.1;
    int gTripleSubsample = 128;
    int gTripleCoarse = 8;
};

struct DiagnosticSeries {
    SeriesMeta meta;
    std::vector<DiagnosticRow> rows;

    void validate() const; // t strictly increasing, at least one row
    std::string toCsv() const;
};

// Shortest representation that round-trips through a double; "inf" for the
// flagged infinities.
std::string formatDouble(double v);

} // namespace kslab
