#pragma once

// Inequality checks on diagnostic series: each is a pure function of its
// inputs producing an InequalityReport (pass iff slack = rhs - lhs stays
// above -tolerance). Reports serialize to JSON as
// {name, lhs, rhs, slack, pass, tolerance, context}.

#include <string>
#include <vector>

#include <json.hpp>

#include "kslab/initial_data.hpp"
#include "kslab/series.hpp"

namespace kslab {

struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; // rhs - lhs
    double tolerance = 0.0;
    bool pass = false;
    nlohmann::json context;
};

nlohmann::json toJson(const InequalityReport& rep);

// Least-squares slope of y against t; needs >= 2 distinct abscissae.
double leastSquaresSlope(const std::vector<double>& t, const std::vector<double>& y);
// Trapezoid rule on sampled rows.
double trapezoidIntegral(const std::vector<double>& t, const std::vector<double>& y);

// 4M / (2 gamma (gamma - M/(4 pi))), the dissipation-estimate constant;
// throws when gamma leaves (M/(4 pi), 2) or M >= 8 pi.
double estimegammaConstant(double M, double gamma);

// integral_0^T dGamma dt <= estimegammaConstant * final gamma-moment about
// the origin, with relative tolerance relTol on the rhs.
InequalityReport checkEstimegamma(const DiagnosticSeries& s, double gamma, double M,
                                  double relTol);

// Least-squares m2 slope against the drift bracket [4M - M^2/(2 pi), 4M]
// (tolerance bracketTol on each side) and against the exact unregularized
// law 4M(1 - M/(8 pi)) (absolute tolerance lawTol).
std::vector<InequalityReport> checkSecondMoment(const DiagnosticSeries& s, double M,
                                                double bracketTol, double lawTol);

// Time integrals of logPair2 and of the companion term; requires critical
// admissible data. The reports are informational (pass unless infinite);
// boundedness across an eps sweep is checked by checkLogmomentSweep.
std::vector<InequalityReport> checkCriticalLogmoment(const DiagnosticSeries& s,
                                                     const InitialMeasure& f0);

// Running minimum of zeta(t) = M - maxBallMass(t) against a floor.
InequalityReport checkConcentration(const DiagnosticSeries& s, double nu, double floor);

// moment_gamma(t) <= 2 * moment_gamma(0) + C (M + M^2)(1 + t) for every row,
// anchored at the realized row-0 moment. C was calibrated once on the
// reference subcritical runs and is frozen here.
inline constexpr double kCompaciteC = 8.0;
InequalityReport checkCompaciteMoment(const DiagnosticSeries& s, double gamma,
                                      double C = kCompaciteC);

// One eps point of a halving sweep, already reduced to its integrals.
struct SweepPoint {
    double eps = 0.0;
    double logPair2Integral = 0.0;
    double ccc1Integral = 0.0;
    double m2Slope = 0.0;
};

// Sweep runs from large eps to small (each successive eps smaller). The
// logPair2 integral may grow by at most ratioMax per halving; the companion
// integral must be nonincreasing along the sweep within relative slack.
std::vector<InequalityReport> checkLogmomentSweep(const std::vector<SweepPoint>& pts,
                                                  double ratioMax = 1.5,
                                                  double ccc1Slack = 0.10);

} // namespace kslab
