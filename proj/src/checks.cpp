#include "kslab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kslab/errors.hpp"
#include "kslab/kernel.hpp"

namespace kslab {

namespace {

// JSON has no inf/nan literals; keep the schema stable with strings.
nlohmann::json jsonNumber(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

InequalityReport makeReport(std::string name, double lhs, double rhs, double tolerance,
                            nlohmann::json context) {
    InequalityReport rep;
    rep.name = std::move(name);
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.slack = rhs - lhs;
    rep.tolerance = tolerance;
    rep.pass = std::isfinite(lhs) && !std::isnan(rhs) && rep.slack >= -tolerance;
    rep.context = std::move(context);
    return rep;
}

std::vector<double> column(const DiagnosticSeries& s, double DiagnosticRow::* field) {
    std::vector<double> v;
    v.reserve(s.rows.size());
    for (const auto& r : s.rows) v.push_back(r.*field);
    return v;
}

std::vector<double> columnExt(const DiagnosticSeries& s, ExtReal DiagnosticRow::* field) {
    std::vector<double> v;
    v.reserve(s.rows.size());
    for (const auto& r : s.rows) v.push_back((r.*field).asDouble());
    return v;
}

std::vector<double> times(const DiagnosticSeries& s) {
    return column(s, &DiagnosticRow::t);
}

} // namespace

nlohmann::json toJson(const InequalityReport& rep) {
    return {{"name", rep.name},     {"lhs", jsonNumber(rep.lhs)},
            {"rhs", jsonNumber(rep.rhs)}, {"slack", jsonNumber(rep.slack)},
            {"pass", rep.pass},     {"tolerance", jsonNumber(rep.tolerance)},
            {"context", rep.context}};
}

double leastSquaresSlope(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 2)
        throw ConfigError("leastSquaresSlope: need >= 2 matching samples");
    const double n = double(t.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
    }
    const double mt = st / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sxx += (t[i] - mt) * (t[i] - mt);
        sxy += (t[i] - mt) * (y[i] - my);
    }
    if (sxx == 0.0) throw ConfigError("leastSquaresSlope: all abscissae coincide");
    return sxy / sxx;
}

double trapezoidIntegral(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.empty())
        throw ConfigError("trapezoidIntegral: need matching nonempty samples");
    double acc = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i)
        acc += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
    return acc;
}

double estimegammaConstant(double M, double gamma) {
    if (!(M > 0.0) || M >= kEightPi)
        throw ConfigError("estimegamma: requires subcritical mass M < 8 pi");
    const double lower = M / (4.0 * kPi);
    if (!(gamma > lower && gamma < 2.0))
        throw ConfigError("estimegamma: gamma must lie in (M/(4 pi), 2) = (" +
                          std::to_string(lower) + ", 2)");
    return 4.0 * M / (2.0 * gamma * (gamma - lower));
}

InequalityReport checkEstimegamma(const DiagnosticSeries& s, double gamma, double M,
                                  double relTol) {
    s.validate();
    const double c = estimegammaConstant(M, gamma);
    const double lhs = trapezoidIntegral(times(s), columnExt(s, &DiagnosticRow::dGamma));
    const double rhs = c * s.rows.back().momentGammaOrigin;
    return makeReport("estimegamma", lhs, rhs, relTol * std::abs(rhs),
                      {{"constant", c},
                       {"gamma", gamma},
                       {"mass", M},
                       {"final_moment_gamma", s.rows.back().momentGammaOrigin},
                       {"rel_tolerance", relTol}});
}

std::vector<InequalityReport> checkSecondMoment(const DiagnosticSeries& s, double M,
                                                double bracketTol, double lawTol) {
    s.validate();
    if (s.rows.size() < 3)
        throw ConfigError("checkSecondMoment: need at least 3 rows");
    const double slope = leastSquaresSlope(times(s), column(s, &DiagnosticRow::m2));
    const double lower = 4.0 * M - M * M / kTwoPi;
    const double upper = 4.0 * M;
    const double law = 4.0 * M * (1.0 - M / kEightPi);
    nlohmann::json ctx = {{"slope", slope}, {"bracket_lower", lower},
                          {"bracket_upper", upper}, {"law_slope", law}, {"mass", M}};
    std::vector<InequalityReport> out;
    out.push_back(makeReport("second_moment_bracket_lower", lower, slope, bracketTol, ctx));
    out.push_back(makeReport("second_moment_bracket_upper", slope, upper, bracketTol, ctx));
    out.push_back(makeReport("second_moment_exact_law", std::abs(slope - law), lawTol, 0.0, ctx));
    return out;
}

std::vector<InequalityReport> checkCriticalLogmoment(const DiagnosticSeries& s,
                                                     const InitialMeasure& f0) {
    s.validate();
    if (f0.regime() != MassRegime::Critical)
        throw ConfigError("checkCriticalLogmoment: data is not critical (M != 8 pi)");
    if (!f0.criticalAdmissible())
        throw ConfigError("checkCriticalLogmoment: inadmissible data (an atom carries >= 8 pi)");
    const double li = trapezoidIntegral(times(s), columnExt(s, &DiagnosticRow::logPair2));
    const double ci = trapezoidIntegral(times(s), columnExt(s, &DiagnosticRow::ccc1));
    std::vector<InequalityReport> out;
    out.push_back(makeReport("critical_logpair2_integral", li, li, 0.0,
                             {{"informational", true}}));
    out.push_back(makeReport("critical_companion_integral", ci, ci, 0.0,
                             {{"informational", true}}));
    return out;
}

InequalityReport checkConcentration(const DiagnosticSeries& s, double nu, double floor) {
    s.validate();
    if (!(nu > 0.0)) throw ConfigError("checkConcentration: nu must be positive");
    double zmin = std::numeric_limits<double>::infinity();
    double zfinal = 0.0;
    for (const auto& r : s.rows) {
        zfinal = r.mass - r.maxBallMass;
        zmin = std::min(zmin, zfinal);
    }
    return makeReport("concentration_floor", floor, zmin, 0.0,
                      {{"nu", nu}, {"zeta_min", zmin}, {"zeta_final", zfinal}});
}

InequalityReport checkCompaciteMoment(const DiagnosticSeries& s, double gamma, double C) {
    s.validate();
    if (!(gamma > 0.0 && gamma <= 2.0))
        throw ConfigError("checkCompaciteMoment: gamma must lie in (0, 2]");
    const double M = s.meta.mass;
    const double m0 = s.rows.front().momentGammaOrigin;
    double worst = std::numeric_limits<double>::infinity();
    double lhsAt = 0.0, rhsAt = 0.0, tAt = 0.0;
    for (const auto& r : s.rows) {
        const double rhs = 2.0 * m0 + C * (M + M * M) * (1.0 + r.t);
        const double slack = rhs - r.momentGammaOrigin;
        if (slack < worst) {
            worst = slack;
            lhsAt = r.momentGammaOrigin;
            rhsAt = rhs;
            tAt = r.t;
        }
    }
    return makeReport("compacite_moment_envelope", lhsAt, rhsAt, 0.0,
                      {{"gamma", gamma}, {"C", C}, {"moment0", m0}, {"worst_t", tAt}});
}

std::vector<InequalityReport> checkLogmomentSweep(const std::vector<SweepPoint>& pts,
                                                  double ratioMax, double ccc1Slack) {
    if (pts.size() < 2) throw ConfigError("checkLogmomentSweep: need >= 2 sweep points");
    std::vector<InequalityReport> out;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        if (!(pts[k].eps < pts[k - 1].eps))
            throw ConfigError("checkLogmomentSweep: eps values must decrease along the sweep");
        const double denom = std::abs(pts[k - 1].logPair2Integral);
        const double ratio = denom > 0.0 ? pts[k].logPair2Integral / denom
                                         : (pts[k].logPair2Integral > 0.0
                                                ? std::numeric_limits<double>::infinity()
                                                : 1.0);
        nlohmann::json ctx = {{"eps_from", pts[k - 1].eps}, {"eps_to", pts[k].eps}};
        out.push_back(makeReport("logpair2_growth_" + std::to_string(k), ratio, ratioMax, 0.0, ctx));
        out.push_back(makeReport("companion_nonincreasing_" + std::to_string(k),
                                 pts[k].ccc1Integral, (1.0 + ccc1Slack) * pts[k - 1].ccc1Integral,
                                 0.0, ctx));
    }
    return out;
}

} // namespace kslab
