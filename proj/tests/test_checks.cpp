#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "kslab/checks.hpp"
#include "kslab/errors.hpp"
#include "kslab/kernel.hpp"

using namespace kslab;

namespace {

DiagnosticSeries linearM2Series(double M, double slope, int rows, double dt) {
    DiagnosticSeries s;
    s.meta.mass = M;
    for (int i = 0; i < rows; ++i) {
        DiagnosticRow r;
        r.t = i * dt;
        r.mass = M;
        r.m2 = 1.0 + slope * r.t;
        s.rows.push_back(r);
    }
    return s;
}

} // namespace

TEST_CASE("slope and trapezoid helpers") {
    CHECK(leastSquaresSlope({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0}) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(trapezoidIntegral({0.0, 1.0, 3.0}, {0.0, 2.0, 2.0}) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK_THROWS_AS(leastSquaresSlope({1.0}, {1.0}), ConfigError);
    CHECK_THROWS_AS(leastSquaresSlope({1.0, 1.0}, {0.0, 2.0}), ConfigError);
}

TEST_CASE("dissipation-estimate constant and its pole") {
    const double M = 4.0 * kPi;
    // 4M / (2 gamma (gamma - M/(4 pi))) at gamma = 3/2: 16 pi / (3 * 1/2).
    const double independent = 16.0 * kPi / (3.0 * 0.5);
    CHECK(estimegammaConstant(M, 1.5) == doctest::Approx(independent).epsilon(1e-14));
    CHECK(estimegammaConstant(M, 1.5) == doctest::Approx(33.510321638291127877).epsilon(1e-14));

    // gamma at or below M/(4 pi) = 1 violates the hypothesis; the error
    // names the admissible interval.
    bool threw = false;
    try {
        estimegammaConstant(M, 1.0);
    } catch (const ConfigError& e) {
        threw = true;
        CHECK(std::string(e.what()).find("(1.000000, 2)") != std::string::npos);
    }
    CHECK(threw);
    CHECK_THROWS_AS(estimegammaConstant(M, 2.0), ConfigError);
    CHECK_THROWS_AS(estimegammaConstant(8.0 * kPi, 1.9), ConfigError);

    // Near the pole the constant blows up.
    CHECK(estimegammaConstant(M, 1.0 + 1e-9) > 1e8);
}

TEST_CASE("estimegamma check integrates the dissipation column") {
    const double M = 4.0 * kPi, gamma = 1.5;
    DiagnosticSeries s;
    s.meta.mass = M;
    for (int i = 0; i <= 10; ++i) {
        DiagnosticRow r;
        r.t = 0.1 * i;
        r.mass = M;
        r.dGamma.value = 2.0;
        r.momentGammaOrigin = 1.0;
        s.rows.push_back(r);
    }
    const InequalityReport rep = checkEstimegamma(s, gamma, M, 0.05);
    CHECK(rep.lhs == doctest::Approx(2.0).epsilon(1e-13)); // trapz of constant 2 over [0,1]
    CHECK(rep.rhs == doctest::Approx(estimegammaConstant(M, gamma)).epsilon(1e-13));
    CHECK(rep.tolerance == doctest::Approx(0.05 * rep.rhs).epsilon(1e-13));
    CHECK(rep.pass);
    CHECK(rep.slack == rep.rhs - rep.lhs);

    // t = 0 only: lhs = 0, passes trivially.
    DiagnosticSeries s0;
    s0.meta.mass = M;
    DiagnosticRow r0;
    r0.momentGammaOrigin = 3.0;
    s0.rows.push_back(r0);
    const InequalityReport rep0 = checkEstimegamma(s0, gamma, M, 0.05);
    CHECK(rep0.lhs == 0.0);
    CHECK(rep0.pass);
}

TEST_CASE("second-moment bracket and exact-law reports") {
    const double M = 4.0 * kPi;
    const double law = 4.0 * M * (1.0 - M / (8.0 * kPi)); // 8 pi
    CHECK(law == doctest::Approx(8.0 * kPi).epsilon(1e-14));

    const DiagnosticSeries s = linearM2Series(M, law, 11, 0.05);
    const auto reps = checkSecondMoment(s, M, 1.0, 5.0);
    REQUIRE(reps.size() == 3);
    CHECK(reps[0].name == "second_moment_bracket_lower");
    CHECK(reps[1].name == "second_moment_bracket_upper");
    CHECK(reps[2].name == "second_moment_exact_law");
    for (const auto& r : reps) CHECK(r.pass);
    CHECK(reps[0].lhs == doctest::Approx(4.0 * M - M * M / kTwoPi).epsilon(1e-13));
    CHECK(reps[1].rhs == doctest::Approx(4.0 * M).epsilon(1e-13));
    CHECK(reps[2].lhs == doctest::Approx(0.0).epsilon(1e-10));

    // A slope outside the bracket fails the bracket reports.
    const DiagnosticSeries bad = linearM2Series(M, 4.0 * M + 10.0, 11, 0.05);
    const auto badReps = checkSecondMoment(bad, M, 1.0, 5.0);
    CHECK(!badReps[1].pass);

    // Supercritical mass: the law goes negative.
    const double M12 = 12.0 * kPi;
    const DiagnosticSeries sup = linearM2Series(M12, -24.0 * kPi, 11, 0.05);
    const auto supReps = checkSecondMoment(sup, M12, 1.0, 5.0);
    CHECK(supReps[2].pass);

    DiagnosticSeries tooFew = linearM2Series(M, law, 2, 0.05);
    CHECK_THROWS_AS(checkSecondMoment(tooFew, M, 1.0, 5.0), ConfigError);
}

TEST_CASE("critical log-moment check guards its hypotheses") {
    InitialMeasure good;
    good.atoms.push_back({{-1.0, 0.0}, 4.0 * kPi});
    good.atoms.push_back({{1.0, 0.0}, 4.0 * kPi});

    DiagnosticSeries s;
    s.meta.mass = good.mass();
    s.meta.eps = 0.1;
    for (int i = 0; i <= 4; ++i) {
        DiagnosticRow r;
        r.t = 0.25 * i;
        r.logPair2.value = 3.0;
        r.ccc1.value = 1.0;
        s.rows.push_back(r);
    }
    const auto reps = checkCriticalLogmoment(s, good);
    REQUIRE(reps.size() == 2);
    CHECK(reps[0].name == "critical_logpair2_integral");
    CHECK(reps[1].name == "critical_companion_integral");
    CHECK(reps[0].pass);
    CHECK(reps[0].lhs == doctest::Approx(3.0).epsilon(1e-13));

    // Single 8 pi atom: inadmissible even though the mass is critical.
    InitialMeasure bad;
    bad.atoms.push_back({{0.0, 0.0}, 8.0 * kPi});
    CHECK_THROWS_AS(checkCriticalLogmoment(s, bad), ConfigError);

    // Subcritical data: wrong regime.
    InitialMeasure sub;
    sub.atoms.push_back({{0.0, 0.0}, 4.0 * kPi});
    CHECK_THROWS_AS(checkCriticalLogmoment(s, sub), ConfigError);
}

TEST_CASE("concentration check tracks the complement mass") {
    const double M = 8.0 * kPi;
    DiagnosticSeries s;
    s.meta.mass = M;
    s.meta.nu = 1.0;
    for (int i = 0; i < 3; ++i) {
        DiagnosticRow r;
        r.t = 0.5 * i;
        r.mass = M;
        r.maxBallMass = M / 2.0; // two distant atoms: each ball misses one
        s.rows.push_back(r);
    }
    const InequalityReport rep = checkConcentration(s, 1.0, 1.0);
    CHECK(rep.pass);
    CHECK(rep.rhs == doctest::Approx(M / 2.0).epsilon(1e-13)); // min complement = 4 pi
    CHECK(rep.lhs == 1.0);

    // A ball capturing everything drives zeta to 0 and fails a positive floor.
    s.rows[2].maxBallMass = M;
    const InequalityReport rep2 = checkConcentration(s, 1.0, 1.0);
    CHECK(!rep2.pass);
    CHECK(rep2.rhs == 0.0);
}

TEST_CASE("moment envelope check") {
    const double M = 4.0 * kPi;
    DiagnosticSeries s;
    s.meta.mass = M;
    for (int i = 0; i <= 10; ++i) {
        DiagnosticRow r;
        r.t = 0.1 * i;
        r.mass = M;
        r.momentGammaOrigin = 5.0 + 4.0 * M * r.t; // diffusive growth
        s.rows.push_back(r);
    }
    const InequalityReport rep = checkCompaciteMoment(s, 1.5);
    CHECK(rep.pass);
    // At t=0 the envelope 2 moment(0) + C (M+M^2) exceeds moment(0).
    CHECK(rep.rhs >= rep.lhs);

    // An explosive column escapes any fixed envelope.
    s.rows[10].momentGammaOrigin = 1e9;
    CHECK(!checkCompaciteMoment(s, 1.5).pass);
}

TEST_CASE("sweep check compares integrals across halvings") {
    std::vector<SweepPoint> pts;
    pts.push_back({0.16, 10.0, 5.0, 0.1});
    pts.push_back({0.08, 12.0, 4.5, 0.1});
    pts.push_back({0.04, 15.0, 4.2, 0.1});
    const auto reps = checkLogmomentSweep(pts);
    REQUIRE(reps.size() == 4); // two ratio checks + two monotony checks
    for (const auto& r : reps) CHECK(r.pass);

    // Growth factor above 1.5 fails.
    pts[2].logPair2Integral = 20.0;
    bool anyFail = false;
    for (const auto& r : checkLogmomentSweep(pts))
        if (!r.pass) anyFail = true;
    CHECK(anyFail);

    // Non-decreasing eps ordering is rejected.
    std::vector<SweepPoint> wrong = {{0.04, 1.0, 1.0, 0.0}, {0.08, 1.0, 1.0, 0.0}};
    CHECK_THROWS_AS(checkLogmomentSweep(wrong), ConfigError);
}

TEST_CASE("reports serialize to the declared JSON shape") {
    InequalityReport rep;
    rep.name = "demo";
    rep.lhs = 1.0;
    rep.rhs = 2.0;
    rep.slack = 1.0;
    rep.tolerance = 0.25;
    rep.pass = true;
    rep.context["gamma"] = 1.5;
    const nlohmann::json j = toJson(rep);
    CHECK(j.at("name") == "demo");
    CHECK(j.at("lhs") == 1.0);
    CHECK(j.at("rhs") == 2.0);
    CHECK(j.at("slack") == 1.0);
    CHECK(j.at("tolerance") == 0.25);
    CHECK(j.at("pass") == true);
    CHECK(j.at("context").at("gamma") == 1.5);

    // Infinities survive serialization as tagged strings.
    rep.rhs = std::numeric_limits<double>::infinity();
    const nlohmann::json ji = toJson(rep);
    CHECK(ji.at("rhs") == "inf");
}
