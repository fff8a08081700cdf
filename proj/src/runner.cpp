#include "kslab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "kslab/barycentric.hpp"
#include "kslab/errors.hpp"
#include "kslab/grid_solver.hpp"
#include "kslab/kernel.hpp"
#include "kslab/kernel_sum.hpp"
#include "kslab/particle_solver.hpp"
#include "kslab/rng.hpp"

namespace kslab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json jsonNumber(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

void writeTextFile(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SolverError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw SolverError("write failed for '" + path.string() + "'");
}

std::string isoTimestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// One property line of a suite: tracks the worst slack seen (bound minus
// value; negative = violated).
struct Prop {
    std::string name;
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    std::int64_t count = 0;

    explicit Prop(std::string n) : name(std::move(n)) {}
    void note(double slack) {
        worst = std::min(worst, slack);
        ok = ok && slack >= 0.0;
        ++count;
    }
    void noteExact(bool exact) {
        ok = ok && exact;
        worst = std::min(worst, exact ? 0.0 : -1.0);
        ++count;
    }
    std::string line() const {
        std::ostringstream os;
        os << (ok ? "[pass] " : "[FAIL] ") << name << ": worst slack " << formatDouble(worst)
           << " over " << count << " samples";
        return os.str();
    }
};

void finish(SuiteResult& res, const std::vector<const Prop*>& props) {
    for (const Prop* p : props) {
        res.lines.push_back(p->line());
        res.pass = res.pass && p->ok;
    }
}

double logUniform(double u, double lo, double hi) {
    return std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
}

SuiteResult kernelsSuite(std::int64_t samples, std::uint64_t seed) {
    const CounterRng rng(seed, StreamTag::Property);
    Prop pNorm("kernels/scaled-norm |z||K_eps| <= 1/(2pi) + 1e-15");
    Prop pGap("kernels/gap-identity |measured - closed| <= 1e-14");
    Prop pMin("kernels/gap <= min-form bound");
    Prop pGamma("kernels/gap <= gamma-form bound");
    Prop pLog("kernels/gap <= log-form bound");
    Prop pAnti("kernels/antisymmetry K_eps(-z) = -K_eps(z) exact");

    const double normBound = 1.0 / kTwoPi + 1e-15;
    for (std::int64_t i = 0; i < samples; ++i) {
        const auto u = rng.uniform2(std::uint64_t(i), 0);
        const auto v = rng.uniform2(std::uint64_t(i), 1);
        const double r = logUniform(u[0], 1e-8, 1e8);
        const double th = kTwoPi * u[1];
        const double eps = logUniform(v[0], 1e-6, 1.0);
        const double gamma = 0.1 + 1.8 * v[1];
        const Vec2 z{r * std::cos(th), r * std::sin(th)};

        const KernelBoundReport rep = kernelBounds(z, eps, gamma);
        pNorm.note(normBound - rep.scaledNorm);
        pGap.note(1e-14 - std::abs(rep.gap - rep.gapClosed));
        // The measured gap subtracts nearly equal kernels when |z| >> sqrt(eps),
        // so it carries the same absolute allowance the identity check uses.
        pMin.note(rep.boundMinForm * (1.0 + 1e-12) + 1e-14 - rep.gap);
        pGamma.note(rep.boundGammaForm * (1.0 + 1e-12) + 1e-14 - rep.gap);
        pLog.note(rep.boundLogForm * (1.0 + 1e-12) + 1e-14 - rep.gap);

        const Vec2 a = evalKEps(z, eps);
        const Vec2 b = evalKEps(-z, eps);
        pAnti.noteExact(a.x == -b.x && a.y == -b.y);
    }
    SuiteResult res;
    finish(res, {&pNorm, &pGap, &pMin, &pGamma, &pLog, &pAnti});
    return res;
}

MonotoneFn makeFamily(int kind, double u) {
    MonotoneFn f;
    switch (kind & 3) {
    case 0:
        f.kind = MonotoneFn::Kind::InversePower;
        f.p = 0.1 + 1.9 * u;
        break;
    case 1:
        f.kind = MonotoneFn::Kind::InvSquarePlusEps;
        f.eps = logUniform(u, 1e-3, 1.0);
        break;
    case 2:
        f.kind = MonotoneFn::Kind::ShiftedPower;
        f.a = 0.1 + 9.9 * u;
        f.gamma = 0.3 + 1.6 * u;
        break;
    default:
        f.kind = MonotoneFn::Kind::LogInvSquare;
        break;
    }
    return f;
}

SuiteResult geometrySuite(std::int64_t samples, std::uint64_t seed) {
    const CounterRng rng(seed, StreamTag::Property);
    Prop pLower("geometry/delta >= refined lower bound - 1e-10 scale");
    Prop pLB("geometry/refined lower bound >= 0");
    Prop pG("geometry/G_eps >= -1e-10 scale");
    Prop pEq("geometry/G_eps equilateral = 0 to 1e-12");

    {
        const double s3 = std::sqrt(3.0) / 2.0;
        const ExtReal g = gEps({1.0, 0.0}, {-0.5, s3}, {-0.5, -s3}, 0.25);
        pEq.note(1e-12 - std::abs(g.asDouble()));
    }

    for (std::int64_t i = 0; i < samples; ++i) {
        const auto u0 = rng.uniform2(std::uint64_t(i), 0);
        const auto u1 = rng.uniform2(std::uint64_t(i), 1);
        const auto u2 = rng.uniform2(std::uint64_t(i), 2);
        const auto u3 = rng.uniform2(std::uint64_t(i), 3);

        const double nx = logUniform(u0[0], 1e-4, 1e4);
        const double ny = logUniform(u1[0], 1e-4, 1e4);
        const Vec2 X{nx * std::cos(kTwoPi * u0[1]), nx * std::sin(kTwoPi * u0[1])};
        const Vec2 Y{ny * std::cos(kTwoPi * u1[1]), ny * std::sin(kTwoPi * u1[1])};
        const MonotoneFn phi = makeFamily(int(i) & 3, u2[0]);
        const MonotoneFn psi = makeFamily(int(i >> 2) & 3, u2[1]);
        try {
            const BarycentricResult r = barycentricDelta(X, Y, phi, psi);
            pLower.note(r.delta - r.refinedLB + 1e-10 * (std::abs(r.delta) + 1.0));
            pLB.note(r.refinedLB);
        } catch (const std::domain_error&) {
            // exactly degenerate triangle; skip the draw
        }

        const Vec2 x = 2.0 * rng.normal2(std::uint64_t(i), 5);
        const Vec2 y = 2.0 * rng.normal2(std::uint64_t(i), 6);
        const Vec2 z = 2.0 * rng.normal2(std::uint64_t(i), 7);
        const double ge = logUniform(u3[0], 1e-3, 1.0);
        const ExtReal g = gEps(x, y, z, ge);
        if (!g.infinite) pG.note(g.value + 1e-10 * (1.0 + std::abs(g.value)));
    }
    SuiteResult res;
    finish(res, {&pLower, &pLB, &pG, &pEq});
    return res;
}

SuiteResult measuresSuite(std::int64_t samples, std::uint64_t seed) {
    const CounterRng rng(seed, StreamTag::Property);
    Prop pDecomp("measures/m2 decomposition m2(c) = m2(com) + M|c-com|^2");
    Prop pPairVar("measures/pair identity S_2 = 2 M m2(com)");
    Prop pPairBound("measures/S_gamma <= 2^(gamma v 1) 2 M moment_gamma");
    Prop pBallMono("measures/maxBallMass nondecreasing in radius");
    Prop pBallCap("measures/maxBallMass <= M");
    Prop pGridPair("measures/grid pair row: fft vs brute");
    Prop pGridBall("measures/grid maxBallMass: fft vs brute");

    const std::int64_t iters = std::min<std::int64_t>(samples, 5000);
    for (std::int64_t i = 0; i < iters; ++i) {
        const auto u = rng.uniform2(std::uint64_t(i), 0);
        const int N = 2 + int(u[0] * 38.999);
        WeightedEnsemble e;
        e.weight = 0.1 + 1.9 * u[1];
        e.positions.reserve(std::size_t(N));
        for (int k = 0; k < N; ++k)
            e.positions.push_back(3.0 * rng.normal2(std::uint64_t(i), std::uint32_t(10 + k)));
        const double M = e.mass();
        const Vec2 com = centerOfMass(e);

        const Vec2 c = 2.0 * rng.normal2(std::uint64_t(i), 60);
        const double m2c = momentGamma(e, 2.0, c);
        const double m2com = momentGamma(e, 2.0, com);
        const double decomp = m2com + M * (c - com).norm2();
        pDecomp.note(1e-12 * (1.0 + std::abs(m2c)) - std::abs(m2c - decomp));

        const double s2 = pairMoment(e, 2.0);
        pPairVar.note(1e-12 * (1.0 + s2) - std::abs(s2 - 2.0 * M * m2com));

        const auto ug = rng.uniform2(std::uint64_t(i), 61);
        const double gamma = 0.2 + 1.75 * ug[0];
        const double bound = std::pow(2.0, std::max(gamma - 1.0, 0.0)) * 2.0 * M *
                             momentGamma(e, gamma, Vec2{0.0, 0.0});
        pPairBound.note(bound * (1.0 + 1e-12) - pairMoment(e, gamma));

        const double r1 = 0.2 + 2.0 * ug[1];
        const double r2 = r1 + 1.0;
        const double b1 = maxBallMass(e, r1);
        const double b2 = maxBallMass(e, r2);
        pBallMono.note(b2 - b1);
        pBallCap.note(M * (1.0 + 1e-12) - b2);

        if (i % 100 == 0) {
            const auto ua = rng.uniform2(std::uint64_t(i), 62);
            const auto ub = rng.uniform2(std::uint64_t(i), 63);
            const int n = 4 + int(ua[0] * 8.999);
            GridDensity gd;
            gd.cellsPerSide = n;
            gd.halfWidth = 0.5 + 2.5 * ua[1];
            gd.values.resize(std::size_t(n) * n);
            for (std::size_t k = 0; k < gd.values.size(); ++k)
                gd.values[k] = rng.uniform2(std::uint64_t(i), std::uint32_t(1000 + k))[0];
            const double gg = 0.3 + 1.6 * ub[0];
            const double ge = logUniform(ub[1], 1e-2, 1.0);
            const PairRow a = pairRow(gd, gg, ge);
            const PairRow b = pairRowBrute(gd, gg, ge);
            const auto cmp = [&](double av, double bv) {
                pGridPair.note(1e-12 * (1.0 + std::abs(bv)) - std::abs(av - bv));
            };
            cmp(a.sGamma, b.sGamma);
            cmp(a.dGamma.asDouble(), b.dGamma.asDouble());
            cmp(a.logPair1.asDouble(), b.logPair1.asDouble());
            cmp(a.logPair2.asDouble(), b.logPair2.asDouble());
            cmp(a.ccc1.asDouble(), b.ccc1.asDouble());
            const double radius = (0.5 + 2.0 * ua[1]) * gd.cellSize();
            const double Mg = gd.mass();
            pGridBall.note(1e-10 * (1.0 + Mg) -
                           std::abs(maxBallMass(gd, radius) - maxBallMassBrute(gd, radius)));
        }
    }
    SuiteResult res;
    finish(res,
           {&pDecomp, &pPairVar, &pPairBound, &pBallMono, &pBallCap, &pGridPair, &pGridBall});
    return res;
}

} // namespace

RunArtifacts executeRun(const RunConfig& rc) {
    validateRunConfig(rc);
    RunArtifacts ra;
    const double M = rc.initial.mass();

    if (rc.solver == RunConfig::Solver::Particles) {
        ParticleConfig p = rc.particles;
        p.eps = rc.epsilon;
        p.T = rc.T;
        p.seed = rc.seed;
        ParticleRunResult res = runParticles(p, rc.initial, rc.diagnostics);
        ra.series = std::move(res.series);
        ra.finalParticles = std::move(res.finalState.ensemble);
    } else {
        GridConfig g = rc.grid;
        g.eps = rc.epsilon;
        g.T = rc.T;
        GridRunResult res = runGrid(g, rc.initial, rc.diagnostics);
        ra.series = std::move(res.series);
        ra.series.meta.seed = rc.seed;
        ra.finalGrid = std::move(res.finalDensity);
        ra.boxTruncated = res.boxTruncated;
    }

    for (const auto& c : rc.checks) {
        if (c == "estimegamma") {
            ra.reports.push_back(
                checkEstimegamma(ra.series, rc.diagnostics.gamma, M, rc.tolerances.estimegammaRel));
        } else if (c == "second_moment") {
            auto v = checkSecondMoment(ra.series, M, rc.tolerances.secondMomentBracket,
                                       rc.tolerances.secondMomentLaw);
            ra.reports.insert(ra.reports.end(), v.begin(), v.end());
        } else if (c == "critical_logmoment") {
            auto v = checkCriticalLogmoment(ra.series, rc.initial);
            ra.reports.insert(ra.reports.end(), v.begin(), v.end());
        } else if (c == "concentration") {
            ra.reports.push_back(
                checkConcentration(ra.series, rc.diagnostics.nu, rc.tolerances.concentrationFloor));
        } else if (c == "compacite_moment") {
            ra.reports.push_back(checkCompaciteMoment(ra.series, rc.diagnostics.gamma));
        }
    }
    for (const auto& r : ra.reports) ra.anyCheckFailed = ra.anyCheckFailed || !r.pass;
    return ra;
}

void writeRunOutputs(const RunConfig& rc, const RunArtifacts& ra) {
    const fs::path dir(rc.output);
    fs::create_directories(dir);

    writeTextFile(dir / "diagnostics.csv", ra.series.toCsv());

    if (rc.solver == RunConfig::Solver::Particles) {
        std::string csv = "x,y\n";
        for (const Vec2& p : ra.finalParticles.positions)
            csv += formatDouble(p.x) + "," + formatDouble(p.y) + "\n";
        writeTextFile(dir / "snapshot_final.csv", csv);
    } else {
        const int n = ra.finalGrid.cellsPerSide;
        std::string csv;
        csv.reserve(std::size_t(n) * n * 20);
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                if (ix) csv += ",";
                csv += formatDouble(ra.finalGrid.values[std::size_t(iy) * n + ix]);
            }
            csv += "\n";
        }
        writeTextFile(dir / "field_final.csv", csv);
        const json side = {{"L", ra.finalGrid.halfWidth},
                           {"n", n},
                           {"t", ra.series.rows.back().t},
                           {"eps", rc.epsilon},
                           {"mass", ra.finalGrid.mass()}};
        writeTextFile(dir / "field_final.json", side.dump(2) + "\n");
    }

    const json manifest = {{"artifactVersion", "1.0.0"},
                           {"generatedAt", isoTimestamp()},
                           {"backend", activeBackend().name},
                           {"boxTruncated", ra.boxTruncated},
                           {"config", toJson(rc)}};
    writeTextFile(dir / "manifest.json", manifest.dump(2) + "\n");

    json reports = json::array();
    for (const auto& r : ra.reports) reports.push_back(toJson(r));
    const json rep = {{"verdict", ra.anyCheckFailed ? "fail" : "pass"}, {"reports", reports}};
    writeTextFile(dir / "reports.json", rep.dump(2) + "\n");
}

SuiteResult runCheckSuite(const std::string& suite, std::int64_t samples, std::uint64_t seed) {
    if (samples < 1) throw ConfigError("check: samples must be >= 1");
    if (suite == "kernels") return kernelsSuite(samples, seed);
    if (suite == "geometry") return geometrySuite(samples, seed);
    if (suite == "measures") return measuresSuite(samples, seed);
    if (suite == "all") {
        SuiteResult all;
        for (const char* s : {"kernels", "geometry", "measures"}) {
            SuiteResult r = runCheckSuite(s, samples, seed);
            all.pass = all.pass && r.pass;
            all.lines.insert(all.lines.end(), r.lines.begin(), r.lines.end());
        }
        return all;
    }
    throw ConfigError("unknown suite '" + suite + "'; expected kernels|geometry|measures|all");
}

namespace {

template <typename Fn> int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CaptureError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace

int cmdSimulate(const std::string& configPath) {
    return guarded([&] {
        const RunConfig rc = loadRunConfig(configPath);
        const RunArtifacts ra = executeRun(rc);
        writeRunOutputs(rc, ra);
        std::cout << "wrote " << rc.output << " (" << ra.series.rows.size() << " rows)\n";
        if (ra.boxTruncated)
            std::cout << "warning: boundary ring held > 1e-6 of the mass during the run\n";
        for (const auto& r : ra.reports)
            std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.name << ": lhs "
                      << formatDouble(r.lhs) << ", rhs " << formatDouble(r.rhs) << ", slack "
                      << formatDouble(r.slack) << "\n";
        return ra.anyCheckFailed ? 4 : 0;
    });
}

int cmdCheck(const std::string& suite, std::int64_t samples, std::uint64_t seed) {
    return guarded([&] {
        const SuiteResult res = runCheckSuite(suite, samples, seed);
        for (const auto& l : res.lines) std::cout << l << "\n";
        std::cout << (res.pass ? "suite passed\n" : "suite FAILED\n");
        return res.pass ? 0 : 4;
    });
}

int cmdSweep(const std::string& configPath, const std::string& axis,
             const std::vector<double>& values) {
    return guarded([&] {
        const RunConfig base = loadRunConfig(configPath);
        if (values.empty()) throw ConfigError("sweep: values list is empty");
        if (axis != "epsilon" && axis != "N" && axis != "n" && axis != "M")
            throw ConfigError("sweep: axis must be one of epsilon|N|n|M");
        bool increasing = true, decreasing = true;
        for (std::size_t k = 1; k < values.size(); ++k) {
            increasing = increasing && values[k] > values[k - 1];
            decreasing = decreasing && values[k] < values[k - 1];
        }
        if (values.size() > 1 && !increasing && !decreasing)
            throw ConfigError("sweep: values must be strictly monotone");
        if (axis == "N" && base.solver != RunConfig::Solver::Particles)
            throw ConfigError("sweep: axis N requires the particle solver");
        if (axis == "n" && base.solver != RunConfig::Solver::Grid)
            throw ConfigError("sweep: axis n requires the grid solver");

        const fs::path sweepDir = fs::path(base.output) / ("sweep_" + axis);
        const auto substitute = [&](double v) {
            RunConfig rc = base;
            rc.output = (sweepDir / ("value_" + formatDouble(v))).string();
            if (axis == "epsilon") {
                rc.epsilon = v;
            } else if (axis == "N") {
                if (v < 1 || v != std::floor(v))
                    throw ConfigError("sweep: N values must be positive integers");
                rc.particles.N = int(v);
            } else if (axis == "n") {
                if (v < 4 || v != std::floor(v))
                    throw ConfigError("sweep: n values must be integers >= 4");
                rc.grid.n = int(v);
            } else { // M
                if (!(v > 0)) throw ConfigError("sweep: M values must be positive");
                const double scale = v / base.initial.mass();
                for (auto& a : rc.initial.atoms) a.mass *= scale;
                for (auto& g : rc.initial.gaussians) g.mass *= scale;
            }
            return rc;
        };
        // Every point must be a valid configuration before anything runs;
        // a bad axis value is a usage error, not a mid-sweep run failure.
        for (const double v : values) validateRunConfig(substitute(v));

        json points = json::array();
        std::vector<SweepPoint> pts;
        bool anyRunFailed = false;
        bool anyCheckFailed = false;

        for (const double v : values) {
            const RunConfig rc = substitute(v);
            json pt = {{"value", v}};
            try {
                const RunArtifacts ra = executeRun(rc);
                writeRunOutputs(rc, ra);
                std::vector<double> t, lp2, cc, m2;
                for (const auto& row : ra.series.rows) {
                    t.push_back(row.t);
                    lp2.push_back(row.logPair2.asDouble());
                    cc.push_back(row.ccc1.asDouble());
                    m2.push_back(row.m2);
                }
                SweepPoint sp;
                sp.eps = rc.epsilon;
                sp.logPair2Integral = trapezoidIntegral(t, lp2);
                sp.ccc1Integral = trapezoidIntegral(t, cc);
                sp.m2Slope = t.size() >= 2 ? leastSquaresSlope(t, m2)
                                           : std::numeric_limits<double>::quiet_NaN();
                pts.push_back(sp);
                pt["ok"] = true;
                pt["m2Slope"] = jsonNumber(sp.m2Slope);
                pt["logPair2Integral"] = jsonNumber(sp.logPair2Integral);
                pt["ccc1Integral"] = jsonNumber(sp.ccc1Integral);
                pt["checksPassed"] = !ra.anyCheckFailed;
                anyCheckFailed = anyCheckFailed || ra.anyCheckFailed;
            } catch (const std::exception& e) {
                pt["ok"] = false;
                pt["error"] = e.what();
                anyRunFailed = true;
            }
            points.push_back(pt);
            std::cout << "sweep " << axis << " = " << formatDouble(v) << ": "
                      << (pt["ok"].get<bool>() ? "ok" : pt["error"].get<std::string>()) << "\n";
        }

        json report = {{"axis", axis}, {"points", points}};
        const bool wantLogmomentChecks =
            axis == "epsilon" && decreasing && !anyRunFailed && pts.size() >= 2 &&
            std::count(base.checks.begin(), base.checks.end(), "critical_logmoment") > 0;
        if (wantLogmomentChecks) {
            json checks = json::array();
            for (const auto& r : checkLogmomentSweep(pts)) {
                checks.push_back(toJson(r));
                anyCheckFailed = anyCheckFailed || !r.pass;
                std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.name << "\n";
            }
            report["checks"] = checks;
        }
        fs::create_directories(sweepDir);
        writeTextFile(sweepDir / "sweep_report.json", report.dump(2) + "\n");
        if (anyRunFailed) return 3;
        return anyCheckFailed ? 4 : 0;
    });
}

} // namespace kslab
