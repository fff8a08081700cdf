#include "kslab/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "kslab/checks.hpp"
#include "kslab/errors.hpp"
#include "kslab/kernel.hpp"

namespace kslab {

namespace {

using nlohmann::json;

const std::set<std::string>& knownChecks() {
    static const std::set<std::string> k = {"estimegamma", "second_moment", "critical_logmoment",
                                            "concentration", "compacite_moment"};
    return k;
}

void rejectUnknownKeys(const json& j, const char* where,
                       std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (item.key() == a) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + item.key() + "'");
    }
}

InitialMeasure parseInitial(const json& j) {
    rejectUnknownKeys(j, "initial", {"atoms", "gaussians"});
    InitialMeasure f0;
    if (j.contains("atoms"))
        for (const auto& a : j.at("atoms")) {
            rejectUnknownKeys(a, "initial.atoms[]", {"x", "y", "mass"});
            f0.atoms.push_back({{a.at("x").get<double>(), a.at("y").get<double>()},
                                a.at("mass").get<double>()});
        }
    if (j.contains("gaussians"))
        for (const auto& g : j.at("gaussians")) {
            rejectUnknownKeys(g, "initial.gaussians[]", {"x", "y", "var", "mass"});
            f0.gaussians.push_back({{g.at("x").get<double>(), g.at("y").get<double>()},
                                    g.at("var").get<double>(),
                                    g.at("mass").get<double>()});
        }
    return f0;
}

} // namespace

RunConfig parseRunConfig(const json& j) {
    try {
        rejectUnknownKeys(j, "config",
                          {"solver", "initial", "epsilon", "T", "seed", "output", "particles",
                           "grid", "diagnostics", "checks", "tolerances"});
        RunConfig rc;

        const std::string solver = j.at("solver").get<std::string>();
        if (solver == "particles")
            rc.solver = RunConfig::Solver::Particles;
        else if (solver == "grid")
            rc.solver = RunConfig::Solver::Grid;
        else
            throw ConfigError("solver must be 'particles' or 'grid', got '" + solver + "'");

        rc.initial = parseInitial(j.at("initial"));
        rc.epsilon = j.at("epsilon").get<double>();
        rc.T = j.at("T").get<double>();
        rc.seed = j.value("seed", std::uint64_t(0));
        rc.output = j.value("output", std::string("out"));

        if (rc.solver == RunConfig::Solver::Particles) {
            if (!j.contains("particles") || j.contains("grid"))
                throw ConfigError("solver 'particles' requires a particles block and no grid block");
            const json& p = j.at("particles");
            rejectUnknownKeys(p, "particles",
                              {"N", "dt", "sampleEvery", "forceMethod", "cutoff", "dtOverride"});
            rc.particles.N = p.at("N").get<int>();
            rc.particles.dt = p.value("dt", 0.0);
            rc.particles.sampleEvery = p.value("sampleEvery", 10);
            const std::string fm = p.value("forceMethod", std::string("direct"));
            if (fm == "direct")
                rc.particles.forceMethod = ParticleConfig::Force::Direct;
            else if (fm == "cellList")
                rc.particles.forceMethod = ParticleConfig::Force::CellList;
            else
                throw ConfigError("particles.forceMethod must be 'direct' or 'cellList'");
            rc.particles.cutoff = p.value("cutoff", 1.0);
            rc.particles.dtOverride = p.value("dtOverride", false);
        } else {
            if (!j.contains("grid") || j.contains("particles"))
                throw ConfigError("solver 'grid' requires a grid block and no particles block");
            const json& g = j.at("grid");
            rejectUnknownKeys(g, "grid",
                              {"L", "n", "dt", "cflSafety", "sampleEvery", "convolutionMethod",
                               "driftEnabled"});
            rc.grid.L = g.at("L").get<double>();
            rc.grid.n = g.at("n").get<int>();
            rc.grid.dt = g.value("dt", 0.0);
            rc.grid.cflSafety = g.value("cflSafety", 0.4);
            rc.grid.sampleEvery = g.value("sampleEvery", 10);
            const std::string cm = g.value("convolutionMethod", std::string("fftPadded"));
            if (cm == "fftPadded")
                rc.grid.convolutionMethod = GridConfig::Conv::FftPadded;
            else if (cm == "directSum")
                rc.grid.convolutionMethod = GridConfig::Conv::DirectSum;
            else
                throw ConfigError("grid.convolutionMethod must be 'fftPadded' or 'directSum'");
            rc.grid.driftEnabled = g.value("driftEnabled", true);
        }

        if (j.contains("diagnostics")) {
            const json& d = j.at("diagnostics");
            rejectUnknownKeys(d, "diagnostics",
                              {"gamma", "nu", "gTripleSubsample", "gTripleCoarse"});
            rc.diagnostics.gamma = d.value("gamma", 1.5);
            rc.diagnostics.nu = d.value("nu", 0.1);
            rc.diagnostics.gTripleSubsample = d.value("gTripleSubsample", 128);
            rc.diagnostics.gTripleCoarse = d.value("gTripleCoarse", 8);
        }
        if (j.contains("checks"))
            for (const auto& c : j.at("checks")) rc.checks.push_back(c.get<std::string>());
        if (j.contains("tolerances")) {
            const json& t = j.at("tolerances");
            rejectUnknownKeys(t, "tolerances",
                              {"estimegammaRel", "secondMomentBracket", "secondMomentLaw",
                               "concentrationFloor"});
            rc.tolerances.estimegammaRel = t.value("estimegammaRel", 0.05);
            rc.tolerances.secondMomentBracket = t.value("secondMomentBracket", 1.0);
            rc.tolerances.secondMomentLaw = t.value("secondMomentLaw", 5.0);
            rc.tolerances.concentrationFloor = t.value("concentrationFloor", 0.0);
        }

        validateRunConfig(rc);
        return rc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

RunConfig loadRunConfig(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parseRunConfig(j);
}

void validateRunConfig(const RunConfig& rc) {
    if (!(rc.epsilon > 0.0 && rc.epsilon <= 1.0))
        throw ConfigError("epsilon must lie in (0, 1]");
    if (!(rc.T >= 0.0) || !std::isfinite(rc.T)) throw ConfigError("T must be finite and >= 0");
    if (rc.output.empty()) throw ConfigError("output directory must be nonempty");

    try {
        rc.initial.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    const double M = rc.initial.mass();

    if (!(rc.diagnostics.gamma > 0.0 && rc.diagnostics.gamma <= 2.0))
        throw ConfigError("diagnostics.gamma must lie in (0, 2]");
    if (!(rc.diagnostics.nu > 0.0)) throw ConfigError("diagnostics.nu must be positive");
    if (rc.diagnostics.gTripleSubsample < 0 || rc.diagnostics.gTripleCoarse < 0)
        throw ConfigError("diagnostics.gTriple* must be nonnegative");

    for (const auto& c : rc.checks) {
        if (!knownChecks().count(c)) {
            std::ostringstream msg;
            msg << "unknown check '" << c << "'; valid names:";
            for (const auto& k : knownChecks()) msg << " " << k;
            throw ConfigError(msg.str());
        }
        if (c == "estimegamma")
            estimegammaConstant(M, rc.diagnostics.gamma); // throws naming the bound
        if (c == "critical_logmoment") {
            if (rc.initial.regime() != MassRegime::Critical)
                throw ConfigError("critical_logmoment requires critical mass (M = 8 pi), got M = " +
                                  std::to_string(M));
            if (!rc.initial.criticalAdmissible())
                throw ConfigError(
                    "critical_logmoment requires admissible data: every atom mass < 8 pi");
        }
    }

    if (rc.solver == RunConfig::Solver::Particles) {
        ParticleConfig p = rc.particles;
        p.eps = rc.epsilon;
        p.T = rc.T;
        p.seed = rc.seed;
        p.validate(M);
    } else {
        GridConfig g = rc.grid;
        g.eps = rc.epsilon;
        g.T = rc.T;
        g.validate();
    }
}

nlohmann::json toJson(const RunConfig& rc) {
    json j;
    j["solver"] = rc.solver == RunConfig::Solver::Particles ? "particles" : "grid";
    json init;
    if (!rc.initial.atoms.empty()) {
        json arr = json::array();
        for (const auto& a : rc.initial.atoms)
            arr.push_back({{"x", a.pos.x}, {"y", a.pos.y}, {"mass", a.mass}});
        init["atoms"] = arr;
    }
    if (!rc.initial.gaussians.empty()) {
        json arr = json::array();
        for (const auto& g : rc.initial.gaussians)
            arr.push_back({{"x", g.mean.x}, {"y", g.mean.y}, {"var", g.var}, {"mass", g.mass}});
        init["gaussians"] = arr;
    }
    j["initial"] = init;
    j["epsilon"] = rc.epsilon;
    j["T"] = rc.T;
    j["seed"] = rc.seed;
    j["output"] = rc.output;
    if (rc.solver == RunConfig::Solver::Particles) {
        j["particles"] = {
            {"N", rc.particles.N},
            {"dt", rc.particles.dt},
            {"sampleEvery", rc.particles.sampleEvery},
            {"forceMethod",
             rc.particles.forceMethod == ParticleConfig::Force::Direct ? "direct" : "cellList"},
            {"cutoff", rc.particles.cutoff},
            {"dtOverride", rc.particles.dtOverride}};
    } else {
        j["grid"] = {{"L", rc.grid.L},
                     {"n", rc.grid.n},
                     {"dt", rc.grid.dt},
                     {"cflSafety", rc.grid.cflSafety},
                     {"sampleEvery", rc.grid.sampleEvery},
                     {"convolutionMethod",
                      rc.grid.convolutionMethod == GridConfig::Conv::FftPadded ? "fftPadded"
                                                                               : "directSum"},
                     {"driftEnabled", rc.grid.driftEnabled}};
    }
    j["diagnostics"] = {{"gamma", rc.diagnostics.gamma},
                        {"nu", rc.diagnostics.nu},
                        {"gTripleSubsample", rc.diagnostics.gTripleSubsample},
                        {"gTripleCoarse", rc.diagnostics.gTripleCoarse}};
    j["checks"] = rc.checks;
    j["tolerances"] = {{"estimegammaRel", rc.tolerances.estimegammaRel},
                       {"secondMomentBracket", rc.tolerances.secondMomentBracket},
                       {"secondMomentLaw", rc.tolerances.secondMomentLaw},
                       {"concentrationFloor", rc.tolerances.concentrationFloor}};
    return j;
}

} // namespace kslab
