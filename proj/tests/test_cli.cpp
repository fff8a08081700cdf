#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "kslab/kernel.hpp"
#include "kslab/series.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = std::string(KSLAB_BIN_DIR) + "/kslab";

int runCli(const std::string& args) {
    const std::string cmd = kBin + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path writeConfig(const std::string& name, const json& j) {
    const fs::path dir = fs::temp_directory_path() / "kslab_cli_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p;
}

json tinyParticleConfig(const std::string& outDir) {
    return {
        {"solver", "particles"},
        {"initial", {{"gaussians", {{{"x", 0.0}, {"y", 0.0}, {"var", 0.5}, {"mass", 4.0 * kslab::kPi}}}}}},
        // dt resolves to 0.05 here, so T = 0.1 yields three rows -- enough
        // for the slope-based checks.
        {"epsilon", 0.25},
        {"T", 0.1},
        {"seed", 7},
        {"output", outDir},
        {"particles", {{"N", 60}, {"sampleEvery", 1}}},
        {"diagnostics", {{"gTripleSubsample", 16}}},
        {"checks", {"second_moment"}},
        {"tolerances", {{"secondMomentBracket", 1e6}, {"secondMomentLaw", 1e6}}},
    };
}

} // namespace

TEST_CASE("usage and config errors exit with 2") {
    CHECK(runCli("simulate /nonexistent/config.json") == 2);
    CHECK(runCli("check nosuchsuite --samples 10") == 2);
    CHECK(runCli("check kernels --samples 0") == 2);
    CHECK(runCli("bogus-subcommand") == 2);

    // gamma = 1.0 at M = 4 pi sits on the pole boundary: rejected up front.
    const fs::path bad = writeConfig("bad_gamma.json", [] {
        json j = tinyParticleConfig("/tmp/kslab_cli_test/never");
        j["checks"] = {"estimegamma"};
        j["diagnostics"]["gamma"] = 1.0;
        return j;
    }());
    CHECK(runCli("simulate " + bad.string()) == 2);

    // Unknown keys are config errors, not silent noise.
    const fs::path unknown = writeConfig("unknown_key.json", [] {
        json j = tinyParticleConfig("/tmp/kslab_cli_test/never2");
        j["extra"] = 1;
        return j;
    }());
    CHECK(runCli("simulate " + unknown.string()) == 2);

    // Sweep over an empty values list.
    const fs::path base = writeConfig("sweep_base.json",
                                      tinyParticleConfig("/tmp/kslab_cli_test/sweep"));
    CHECK(runCli("sweep " + base.string() + " --axis epsilon --values \"\"") == 2);
    CHECK(runCli("sweep " + base.string() + " --axis bogus --values 0.1") == 2);
}

TEST_CASE("a valid run writes the declared artifacts and exits 0") {
    const fs::path dir = fs::temp_directory_path() / "kslab_cli_test" / "run1";
    fs::remove_all(dir);
    const fs::path cfg = writeConfig("ok.json", tinyParticleConfig(dir.string()));
    REQUIRE(runCli("simulate " + cfg.string()) == 0);

    const std::string csv = slurp(dir / "diagnostics.csv");
    REQUIRE(!csv.empty());
    CHECK(csv.rfind(kslab::kDiagnosticsCsvHeader, 0) == 0);

    const json manifest = json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest.contains("generatedAt"));
    CHECK(manifest.at("config").at("seed") == 7);
    const json reports = json::parse(slurp(dir / "reports.json"));
    CHECK(reports.at("verdict") == "pass");
    CHECK(reports.at("reports").is_array());
    CHECK(fs::exists(dir / "snapshot_final.csv"));
}

TEST_CASE("identical config and seed reproduce outputs byte for byte") {
    const fs::path dirA = fs::temp_directory_path() / "kslab_cli_test" / "rerunA";
    const fs::path dirB = fs::temp_directory_path() / "kslab_cli_test" / "rerunB";
    fs::remove_all(dirA);
    fs::remove_all(dirB);
    const fs::path cfgA = writeConfig("rerunA.json", tinyParticleConfig(dirA.string()));
    const fs::path cfgB = writeConfig("rerunB.json", tinyParticleConfig(dirB.string()));
    REQUIRE(runCli("simulate " + cfgA.string()) == 0);
    REQUIRE(runCli("simulate " + cfgB.string()) == 0);

    CHECK(slurp(dirA / "diagnostics.csv") == slurp(dirB / "diagnostics.csv"));
    CHECK(slurp(dirA / "snapshot_final.csv") == slurp(dirB / "snapshot_final.csv"));
    CHECK(slurp(dirA / "reports.json") == slurp(dirB / "reports.json"));
}

TEST_CASE("grid runs write the field snapshot pair") {
    const fs::path dir = fs::temp_directory_path() / "kslab_cli_test" / "grid1";
    fs::remove_all(dir);
    json j = {
        {"solver", "grid"},
        {"initial", {{"gaussians", {{{"x", 0.0}, {"y", 0.0}, {"var", 0.5}, {"mass", 4.0 * kslab::kPi}}}}}},
        {"epsilon", 0.2},
        {"T", 0.01},
        {"seed", 1},
        {"output", dir.string()},
        {"grid", {{"L", 5.0}, {"n", 32}, {"sampleEvery", 4}}},
        {"checks", json::array()},
    };
    const fs::path cfg = writeConfig("grid.json", j);
    REQUIRE(runCli("simulate " + cfg.string()) == 0);

    CHECK(fs::exists(dir / "field_final.csv"));
    const json side = json::parse(slurp(dir / "field_final.json"));
    CHECK(side.at("n") == 32);
    CHECK(side.at("L") == 5.0);
    CHECK(std::abs(double(side.at("mass")) - 4.0 * kslab::kPi) < 1e-9);
}

TEST_CASE("failed checks surface as exit 4") {
    const fs::path dir = fs::temp_directory_path() / "kslab_cli_test" / "fail1";
    fs::remove_all(dir);
    json j = tinyParticleConfig(dir.string());
    // An impossible concentration floor: zeta can never reach the mass.
    j["checks"] = {"concentration"};
    j["tolerances"] = {{"concentrationFloor", 1e9}};
    const fs::path cfg = writeConfig("fail.json", j);
    CHECK(runCli("simulate " + cfg.string()) == 4);
    // Outputs are still written for inspection.
    const json reports = json::parse(slurp(dir / "reports.json"));
    CHECK(reports.at("verdict") == "fail");
}

TEST_CASE("check suites run from the CLI") {
    CHECK(runCli("check measures --samples 200 --seed 3") == 0);
    CHECK(runCli("check kernels --samples 500") == 0);
}
