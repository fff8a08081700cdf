#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kslab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"kslab: aggregation-diffusion laboratory (particles + finite volumes)"};
    app.require_subcommand(1);

    std::string simConfig;
    CLI::App* sim = app.add_subcommand("simulate", "run one configured simulation");
    sim->add_option("config", simConfig, "JSON run configuration")->required();

    std::string suite;
    std::int64_t samples = 1000000;
    std::uint64_t seed = 0;
    CLI::App* chk = app.add_subcommand("check", "run a property suite");
    chk->add_option("suite", suite, "kernels|geometry|measures|all")->required();
    chk->add_option("--samples", samples, "sample count (default 1000000)");
    chk->add_option("--seed", seed, "stream seed (default 0)");

    std::string sweepConfig, axis;
    std::vector<double> values;
    CLI::App* swp = app.add_subcommand("sweep", "run a config across axis values");
    swp->add_option("config", sweepConfig, "base JSON run configuration")->required();
    swp->add_option("--axis", axis, "epsilon|N|n|M")->required();
    swp->add_option("--values", values, "comma-separated axis values")
        ->required()
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        std::cerr << e.what() << "\n";
        return 2;
    }

    if (sim->parsed()) return kslab::cmdSimulate(simConfig);
    if (chk->parsed()) return kslab::cmdCheck(suite, samples, seed);
    return kslab::cmdSweep(sweepConfig, axis, values);
}
