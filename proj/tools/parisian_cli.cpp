#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "parisian/job.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Parisian ruin probabilities for spectrally negative Levy risk models"};
    std::string config;
    std::optional<std::string> output;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    app.add_option("--config", config, "JSON job file")->required()->check(CLI::ExistingFile);
    app.add_option("--output", output, "write the artifact here instead of the job's output.path");
    app.add_option("--seed", seed, "override the Monte Carlo seed");
    app.add_option("--threads", threads, "worker threads for Monte Carlo (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    parisian::job::Overrides ov{output, seed, threads};
    return parisian::job::run_config(config, ov, std::cout, std::cerr);
}
