#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "parisian/mc.hpp"
#include "parisian/scale.hpp"

namespace parisian::job {

enum class Command { Ruin, Classical, Constant, AsymptCramer, AsymptConv, Simulate, Sweep, Scale };
Command parse_command(const std::string& name);
std::string to_string(Command c);

struct RunSpec {
    ModelSpec model;
    Command command = Command::Ruin;
    std::vector<double> x;
    std::vector<double> zeta;
    std::vector<double> q;        // scale command only
    double alpha_c = 0.0;         // asympt-conv only
    InversionConfig inversion{};
    QuadratureConfig quadrature{};
    mc::MCConfig mc{};
    std::string format = "json";  // json or csv
    std::string output_path;      // empty writes to the output stream

    void validate() const;
};

// Throws DomainError on schema or domain violations.
RunSpec parse_run_spec(const std::string& json_text);

struct Overrides {
    std::optional<std::string> output_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

// Runs the job and writes the artifact. Returns 0 on success, 2 on validation error,
// 3 when a numerical method failed (rows that failed carry their status).
int run(const RunSpec& spec, std::ostream& out, std::ostream& diag);
int run_config(const std::string& config_path, const Overrides& ov, std::ostream& out, std::ostream& diag);

}  // namespace parisian::job
