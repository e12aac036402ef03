#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parisian/model.hpp"
#include "parisian/rng.hpp"

namespace parisian::mc {

enum class Execution { Serial, Parallel };

struct MCConfig {
    std::uint64_t n_paths = 100000;
    std::uint64_t seed = 1;
    double upper_barrier = 0.0;  // kill level M; 0 picks one from the model
    double dt = 0.0;             // base step for Gaussian/stable paths; 0 picks 1e-4·min(ζ, σ²/p²)
    double max_time = 1e4;
    bool richardson = false;     // also run at dt/2 and report the bias estimate
    Execution execution = Execution::Parallel;
    int threads = 0;             // 0 uses the OpenMP default

    void validate() const;
};

struct MCEstimate {
    double p_hat = 0.0;
    double stderr_ = 0.0;
    std::uint64_t n_paths = 0;
    double truncation_bound = 0.0;
    std::string discretization_note;
    double bias_estimate = 0.0;  // Richardson: estimate(dt) - estimate(dt/2); 0 for exact kernels
    std::uint64_t killed = 0;    // paths stopped at the upper barrier
    std::uint64_t censored = 0;  // paths still undecided at max_time
    double dt_used = 0.0;
};

// P_x(τ^ζ < ∞). ζ = 0 gives the classical ruin verdict (any passage below 0).
MCEstimate estimate_parisian(const ModelSpec& m, double x, double zeta, const MCConfig& cfg);
MCEstimate estimate_constant(const ModelSpec& m, double zeta, const MCConfig& cfg);
MCEstimate estimate_classical_ruin(const ModelSpec& m, double x, const MCConfig& cfg);

// Increment over dt of the spectrally negative stable process with exponent c·θ^alpha.
double sample_stable_increment(double alpha, double c, double dt, Stream& stream);

// -inf_{s ≤ e_ω} X_s for n independent paths started at 0, with e_ω exponential of rate ω.
std::vector<double> sample_infimum_at_exp_time(const ModelSpec& m, double omega, const MCConfig& cfg);

// Default kill level: classical-ruin bound from M below target.
double default_barrier(const ModelSpec& m, double target);
// Upper bound on the classical-ruin probability from level M.
double ruin_bound_from(const ModelSpec& m, double level);

}  // namespace parisian::mc
