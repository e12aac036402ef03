#include <omp.h>

#include <cstdint>

#include "mc_internal.hpp"

namespace parisian::mc::detail {

namespace {

int team(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

}  // namespace

// Integer tallies, so the reduction order cannot change the result.
Tally run_parallel(const PathPlan& plan, std::uint64_t n_paths, int threads) {
    std::uint64_t ruin = 0, killed = 0, censored = 0;
    const auto n = static_cast<std::int64_t>(n_paths);
#pragma omp parallel for schedule(dynamic, 256) num_threads(team(threads)) reduction(+ : ruin, killed, censored)
    for (std::int64_t i = 0; i < n; ++i) {
        const Outcome o = simulate_path(plan, static_cast<std::uint64_t>(i));
        ruin += o == Outcome::Ruin;
        killed += o == Outcome::Killed;
        censored += o == Outcome::Censored;
    }
    return Tally{ruin, killed, censored};
}

std::vector<double> infima_parallel(const PathPlan& plan, double omega, std::uint64_t n_paths, int threads) {
    std::vector<double> out(n_paths);
    const auto n = static_cast<std::int64_t>(n_paths);
#pragma omp parallel for schedule(dynamic, 256) num_threads(team(threads))
    for (std::int64_t i = 0; i < n; ++i) out[i] = simulate_infimum(plan, omega, static_cast<std::uint64_t>(i));
    return out;
}

}  // namespace parisian::mc::detail
