#include "mc_internal.hpp"

namespace parisian::mc::detail {

Tally run_serial(const PathPlan& plan, std::uint64_t n_paths) {
    Tally t;
    for (std::uint64_t i = 0; i < n_paths; ++i) t.add(simulate_path(plan, i));
    return t;
}

std::vector<double> infima_serial(const PathPlan& plan, double omega, std::uint64_t n_paths) {
    std::vector<double> out(n_paths);
    for (std::uint64_t i = 0; i < n_paths; ++i) out[i] = simulate_infimum(plan, omega, i);
    return out;
}

}  // namespace parisian::mc::detail
