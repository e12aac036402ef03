#pragma once

#include <cstdint>
#include <vector>

#include "parisian/mc.hpp"

namespace parisian::mc::detail {

enum class Outcome { NoRuin, Ruin, Killed, Censored };

struct PathPlan {
    const ModelSpec* model;
    double x;
    double zeta;  // 0 means any passage below 0 is ruin
    double barrier;
    double dt;
    double max_time;
    std::uint64_t seed;
};

struct Tally {
    std::uint64_t ruin = 0;
    std::uint64_t killed = 0;
    std::uint64_t censored = 0;

    void add(Outcome o) {
        ruin += o == Outcome::Ruin;
        killed += o == Outcome::Killed;
        censored += o == Outcome::Censored;
    }
};

bool event_driven(const ModelSpec& m);

Outcome simulate_path(const PathPlan& plan, std::uint64_t path);
double simulate_infimum(const PathPlan& plan, double omega, std::uint64_t path);

Tally run_serial(const PathPlan& plan, std::uint64_t n_paths);
Tally run_parallel(const PathPlan& plan, std::uint64_t n_paths, int threads);

std::vector<double> infima_serial(const PathPlan& plan, double omega, std::uint64_t n_paths);
std::vector<double> infima_parallel(const PathPlan& plan, double omega, std::uint64_t n_paths, int threads);

}  // namespace parisian::mc::detail
