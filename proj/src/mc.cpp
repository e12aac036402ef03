#include "parisian/mc.hpp"

#include <cmath>
#include <sstream>

#include "mc_internal.hpp"
#include "parisian/asympt.hpp"
#include "parisian/errors.hpp"

namespace parisian::mc {

void MCConfig::validate() const {
    if (n_paths < 10000) throw DomainError("n_paths must be at least 10000");
    if (!(upper_barrier >= 0.0)) throw DomainError("upper_barrier must be >= 0");
    if (!(dt >= 0.0)) throw DomainError("dt must be >= 0");
    if (!(max_time > 0.0)) throw DomainError("max_time must be > 0");
    if (threads < 0) throw DomainError("threads must be >= 0");
}

double ruin_bound_from(const ModelSpec& m, double level) {
    if (!(level >= 0.0)) throw DomainError("level must be >= 0");
    if (m.has_rational_exponent()) return std::exp(-cramer_gamma(ScaleContext(m)) * level);
    return std::min(1.0, integrated_jump_tail(m, level) / mean_drift(m));
}

double default_barrier(const ModelSpec& m, double target) {
    if (!(target > 0.0 && target < 1.0)) throw DomainError("target must lie in (0, 1)");
    if (m.has_rational_exponent()) return -std::log(target) / cramer_gamma(ScaleContext(m));
    double lo = 1.0, hi = 1.0;
    while (ruin_bound_from(m, hi) > target) {
        lo = hi;
        hi *= 4.0;
        if (hi > 1e12) return hi;
    }
    for (int i = 0; i < 40; ++i) {
        const double mid = std::sqrt(lo * hi);
        (ruin_bound_from(m, mid) > target ? lo : hi) = mid;
    }
    return hi;
}

namespace {

double default_dt(const ModelSpec& m, double zeta) {
    const double p = m.premium();
    double scale;
    if (m.stable()) {
        const double a = m.stable()->alpha;
        scale = std::pow(m.stable()->c / std::pow(p, a), 1.0 / (a - 1.0));
    } else {
        scale = m.sigma() * m.sigma() / (p * p);
    }
    return 1e-4 * (zeta > 0.0 ? std::min(zeta, scale) : scale);
}

detail::Tally run(const detail::PathPlan& plan, const MCConfig& cfg) {
    return cfg.execution == Execution::Serial ? detail::run_serial(plan, cfg.n_paths)
                                              : detail::run_parallel(plan, cfg.n_paths, cfg.threads);
}

}  // namespace

MCEstimate estimate_parisian(const ModelSpec& m, double x, double zeta, const MCConfig& cfg) {
    cfg.validate();
    if (!(x >= 0.0)) throw DomainError("x must be >= 0");
    if (!(zeta >= 0.0)) throw DomainError("zeta must be >= 0");
    const bool exact = detail::event_driven(m);
    const double n = static_cast<double>(cfg.n_paths);
    const double barrier = cfg.upper_barrier > 0.0 ? cfg.upper_barrier
                                                   : x + default_barrier(m, 0.1 * 0.5 / std::sqrt(n));
    const double dt = exact ? 0.0 : (cfg.dt > 0.0 ? cfg.dt : default_dt(m, zeta));
    detail::PathPlan plan{&m, x, zeta, barrier, dt, cfg.max_time, cfg.seed};

    MCEstimate out;
    out.n_paths = cfg.n_paths;
    out.dt_used = dt;
    auto tally = run(plan, cfg);
    std::ostringstream note;
    note.precision(6);
    if (exact) {
        note << "exact event-driven kernel";
    } else if (cfg.richardson) {
        plan.dt = dt / 2.0;
        const auto fine = run(plan, cfg);
        const double coarse_p = tally.ruin / n, fine_p = fine.ruin / n;
        // Missed crossings scale like sqrt(dt).
        out.bias_estimate = (coarse_p - fine_p) / (std::sqrt(2.0) - 1.0);
        out.dt_used = plan.dt;
        note << "richardson dt=" << dt << " p=" << coarse_p << ", dt=" << plan.dt << " p=" << fine_p
             << ", bias estimate " << out.bias_estimate;
        tally = fine;
    } else {
        note << "euler dt=" << dt << ", bias not estimated";
    }
    out.p_hat = tally.ruin / n;
    out.stderr_ = std::sqrt(out.p_hat * (1.0 - out.p_hat) / n);
    out.killed = tally.killed;
    out.censored = tally.censored;
    out.truncation_bound = (tally.killed ? tally.killed / n * ruin_bound_from(m, barrier) : 0.0) + tally.censored / n;
    note << "; barrier " << barrier;
    out.discretization_note = note.str();
    return out;
}

MCEstimate estimate_constant(const ModelSpec& m, double zeta, const MCConfig& cfg) {
    if (!(zeta > 0.0)) throw DomainError("zeta must be > 0");
    return estimate_parisian(m, 0.0, zeta, cfg);
}

MCEstimate estimate_classical_ruin(const ModelSpec& m, double x, const MCConfig& cfg) {
    return estimate_parisian(m, x, 0.0, cfg);
}

std::vector<double> sample_infimum_at_exp_time(const ModelSpec& m, double omega, const MCConfig& cfg) {
    cfg.validate();
    if (!(omega > 0.0)) throw DomainError("omega must be > 0");
    const double dt = cfg.dt > 0.0 ? cfg.dt : default_dt(m, 0.0);
    const detail::PathPlan plan{&m, 0.0, 0.0, 0.0, dt, cfg.max_time, cfg.seed};
    return cfg.execution == Execution::Serial ? detail::infima_serial(plan, omega, cfg.n_paths)
                                              : detail::infima_parallel(plan, omega, cfg.n_paths, cfg.threads);
}

}  // namespace parisian::mc
