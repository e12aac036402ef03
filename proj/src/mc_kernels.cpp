#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mc_internal.hpp"

namespace parisian::mc {

double sample_stable_increment(double alpha, double c, double dt, Stream& stream) {
    // Chambers–Mallows–Stuck with skewness -1; scale chosen so E e^{θX} = e^{c θ^α dt}.
    const double pi = std::numbers::pi;
    const double v = pi * (stream.uniform() - 0.5);
    const double w = -std::log(stream.uniform());
    const double t = std::tan(pi * alpha / 2.0);
    const double b = std::atan(-t) / alpha;
    const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
    const double z = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
                     std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
    const double scale = std::pow(c * dt * std::abs(std::cos(pi * alpha / 2.0)), 1.0 / alpha);
    return scale * z;
}

namespace detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEta = 0.02;

double exp_draw(Stream& s, double rate) { return -std::log(s.uniform()) / rate; }

double claim_draw(const ModelSpec& m, Stream& s) {
    const double u = s.uniform();
    return m.claims()->sample(u, s.uniform());
}

// Continuous part of the path (drift plus Gaussian or stable noise), stepped adaptively:
// the base step dt is used near 0, and steps grow with the distance d to 0 so that
// crossing within a step stays negligible.
class Stepper {
public:
    Stepper(const ModelSpec& m, double dt) : m_(m), dt_(dt) {}

    double step(double d, bool below) const {
        const double p = m_.premium();
        double far;
        if (m_.stable()) {
            const double a = m_.stable()->alpha, c = m_.stable()->c;
            far = below ? std::min(d / (2.0 * p), std::pow(d / 12.0, a) / c)
                        : std::min(kEta * d / p, std::pow(kEta * d, a) / c);
        } else {
            const double s = m_.sigma();
            // largest h with 6σ√h + p h ≤ d
            const double r = (-6.0 * s + std::sqrt(36.0 * s * s + 4.0 * p * d)) / (2.0 * p);
            far = r * r;
        }
        return std::max(dt_, far);
    }

    double move(double h, Stream& s, std::normal_distribution<double>& normal) const {
        const double drift = m_.premium() * h;
        if (m_.stable()) return drift + sample_stable_increment(m_.stable()->alpha, m_.stable()->c, h, s);
        return drift + m_.sigma() * std::sqrt(h) * normal(s);
    }

private:
    const ModelSpec& m_;
    double dt_;
};

Outcome event_driven_path(const PathPlan& plan, Stream& s) {
    const ModelSpec& m = *plan.model;
    const double p = m.premium(), lam = m.claim_intensity();
    double x = plan.x, t = 0.0;
    while (true) {
        // Above 0: linear growth until the next claim.
        const double w = exp_draw(s, lam);
        if (x + p * w >= plan.barrier) return Outcome::Killed;
        t += w;
        if (t > plan.max_time) return Outcome::Censored;
        x += p * w - claim_draw(m, s);
        double clock = 0.0;
        while (x < 0.0) {
            if (plan.zeta == 0.0) return Outcome::Ruin;
            const double recover = -x / p;
            const double w2 = exp_draw(s, lam);
            if (clock + std::min(w2, recover) >= plan.zeta) return Outcome::Ruin;
            t += w2;
            if (t > plan.max_time) return Outcome::Censored;
            if (w2 < recover) {
                clock += w2;
                x += p * w2 - claim_draw(m, s);
            } else {
                if (p * (w2 - recover) >= plan.barrier) return Outcome::Killed;
                x = p * (w2 - recover) - claim_draw(m, s);
                clock = 0.0;
            }
        }
    }
}

Outcome stepped_path(const PathPlan& plan, Stream& s) {
    const ModelSpec& m = *plan.model;
    const Stepper stepper(m, plan.dt);
    std::normal_distribution<double> normal;
    const double lam = m.claim_intensity();
    double x = plan.x, t = 0.0, clock = 0.0;
    bool below = false;
    double next_claim = lam > 0.0 ? exp_draw(s, lam) : kInf;
    while (true) {
        if (!below && x >= plan.barrier) return Outcome::Killed;
        if (t >= plan.max_time) return Outcome::Censored;
        double h = stepper.step(std::abs(x), below);
        if (below) h = std::min(h, plan.zeta - clock);
        h = std::min({h, next_claim - t, plan.max_time - t});
        const bool claim_now = next_claim - t <= h;
        x += stepper.move(h, s, normal);
        t += h;
        if (below) {
            clock += h;
            if (x >= 0.0) {
                below = false;
            } else if (clock >= plan.zeta) {
                return Outcome::Ruin;
            }
        } else if (x < 0.0) {
            if (plan.zeta == 0.0) return Outcome::Ruin;
            below = true;
            clock = 0.0;
        }
        if (claim_now) {
            t = next_claim;
            x -= claim_draw(m, s);
            next_claim = t + exp_draw(s, lam);
            if (!below && x < 0.0) {
                if (plan.zeta == 0.0) return Outcome::Ruin;
                below = true;
                clock = 0.0;
            }
        }
    }
}

}  // namespace

bool event_driven(const ModelSpec& m) { return m.sigma() == 0.0 && !m.stable(); }

Outcome simulate_path(const PathPlan& plan, std::uint64_t path) {
    Stream s(plan.seed, path);
    return event_driven(*plan.model) ? event_driven_path(plan, s) : stepped_path(plan, s);
}

double simulate_infimum(const PathPlan& plan, double omega, std::uint64_t path) {
    const ModelSpec& m = *plan.model;
    Stream s(plan.seed, path);
    std::normal_distribution<double> normal;
    const double horizon = exp_draw(s, omega);
    const double lam = m.claim_intensity();
    double x = 0.0, t = 0.0, low = 0.0;
    double next_claim = lam > 0.0 ? exp_draw(s, lam) : kInf;
    if (event_driven(m)) {
        // Linear between claims, so the infimum is attained just after a claim.
        while (next_claim < horizon) {
            x += m.premium() * (next_claim - t) - claim_draw(m, s);
            t = next_claim;
            low = std::min(low, x);
            next_claim = t + exp_draw(s, lam);
        }
        return -low;
    }
    const Stepper stepper(m, plan.dt);
    const double sig = m.stable() ? 0.0 : m.sigma();
    while (t < horizon) {
        double h = std::min({stepper.step(x - low, false), horizon - t, next_claim - t});
        const bool claim_now = next_claim - t <= h;
        const double from = x;
        x += stepper.move(h, s, normal);
        t += h;
        if (sig > 0.0) {
            // exact minimum of the Brownian bridge from `from` to x
            const double jump = x - from;
            low = std::min(low, 0.5 * (from + x - std::sqrt(jump * jump - 2.0 * sig * sig * h * std::log(s.uniform()))));
        }
        if (claim_now) {
            x -= claim_draw(m, s);
            t = next_claim;
            next_claim = t + exp_draw(s, lam);
        }
        low = std::min(low, x);
    }
    return -low;
}

}  // namespace detail
}  // namespace parisian::mc
