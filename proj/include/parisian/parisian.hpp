#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parisian/mc.hpp"
#include "parisian/scale.hpp"

namespace parisian {

struct ParisianQuery {
    double x = 0.0;     // initial reserve
    double zeta = 1.0;  // grace period

    void validate() const;
};

enum class Route { ClosedFormExp, ClosedFormBM, TheoremAssemblyBV, HybridMC };
std::string to_string(Route r);

using Diagnostics = std::vector<std::pair<std::string, std::string>>;

struct ParisianResult {
    double probability = 0.0;
    Route route = Route::TheoremAssemblyBV;
    double err_est = 0.0;
    double constant_used = 0.0;  // P(τ^ζ < ∞) from zero
    Diagnostics diagnostics;
};

// J(x, ζ) = ∫ P(τ_z^+ > ζ) P_x(-X_τ ∈ dz, τ < ∞).
struct ExcursionIntegral {
    double value = 0.0;
    double err_est = 0.0;
    Diagnostics diagnostics;
};
ExcursionIntegral excursion_exceed_integral(const ScaleContext& ctx, double x, double zeta);

double d_factor(double p, double lambda, double xi, double zeta);

ParisianResult parisian_cl_exp(double p, double lambda, double xi, double x, double zeta);
ParisianResult parisian_bm(double p, double sigma, double x, double zeta);

struct ConstantResult {
    double probability = 0.0;
    double err_est = 0.0;
    Route route = Route::TheoremAssemblyBV;
    Diagnostics diagnostics;
};
ConstantResult parisian_constant(const ScaleContext& ctx, double zeta,
                                 const std::optional<mc::MCConfig>& mc_cfg = std::nullopt);

ParisianResult parisian_ruin(const ScaleContext& ctx, const ParisianQuery& q,
                             const std::optional<mc::MCConfig>& mc_cfg = std::nullopt);
// Same as parisian_ruin with a constant computed once by the caller (grid sweeps).
ParisianResult parisian_ruin_with_constant(const ScaleContext& ctx, const ParisianQuery& q,
                                           const ConstantResult& constant);

enum class PassageRoute { Auto, Inversion, Kendall };
// P(τ_z^+ ≤ t) started from 0.
double first_passage_up_cdf(const ScaleContext& ctx, double z, double t, PassageRoute route = PassageRoute::Auto);

// Density of the deficit at ruin from 0 for bounded variation: Π̄(z)/p.
double bv_deficit_density(const ScaleContext& ctx, double z);

}  // namespace parisian
