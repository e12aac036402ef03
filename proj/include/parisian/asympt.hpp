#pragma once

#include <string>
#include <utility>
#include <vector>

#include "parisian/scale.hpp"

namespace parisian {

// Positive root γ of φ(-γ) = 0.
double cramer_gamma(const ScaleContext& ctx);

struct MuValue {
    double mu = 0.0;             // -φ'(-γ)/γ
    double mu_quadrature = 0.0;  // λ∫ y e^{γy} F̄(y) dy + σ²/2
    double mu_sigma_variant = 0.0;  // λ∫ y e^{γy} F̄(y) dy + σ, the unscaled Gaussian correction
};
MuValue cramer_mu(const ScaleContext& ctx, double gamma);

double f_c(const ScaleContext& ctx, double gamma, double mu, double zeta);

struct CramerData {
    double gamma = 0.0;
    double mu = 0.0;
    double constant = 0.0;  // lim e^{γx} P_x(τ^ζ < ∞)
    double f_c_at_zeta = 0.0;
    double classical = 0.0;  // φ'(0+)/(γμ)
    double err_est = 0.0;
    std::vector<std::pair<std::string, std::string>> diagnostics;
};
// `constant` is P(τ^ζ < ∞) from 0.
CramerData cramer_constant(const ScaleContext& ctx, double zeta, double constant);

double b_density(const ScaleContext& ctx, double alpha_c, double z);
double f_e(const ScaleContext& ctx, double alpha_c, double zeta);

struct ConvEqData {
    double alpha_c = 0.0;
    double prefactor = 0.0;  // E X_1 (α/φ(-α))², or 1/E X_1 at α = 0
    double f_e_at_zeta = 1.0;
    std::vector<std::string> condition_flags;
};
ConvEqData conv_eq_data(const ScaleContext& ctx, double alpha_c, double zeta);

// Prefactor times ∫_x^∞ Π̄: the convolution-equivalent classical ruin asymptote.
double classical_conv_asympt(const ScaleContext& ctx, double alpha_c, double x);
double conv_asympt(const ScaleContext& ctx, double alpha_c, double x, double zeta, double constant);

}  // namespace parisian
