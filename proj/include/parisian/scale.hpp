#pragma once

#include <memory>
#include <vector>

#include "parisian/laplace.hpp"
#include "parisian/model.hpp"

namespace parisian {

struct ScaleContext {
    ModelSpec model;
    // Used for transforms that involve Φ (excursion and Parisian quantities).
    InversionConfig inversion{};
    // Used for W^(q) and friends when no exponential-sum form exists.
    InversionConfig scale_inversion{TalbotFixed{24}, false};
    double phi_tol = 1e-13;
    QuadratureConfig quadrature{};

    explicit ScaleContext(ModelSpec m) : model(std::move(m)) {}
    ScaleContext(ModelSpec m, InversionConfig inv) : model(std::move(m)), inversion(inv) {}

    void validate() const;
};

// Φ(θ), the largest root of φ(β) = θ.
double phi_inverse(const ScaleContext& ctx, double theta);
// Analytic continuation of Φ off the positive axis, tracked along an arc from |θ|.
cplx phi_inverse(const ScaleContext& ctx, cplx theta);

// Roots β_j of φ(β) = q together with φ'(β_j), for models with a rational exponent.
// W^(q)(x) = Σ e^{β_j x}/φ'(β_j).
struct ExponentialSum {
    double q = 0.0;
    std::vector<double> roots;   // roots[0] = Φ(q)
    std::vector<double> slopes;  // φ'(roots[j])
};
ExponentialSum exponential_sum(const ScaleContext& ctx, double q);

double scale_w(const ScaleContext& ctx, double q, double x);
double scale_w_derivative(const ScaleContext& ctx, double q, double x);
double scale_z(const ScaleContext& ctx, double q, double x);
// Always inverts 1/(φ(θ)-q) numerically, even when a closed form exists.
double scale_w_numeric(const ScaleContext& ctx, double q, double x);

double classical_ruin(const ScaleContext& ctx, double x);

struct PkResult {
    double probability = 0.0;
    double truncation_bound = 0.0;
    bool truncation_flagged = false;
};
PkResult classical_ruin_pk(const ScaleContext& ctx, double x, int n_max, double h);

// E_x[e^{v X_τ}; τ < ∞] at first passage below 0.
double deficit_mgf(const ScaleContext& ctx, double x, double v);

// ∫ (1 - e^{-s z}) P_x(-X_τ ∈ dz, τ < ∞): the ruin mass minus the deficit transform.
// Built once per x; evaluation at many s is cheap.
class DeficitExcess {
public:
    DeficitExcess(const ScaleContext& ctx, double x);
    ~DeficitExcess();
    DeficitExcess(DeficitExcess&&) noexcept;

    double operator()(double s) const;
    bool has_complex() const;
    cplx operator()(cplx s) const;  // rational models only
    double ruin_mass() const;       // P_x(τ < ∞)

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

double ruin_time_lt(const ScaleContext& ctx, double x, double q);
double inf_at_exp_time_density(const ScaleContext& ctx, double omega, double z);

}  // namespace parisian
