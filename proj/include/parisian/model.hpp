#pragma once

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace parisian {

using cplx = std::complex<double>;

struct ExponentialClaims {
    double rate;
};

struct MixtureClaims {
    std::vector<double> weights;
    std::vector<double> rates;
};

// Lomax-type Pareto law: tail (1 + z/scale)^(-shape), mean scale/(shape-1).
struct ParetoClaims {
    double shape;
    double scale;
};

class ClaimDistribution {
public:
    using Law = std::variant<ExponentialClaims, MixtureClaims, ParetoClaims>;

    static ClaimDistribution exponential(double rate);
    static ClaimDistribution mixture(std::vector<double> weights, std::vector<double> rates);
    static ClaimDistribution pareto(double shape, double scale);

    const Law& law() const noexcept { return law_; }
    bool is_exponential() const noexcept;
    bool is_light_tailed() const noexcept;  // exponential or mixture
    std::string kind() const;

    double mean() const;
    double tail(double z) const;     // F̄(z)
    double density(double z) const;  // F'(z)
    double integrated_tail(double x) const;  // ∫_x^∞ F̄

    // ∫ e^{-βz} F(dz). Finite for β > -min rate (light tails), β ≥ 0 otherwise.
    double transform(double beta) const;
    double transform_derivative(double beta) const;  // d/dβ of transform
    cplx transform(cplx beta) const;                 // analytic continuation, cut on (-∞, 0]
    // ∫_0^∞ e^{-sz} F̄(z) dz for s ≥ 0.
    double tail_transform(double s) const;
    // Abscissa of convergence: transform(β) finite iff β > lower (or ≥ 0 for Pareto).
    double transform_lower_bound() const;

    // Inverse-CDF draw from a uniform in (0,1) plus a component selector in (0,1).
    double sample(double u, double u_component) const;

private:
    explicit ClaimDistribution(Law law) : law_(std::move(law)) {}
    Law law_;
};

struct StableComponent {
    double c;      // Laplace-exponent coefficient: contributes c·β^alpha to φ
    double alpha;  // stability index in (1, 2)

    // Constant C of the jump density C·y^{-1-alpha} consistent with c·β^alpha.
    double levy_density_constant() const;
};

enum class VariationClass { BoundedVariation, UnboundedVariation };

// Spectrally negative Lévy risk model: X_t = x + p t - S_t + σ B_t (+ stable part).
class ModelSpec {
public:
    ModelSpec(double premium, double claim_intensity, std::optional<ClaimDistribution> claims,
              double sigma = 0.0, std::optional<StableComponent> stable = std::nullopt);

    static ModelSpec cramer_lundberg(double premium, double intensity, ClaimDistribution claims) {
        return ModelSpec(premium, intensity, std::move(claims));
    }
    static ModelSpec brownian(double premium, double sigma) {
        return ModelSpec(premium, 0.0, std::nullopt, sigma);
    }

    double premium() const noexcept { return premium_; }
    double claim_intensity() const noexcept { return intensity_; }
    const std::optional<ClaimDistribution>& claims() const noexcept { return claims_; }
    double sigma() const noexcept { return sigma_; }
    const std::optional<StableComponent>& stable() const noexcept { return stable_; }

    bool has_claims() const noexcept { return intensity_ > 0.0; }
    bool is_pure_brownian() const noexcept { return !has_claims() && !stable_ && sigma_ > 0.0; }
    // Cramér–Lundberg with a single exponential claim law and no perturbation.
    bool is_cl_exponential() const noexcept;
    // Claims from the exponential/mixture family (or none) and no stable part:
    // 1/(φ-q) is rational and scale functions have a finite exponential-sum form.
    bool has_rational_exponent() const noexcept;
    VariationClass variation() const noexcept;

    double claim_mean() const;   // ν (0 without claims)
    double rho() const;          // λν/p
    std::string describe() const;

private:
    double premium_;
    double intensity_;
    std::optional<ClaimDistribution> claims_;
    double sigma_;
    std::optional<StableComponent> stable_;
};

// φ(β) for β ≥ 0.
double laplace_exponent(const ModelSpec& m, double beta);
// φ on its full real domain (negative β allowed where the exponential moment exists).
double laplace_exponent_extended(const ModelSpec& m, double beta);
double laplace_exponent_derivative(const ModelSpec& m, double beta);
// Analytic continuation to the plane cut along (-∞, 0].
cplx laplace_exponent(const ModelSpec& m, cplx beta);
cplx laplace_exponent_derivative(const ModelSpec& m, cplx beta);
// Smallest β where φ(β) is finite (−∞ for pure Brownian).
double exponent_lower_bound(const ModelSpec& m);

double jump_tail(const ModelSpec& m, double z);        // Π̄(z)
double integrated_jump_tail(const ModelSpec& m, double x);  // ∫_x^∞ Π̄(y) dy
double mean_drift(const ModelSpec& m);                  // E X_1 = φ'(0+)
double tilted_exponent(const ModelSpec& m, double c, double theta);

}  // namespace parisian
