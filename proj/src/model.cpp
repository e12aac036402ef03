#include "parisian/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "parisian/errors.hpp"
#include "parisian/laplace.hpp"

namespace parisian {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const QuadratureConfig kClaimQuad{1e-14, 1e-17, 4096};

// a ∫_0^∞ e^{-κu} (1+u)^{-a-1} du along the ray where κu is real and positive.
cplx pareto_unit_transform(double a, cplx kappa) {
    const double mod = std::abs(kappa);
    if (mod == 0.0) return {1.0, 0.0};
    const cplx rot = std::conj(kappa) / mod;  // e^{iω}, ω = -arg κ
    auto g = [&](double t) -> cplx { return std::exp(-t) * std::pow(1.0 + t * rot / mod, -a - 1.0); };
    return a * rot / mod * integrate_semiinf_complex(g, 0.0, TailHint::exponential(1.0), kClaimQuad);
}

double pareto_unit_transform(double a, double kappa) {
    if (kappa == 0.0) return 1.0;
    // a ∫ e^{-κu}(1+u)^{-a-1} du with u = t/κ for κ > 0
    auto g = [&](double t) { return std::exp(-t) * std::pow(1.0 + t / kappa, -a - 1.0); };
    return a / kappa * integrate_semiinf(g, 0.0, TailHint::exponential(1.0), kClaimQuad).value;
}

}  // namespace

ClaimDistribution ClaimDistribution::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("exponential claim rate must be positive");
    return ClaimDistribution(ExponentialClaims{rate});
}

ClaimDistribution ClaimDistribution::mixture(std::vector<double> weights, std::vector<double> rates) {
    if (weights.empty() || weights.size() != rates.size())
        throw DomainError("mixture needs matching, nonempty weights and rates");
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0) || !(rates[i] > 0.0) || !std::isfinite(rates[i]))
            throw DomainError("mixture weights and rates must be positive");
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixture weights must sum to 1");
    return ClaimDistribution(MixtureClaims{std::move(weights), std::move(rates)});
}

ClaimDistribution ClaimDistribution::pareto(double shape, double scale) {
    if (!(shape > 1.0) || !(scale > 0.0)) throw DomainError("Pareto claims need shape > 1 and scale > 0");
    return ClaimDistribution(ParetoClaims{shape, scale});
}

bool ClaimDistribution::is_exponential() const noexcept {
    return std::holds_alternative<ExponentialClaims>(law_);
}

bool ClaimDistribution::is_light_tailed() const noexcept {
    return !std::holds_alternative<ParetoClaims>(law_);
}

std::string ClaimDistribution::kind() const {
    return std::visit(overloaded{[](const ExponentialClaims&) { return std::string("exponential"); },
                                 [](const MixtureClaims&) { return std::string("mixture"); },
                                 [](const ParetoClaims&) { return std::string("pareto"); }},
                      law_);
}

double ClaimDistribution::mean() const {
    return std::visit(overloaded{[](const ExponentialClaims& e) { return 1.0 / e.rate; },
                                 [](const MixtureClaims& m) {
                                     double s = 0.0;
                                     for (std::size_t i = 0; i < m.rates.size(); ++i) s += m.weights[i] / m.rates[i];
                                     return s;
                                 },
                                 [](const ParetoClaims& p) { return p.scale / (p.shape - 1.0); }},
                      law_);
}

double ClaimDistribution::tail(double z) const {
    if (z <= 0.0) return 1.0;
    return std::visit(overloaded{[z](const ExponentialClaims& e) { return std::exp(-e.rate * z); },
                                 [z](const MixtureClaims& m) {
                                     double s = 0.0;
                                     for (std::size_t i = 0; i < m.rates.size(); ++i)
                                         s += m.weights[i] * std::exp(-m.rates[i] * z);
                                     return s;
                                 },
                                 [z](const ParetoClaims& p) { return std::pow(1.0 + z / p.scale, -p.shape); }},
                      law_);
}

double ClaimDistribution::density(double z) const {
    if (z < 0.0) return 0.0;
    return std::visit(overloaded{[z](const ExponentialClaims& e) { return e.rate * std::exp(-e.rate * z); },
                                 [z](const MixtureClaims& m) {
                                     double s = 0.0;
                                     for (std::size_t i = 0; i < m.rates.size(); ++i)
                                         s += m.weights[i] * m.rates[i] * std::exp(-m.rates[i] * z);
                                     return s;
                                 },
                                 [z](const ParetoClaims& p) {
                                     return p.shape / p.scale * std::pow(1.0 + z / p.scale, -p.shape - 1.0);
                                 }},
                      law_);
}

double ClaimDistribution::integrated_tail(double x) const {
    x = std::max(x, 0.0);
    return std::visit(overloaded{[x](const ExponentialClaims& e) { return std::exp(-e.rate * x) / e.rate; },
                                 [x](const MixtureClaims& m) {
                                     double s = 0.0;
                                     for (std::size_t i = 0; i < m.rates.size(); ++i)
                                         s += m.weights[i] * std::exp(-m.rates[i] * x) / m.rates[i];
                                     return s;
                                 },
                                 [x](const ParetoClaims& p) {
                                     return p.scale / (p.shape - 1.0) * std::pow(1.0 + x / p.scale, 1.0 - p.shape);
                                 }},
                      law_);
}

double ClaimDistribution::transform_lower_bound() const {
    return std::visit(overloaded{[](const ExponentialClaims& e) { return -e.rate; },
                                 [](const MixtureClaims& m) { return -*std::min_element(m.rates.begin(), m.rates.end()); },
                                 [](const ParetoClaims&) { return 0.0; }},
                      law_);
}

double ClaimDistribution::transform(double beta) const {
    return std::visit(
        overloaded{[beta](const ExponentialClaims& e) {
                       if (beta <= -e.rate) return std::numeric_limits<double>::infinity();
                       return e.rate / (e.rate + beta);
                   },
                   [beta](const MixtureClaims& m) {
                       double s = 0.0;
                       for (std::size_t i = 0; i < m.rates.size(); ++i) {
                           if (beta <= -m.rates[i]) return std::numeric_limits<double>::infinity();
                           s += m.weights[i] * m.rates[i] / (m.rates[i] + beta);
                       }
                       return s;
                   },
                   [beta](const ParetoClaims& p) {
                       if (beta < 0.0) return std::numeric_limits<double>::infinity();
                       return pareto_unit_transform(p.shape, beta * p.scale);
                   }},
        law_);
}

double ClaimDistribution::transform_derivative(double beta) const {
    return std::visit(
        overloaded{[beta](const ExponentialClaims& e) {
                       if (beta <= -e.rate) throw DomainError("claim transform infinite");
                       return -e.rate / ((e.rate + beta) * (e.rate + beta));
                   },
                   [beta](const MixtureClaims& m) {
                       double s = 0.0;
                       for (std::size_t i = 0; i < m.rates.size(); ++i) {
                           if (beta <= -m.rates[i]) throw DomainError("claim transform infinite");
                           s -= m.weights[i] * m.rates[i] / ((m.rates[i] + beta) * (m.rates[i] + beta));
                       }
                       return s;
                   },
                   [this, beta](const ParetoClaims& p) {
                       if (beta < 0.0) throw DomainError("claim transform infinite");
                       if (beta == 0.0) return -mean();
                       auto g = [&](double z) { return -z * std::exp(-beta * z) * density(z); };
                       return integrate_semiinf(g, 0.0, TailHint::power_law(p.shape, 1.0 / beta), kClaimQuad).value;
                   }},
        law_);
}

cplx ClaimDistribution::transform(cplx beta) const {
    return std::visit(overloaded{[beta](const ExponentialClaims& e) { return e.rate / (e.rate + beta); },
                                 [beta](const MixtureClaims& m) {
                                     cplx s = 0.0;
                                     for (std::size_t i = 0; i < m.rates.size(); ++i)
                                         s += m.weights[i] * m.rates[i] / (m.rates[i] + beta);
                                     return s;
                                 },
                                 [beta](const ParetoClaims& p) {
                                     return pareto_unit_transform(p.shape, beta * p.scale);
                                 }},
                      law_);
}

double ClaimDistribution::tail_transform(double s) const {
    if (s < 0.0) throw DomainError("tail transform needs s >= 0");
    return std::visit(overloaded{[s](const ExponentialClaims& e) { return 1.0 / (e.rate + s); },
                                 [s](const MixtureClaims& m) {
                                     double r = 0.0;
                                     for (std::size_t i = 0; i < m.rates.size(); ++i)
                                         r += m.weights[i] / (m.rates[i] + s);
                                     return r;
                                 },
                                 [this, s](const ParetoClaims& p) {
                                     if (s == 0.0) return mean();
                                     auto g = [&](double z) { return std::exp(-s * z) * tail(z); };
                                     return integrate_semiinf(g, 0.0, TailHint::power_law(p.shape, 1.0 / s), kClaimQuad)
                                         .value;
                                 }},
                      law_);
}

double ClaimDistribution::sample(double u, double u_component) const {
    return std::visit(overloaded{[u](const ExponentialClaims& e) { return -std::log(u) / e.rate; },
                                 [u, u_component](const MixtureClaims& m) {
                                     double acc = 0.0;
                                     std::size_t i = 0;
                                     for (; i + 1 < m.weights.size(); ++i) {
                                         acc += m.weights[i];
                                         if (u_component < acc) break;
                                     }
                                     return -std::log(u) / m.rates[i];
                                 },
                                 [u](const ParetoClaims& p) { return p.scale * (std::pow(u, -1.0 / p.shape) - 1.0); }},
                      law_);
}

double StableComponent::levy_density_constant() const { return c / std::tgamma(-alpha); }

ModelSpec::ModelSpec(double premium, double claim_intensity, std::optional<ClaimDistribution> claims, double sigma,
                     std::optional<StableComponent> stable)
    : premium_(premium), intensity_(claim_intensity), claims_(std::move(claims)), sigma_(sigma), stable_(stable) {
    if (!(premium_ > 0.0) || !std::isfinite(premium_)) throw DomainError("premium rate must be positive");
    if (!(intensity_ >= 0.0) || !std::isfinite(intensity_)) throw DomainError("claim intensity must be >= 0");
    if ((intensity_ > 0.0) != claims_.has_value())
        throw DomainError("claims must be given exactly when claim intensity is positive");
    if (!(sigma_ >= 0.0) || !std::isfinite(sigma_)) throw DomainError("sigma must be >= 0");
    if (stable_) {
        if (!(stable_->c > 0.0)) throw DomainError("stable scale c must be positive");
        if (!(stable_->alpha > 1.0 && stable_->alpha < 2.0)) throw DomainError("stable index must lie in (1, 2)");
        if (sigma_ > 0.0) throw DomainError("Gaussian and stable perturbations are mutually exclusive");
    }
    if (intensity_ == 0.0 && sigma_ == 0.0 && !stable_)
        throw DomainError("model needs at least one stochastic component");
    if (!(premium_ - intensity_ * claim_mean() > 0.0))
        throw DomainError("net profit condition violated: mean drift must be positive");
}

bool ModelSpec::is_cl_exponential() const noexcept {
    return has_claims() && claims_->is_exponential() && sigma_ == 0.0 && !stable_;
}

bool ModelSpec::has_rational_exponent() const noexcept {
    return !stable_ && (!has_claims() || claims_->is_light_tailed());
}

VariationClass ModelSpec::variation() const noexcept {
    return (sigma_ == 0.0 && !stable_) ? VariationClass::BoundedVariation : VariationClass::UnboundedVariation;
}

double ModelSpec::claim_mean() const { return has_claims() ? claims_->mean() : 0.0; }

double ModelSpec::rho() const { return intensity_ * claim_mean() / premium_; }

std::string ModelSpec::describe() const {
    std::ostringstream os;
    os << "p=" << premium_;
    if (has_claims()) os << " lambda=" << intensity_ << " claims=" << claims_->kind();
    if (sigma_ > 0.0) os << " sigma=" << sigma_;
    if (stable_) os << " stable(c=" << stable_->c << ", alpha=" << stable_->alpha << ")";
    return os.str();
}

double exponent_lower_bound(const ModelSpec& m) {
    if (m.stable()) return 0.0;
    if (m.has_claims()) return m.claims()->transform_lower_bound();
    return -std::numeric_limits<double>::infinity();
}

double laplace_exponent(const ModelSpec& m, double beta) {
    if (!(beta >= 0.0)) throw DomainError("laplace_exponent needs beta >= 0");
    return laplace_exponent_extended(m, beta);
}

double laplace_exponent_extended(const ModelSpec& m, double beta) {
    if (beta == 0.0) return 0.0;
    if (beta <= exponent_lower_bound(m))
        throw DomainError("Laplace exponent is infinite at the requested argument");
    double v = m.premium() * beta + 0.5 * m.sigma() * m.sigma() * beta * beta;
    if (m.has_claims()) {
        // λ(F̃(β) - 1) = -λβ ∫e^{-βz}F̄(z)dz is cancellation-free for small β ≥ 0
        if (beta > 0.0 && beta < 1e-2 && !m.claims()->is_light_tailed())
            v -= m.claim_intensity() * beta * m.claims()->tail_transform(beta);
        else
            v += m.claim_intensity() * (m.claims()->transform(beta) - 1.0);
    }
    if (m.stable()) v += m.stable()->c * std::pow(beta, m.stable()->alpha);
    return v;
}

double laplace_exponent_derivative(const ModelSpec& m, double beta) {
    const double lb = exponent_lower_bound(m);
    if (beta < lb || (beta == lb && lb != 0.0)) throw DomainError("Laplace exponent derivative undefined");
    double v = m.premium() + m.sigma() * m.sigma() * beta;
    if (m.has_claims()) v += m.claim_intensity() * m.claims()->transform_derivative(beta);
    if (m.stable() && beta > 0.0) v += m.stable()->c * m.stable()->alpha * std::pow(beta, m.stable()->alpha - 1.0);
    return v;
}

cplx laplace_exponent(const ModelSpec& m, cplx beta) {
    cplx v = m.premium() * beta + 0.5 * m.sigma() * m.sigma() * beta * beta;
    if (m.has_claims()) v += m.claim_intensity() * (m.claims()->transform(beta) - 1.0);
    if (m.stable()) v += m.stable()->c * std::pow(beta, m.stable()->alpha);
    return v;
}

cplx laplace_exponent_derivative(const ModelSpec& m, cplx beta) {
    cplx v = m.premium() + m.sigma() * m.sigma() * beta;
    if (m.has_claims()) {
        if (auto* mix = std::get_if<MixtureClaims>(&m.claims()->law())) {
            for (std::size_t i = 0; i < mix->rates.size(); ++i)
                v -= m.claim_intensity() * mix->weights[i] * mix->rates[i] / ((mix->rates[i] + beta) * (mix->rates[i] + beta));
        } else if (auto* e = std::get_if<ExponentialClaims>(&m.claims()->law())) {
            v -= m.claim_intensity() * e->rate / ((e->rate + beta) * (e->rate + beta));
        } else {
            const cplx h = 1e-6 * std::max(1.0, std::abs(beta));
            v += m.claim_intensity() * (m.claims()->transform(beta + h) - m.claims()->transform(beta - h)) / (2.0 * h);
        }
    }
    if (m.stable()) v += m.stable()->c * m.stable()->alpha * std::pow(beta, m.stable()->alpha - 1.0);
    return v;
}

double jump_tail(const ModelSpec& m, double z) {
    if (!(z > 0.0)) throw DomainError("jump_tail needs z > 0");
    double v = m.has_claims() ? m.claim_intensity() * m.claims()->tail(z) : 0.0;
    if (m.stable()) {
        const auto& s = *m.stable();
        v += s.levy_density_constant() * std::pow(z, -s.alpha) / s.alpha;
    }
    return v;
}

double integrated_jump_tail(const ModelSpec& m, double x) {
    if (!(x >= 0.0)) throw DomainError("integrated_jump_tail needs x >= 0");
    double v = m.has_claims() ? m.claim_intensity() * m.claims()->integrated_tail(x) : 0.0;
    if (m.stable()) {
        if (x == 0.0) return std::numeric_limits<double>::infinity();
        const auto& s = *m.stable();
        v += s.levy_density_constant() * std::pow(x, 1.0 - s.alpha) / (s.alpha * (s.alpha - 1.0));
    }
    return v;
}

double mean_drift(const ModelSpec& m) { return m.premium() - m.claim_intensity() * m.claim_mean(); }

double tilted_exponent(const ModelSpec& m, double c, double theta) {
    if (theta < -c) throw DomainError("tilted exponent needs theta >= -c");
    return laplace_exponent_extended(m, theta + c) - laplace_exponent_extended(m, c);
}

}  // namespace parisian
