#include "parisian/parisian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "parisian/errors.hpp"
#include "parisian/specfun.hpp"

namespace parisian {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

bool bounded_variation(const ModelSpec& m) { return m.variation() == VariationClass::BoundedVariation; }

// ∫_0^∞ (1 - e^{-sz}) F̄(z) dz = ν - ∫ e^{-sz} F̄(z) dz.
double claim_tail_excess(const ClaimDistribution& f, double s) {
    if (auto* e = std::get_if<ExponentialClaims>(&f.law())) return s / (e->rate * (e->rate + s));
    if (auto* mix = std::get_if<MixtureClaims>(&f.law())) {
        double v = 0.0;
        for (std::size_t i = 0; i < mix->rates.size(); ++i)
            v += mix->weights[i] * s / (mix->rates[i] * (mix->rates[i] + s));
        return v;
    }
    return f.mean() - f.tail_transform(s);
}

cplx claim_tail_excess(const ClaimDistribution& f, cplx s) {
    if (auto* e = std::get_if<ExponentialClaims>(&f.law())) return s / (e->rate * (e->rate + s));
    const auto& mix = std::get<MixtureClaims>(f.law());
    cplx v = 0.0;
    for (std::size_t i = 0; i < mix.rates.size(); ++i) v += mix.weights[i] * s / (mix.rates[i] * (mix.rates[i] + s));
    return v;
}

}  // namespace

void ParisianQuery::validate() const {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("initial reserve x must be finite and >= 0");
    if (!(zeta >= 0.0) || !std::isfinite(zeta)) throw DomainError("grace period zeta must be finite and >= 0");
}

std::string to_string(Route r) {
    switch (r) {
        case Route::ClosedFormExp: return "ClosedFormExp";
        case Route::ClosedFormBM: return "ClosedFormBM";
        case Route::TheoremAssemblyBV: return "TheoremAssemblyBV";
        case Route::HybridMC: return "HybridMC";
    }
    return "unknown";
}

ExcursionIntegral excursion_exceed_integral(const ScaleContext& ctx, double x, double zeta) {
    if (!(x >= 0.0)) throw DomainError("x must be >= 0");
    if (!(zeta > 0.0)) throw DomainError("zeta must be > 0");
    const ModelSpec& m = ctx.model;
    ExcursionIntegral out;
    if (!m.has_claims() && !m.stable()) {
        out.diagnostics.emplace_back("route", "continuous paths: deficit is zero");
        return out;
    }

    DeficitExcess ex(ctx, x);
    Transform fa;
    fa.real = [&](double th) { return ex(phi_inverse(ctx, th)) / th; };
    if (ex.has_complex()) fa.complex = [&](cplx th) { return ex(phi_inverse(ctx, th)) / th; };
    auto ra = invert(fa, zeta, ctx.inversion);
    out.value = ra.value;
    out.err_est = ra.err_est;
    out.diagnostics.emplace_back("route_a", fmt(ra.value));
    out.diagnostics.emplace_back("inversion", ra.method);

    if (x == 0.0 && bounded_variation(m)) {
        const ClaimDistribution& f = *m.claims();
        const double scale = m.claim_intensity() / m.premium();
        Transform fb;
        fb.real = [&](double th) { return scale * claim_tail_excess(f, phi_inverse(ctx, th)) / th; };
        if (m.has_rational_exponent())
            fb.complex = [&](cplx th) { return scale * claim_tail_excess(f, phi_inverse(ctx, th)) / th; };
        auto rb = invert(fb, zeta, ctx.inversion);
        out.diagnostics.emplace_back("route_b", fmt(rb.value));
        out.diagnostics.emplace_back("route_gap", fmt(std::abs(rb.value - ra.value)));
        out.value = rb.value;
        out.err_est = std::max(rb.err_est, std::abs(rb.value - ra.value));
    }
    for (const auto& d : ra.diagnostics) out.diagnostics.emplace_back("inversion_note", d);

    const double mass = ex.ruin_mass();
    if (out.value < 0.0 || out.value > mass) {
        out.diagnostics.emplace_back("clamped_from", fmt(out.value));
        out.value = std::clamp(out.value, 0.0, mass);
    }
    return out;
}

double d_factor(double p, double lambda, double xi, double zeta) {
    if (!(p > 0.0 && lambda > 0.0 && xi > 0.0)) throw DomainError("d_factor needs p, lambda, xi > 0");
    if (!(p * xi > lambda)) throw DomainError("d_factor needs the net profit condition p*xi > lambda");
    if (!(zeta >= 0.0)) throw DomainError("d_factor needs zeta >= 0");
    if (zeta == 0.0) return 1.0;
    const double b = std::sqrt(p * lambda * xi);
    const double c = std::sqrt(p * xi / lambda);
    const double a = lambda + p * xi;
    const double decay = a - 2.0 * b;  // (√(pξ) - √λ)^2
    auto g = [=](double t) {
        if (t < 1e-6) return c * b * (1.0 + 0.5 * b * b * t * t) * std::exp(-a * t);
        return c * std::exp(-decay * t) * specfun::bessel_i1_scaled(2.0 * b * t) / t;
    };
    const QuadratureConfig qc{1e-13, 1e-17, 400};
    // Below 1e-6 only the series branch applies; its t^2 term is under b^2 zeta^3 / 6.
    const double head = zeta < 1e-6 ? -c * b * std::expm1(-a * zeta) / a : integrate(g, 0.0, zeta, qc).value;
    if (head < 0.5) return std::clamp(1.0 - head, 0.0, 1.0);
    const TailHint hint = decay > 1e-3 ? TailHint::exponential(decay) : TailHint::power_law(1.5);
    return std::clamp(integrate_semiinf(g, zeta, hint, qc).value, 0.0, 1.0);
}

ParisianResult parisian_cl_exp(double p, double lambda, double xi, double x, double zeta) {
    if (!(x >= 0.0)) throw DomainError("x must be >= 0");
    if (!(zeta > 0.0)) throw DomainError("zeta must be > 0");
    const double d = d_factor(p, lambda, xi, zeta);
    const double pxi = p * xi;
    const double gamma = (pxi - lambda) / p;
    ParisianResult r;
    r.route = Route::ClosedFormExp;
    r.constant_used = (lambda * d / pxi) / (1.0 - lambda * (1.0 - d) / pxi);
    r.probability = std::clamp(lambda / pxi * std::exp(-gamma * x) * (pxi * d / (pxi - lambda * (1.0 - d))), 0.0, 1.0);
    r.err_est = 1e-12 * r.probability;
    r.diagnostics.emplace_back("D", fmt(d));
    return r;
}

ParisianResult parisian_bm(double p, double sigma, double x, double zeta) {
    if (!(p > 0.0 && sigma > 0.0)) throw DomainError("parisian_bm needs p, sigma > 0");
    if (!(x >= 0.0)) throw DomainError("x must be >= 0");
    if (!(zeta > 0.0)) throw DomainError("zeta must be > 0");
    const double a = p / sigma * std::sqrt(zeta / 2.0);
    const double sp = std::sqrt(std::numbers::pi);
    // Ψ(a) - a√π and Ψ(a) + a√π, rearranged to avoid cancellation for large a.
    const double num = std::max(0.0, std::exp(-a * a) - sp * a * std::erfc(a));
    const double den = std::exp(-a * a) + sp * a * (2.0 - std::erfc(a));
    ParisianResult r;
    r.route = Route::ClosedFormBM;
    r.constant_used = num / den;
    r.probability = std::clamp(std::exp(-2.0 * p * x / (sigma * sigma)) * r.constant_used, 0.0, 1.0);
    r.err_est = 1e-15;
    r.diagnostics.emplace_back("a", fmt(a));
    return r;
}

ConstantResult parisian_constant(const ScaleContext& ctx, double zeta, const std::optional<mc::MCConfig>& mc_cfg) {
    if (!(zeta > 0.0)) throw DomainError("zeta must be > 0");
    const ModelSpec& m = ctx.model;
    ConstantResult out;
    if (m.is_pure_brownian()) {
        auto bm = parisian_bm(m.premium(), m.sigma(), 0.0, zeta);
        out.probability = bm.probability;
        out.err_est = bm.err_est;
        out.route = Route::ClosedFormBM;
        return out;
    }
    if (bounded_variation(m)) {
        auto j = excursion_exceed_integral(ctx, 0.0, zeta);
        const double rho = m.rho();
        const double den = 1.0 - rho + j.value;
        out.probability = std::clamp(j.value / den, 0.0, 1.0);
        out.err_est = (1.0 - rho) / (den * den) * j.err_est;
        out.route = Route::TheoremAssemblyBV;
        out.diagnostics = std::move(j.diagnostics);
        out.diagnostics.emplace_back("J0", fmt(j.value));
        return out;
    }
    if (!mc_cfg) throw UsageError("unbounded-variation models need a Monte Carlo configuration for the constant");
    auto est = mc::estimate_constant(m, zeta, *mc_cfg);
    out.probability = est.p_hat;
    out.err_est = est.stderr_ + est.truncation_bound + std::abs(est.bias_estimate);
    out.route = Route::HybridMC;
    out.diagnostics.emplace_back("mc_stderr", fmt(est.stderr_));
    out.diagnostics.emplace_back("mc_paths", std::to_string(est.n_paths));
    out.diagnostics.emplace_back("mc_truncation_bound", fmt(est.truncation_bound));
    if (!est.discretization_note.empty()) out.diagnostics.emplace_back("mc_discretization", est.discretization_note);
    return out;
}

ParisianResult parisian_ruin_with_constant(const ScaleContext& ctx, const ParisianQuery& q,
                                           const ConstantResult& constant) {
    q.validate();
    if (!(q.zeta > 0.0)) throw DomainError("zeta must be > 0");
    const ModelSpec& m = ctx.model;
    ParisianResult r;
    r.route = constant.route;
    r.constant_used = constant.probability;
    r.diagnostics = constant.diagnostics;
    if (q.x == 0.0 && bounded_variation(m)) {
        r.probability = constant.probability;
        r.err_est = constant.err_est;
        r.diagnostics.emplace_back("fixed_point", "x=0 returns the constant");
        return r;
    }
    const double psi = classical_ruin(ctx, q.x);
    const auto j = excursion_exceed_integral(ctx, q.x, q.zeta);
    for (const auto& d : j.diagnostics) r.diagnostics.emplace_back("J." + d.first, d.second);
    const double pc = constant.probability;
    r.probability = std::clamp(psi * pc + (1.0 - pc) * j.value, 0.0, psi);
    r.err_est = std::abs(psi - j.value) * constant.err_est + (1.0 - pc) * j.err_est;
    r.diagnostics.emplace_back("classical_ruin", fmt(psi));
    r.diagnostics.emplace_back("J", fmt(j.value));

    // Alternative J for Gaussian-perturbed exponential claims that treats the whole ruin
    // mass as an exponential deficit; kept for comparison only.
    if (m.sigma() > 0.0 && m.has_claims() && m.claims()->is_exponential()) {
        const double xi = std::get<ExponentialClaims>(m.claims()->law()).rate;
        Transform f;
        f.real = [&](double th) {
            const double s = phi_inverse(ctx, th);
            return psi * (1.0 - xi / (s + xi)) / th;
        };
        try {
            const double alt = invert(f, q.zeta, ctx.inversion).value;
            r.diagnostics.emplace_back("J_whole_mass_exponential", fmt(alt));
        } catch (const NumericalError&) {
            r.diagnostics.emplace_back("J_whole_mass_exponential", "inversion failed");
        }
    }
    return r;
}

ParisianResult parisian_ruin(const ScaleContext& ctx, const ParisianQuery& q, const std::optional<mc::MCConfig>& mc_cfg) {
    q.validate();
    const ModelSpec& m = ctx.model;
    if (q.zeta == 0.0) {
        ParisianResult r;
        r.probability = classical_ruin(ctx, q.x);
        r.constant_used = classical_ruin(ctx, 0.0);
        r.route = m.is_cl_exponential() ? Route::ClosedFormExp
                  : m.is_pure_brownian() ? Route::ClosedFormBM
                  : bounded_variation(m) ? Route::TheoremAssemblyBV
                                         : Route::HybridMC;
        r.diagnostics.emplace_back("zeta_zero", "answered by classical ruin");
        return r;
    }
    if (m.is_cl_exponential()) {
        const double xi = std::get<ExponentialClaims>(m.claims()->law()).rate;
        return parisian_cl_exp(m.premium(), m.claim_intensity(), xi, q.x, q.zeta);
    }
    if (m.is_pure_brownian()) return parisian_bm(m.premium(), m.sigma(), q.x, q.zeta);
    return parisian_ruin_with_constant(ctx, q, parisian_constant(ctx, q.zeta, mc_cfg));
}

namespace {

// Density of X_s at z from 0 for drift p, Brownian σ and exponential(ξ) claims at rate λ.
double marginal_density(const ModelSpec& m, double s, double z) {
    const double p = m.premium(), sig = m.sigma();
    const double sd = sig * std::sqrt(s);
    auto normal = [&](double y) { return specfun::normal_pdf((y - p * s) / sd) / sd; };
    double total = normal(z);
    if (!m.has_claims()) return total;
    const double lam = m.claim_intensity() * s;
    const double xi = std::get<ExponentialClaims>(m.claims()->law()).rate;
    const int kmax = static_cast<int>(lam + 10.0 * std::sqrt(lam) + 20.0);
    double poisson = std::exp(-lam);
    total *= poisson;
    for (int k = 1; k <= kmax; ++k) {
        poisson *= lam / k;
        if (poisson < 1e-300) break;
        const double lg = k * std::log(xi) - std::lgamma(static_cast<double>(k));
        auto g = [&](double y) {
            if (y <= 0.0) return k == 1 ? std::exp(lg) * normal(z) : 0.0;
            return std::exp(lg + (k - 1) * std::log(y) - xi * y) * normal(z + y);
        };
        const double gk = integrate_semiinf(g, 0.0, TailHint::exponential(xi), QuadratureConfig{1e-11, 1e-300, 200}).value;
        total += poisson * gk;
    }
    return total;
}

}  // namespace

double first_passage_up_cdf(const ScaleContext& ctx, double z, double t, PassageRoute route) {
    if (!(z > 0.0)) throw DomainError("first passage level must be positive");
    if (!(t > 0.0)) throw DomainError("first passage time must be positive");
    const ModelSpec& m = ctx.model;
    if (route == PassageRoute::Auto) route = PassageRoute::Inversion;
    if (m.is_pure_brownian() && route != PassageRoute::Kendall) {
        const double p = m.premium(), s = m.sigma();
        const double rt = s * std::sqrt(t);
        const double v = specfun::normal_cdf((p * t - z) / rt) +
                         std::exp(2.0 * p * z / (s * s)) * specfun::normal_cdf((-z - p * t) / rt);
        return std::clamp(v, 0.0, 1.0);
    }
    if (route == PassageRoute::Kendall) {
        const bool ok = m.sigma() > 0.0 && !m.stable() && (!m.has_claims() || m.claims()->is_exponential());
        if (!ok) throw UsageError("the Kendall route needs a Brownian model with at most exponential claims");
        auto dens = [&](double s) { return s <= 0.0 ? 0.0 : z / s * marginal_density(m, s, z); };
        return std::clamp(integrate(dens, 0.0, t, QuadratureConfig{1e-10, 1e-14, 200}).value, 0.0, 1.0);
    }
    Transform f;
    f.real = [&](double th) { return std::exp(-phi_inverse(ctx, th) * z) / th; };
    if (m.has_rational_exponent()) f.complex = [&](cplx th) { return std::exp(-phi_inverse(ctx, th) * z) / th; };
    return invert_probability(f, t, ctx.inversion).value;
}

double bv_deficit_density(const ScaleContext& ctx, double z) {
    if (!bounded_variation(ctx.model)) throw UsageError("deficit density from 0 needs a bounded-variation model");
    if (!(z > 0.0)) throw DomainError("z must be positive");
    return jump_tail(ctx.model, z) / ctx.model.premium();
}

}  // namespace parisian
