// End-to-end acceptance checks, one verdict line per criterion.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <tuple>

#include "parisian/asympt.hpp"
#include "parisian/errors.hpp"
#include "parisian/mc.hpp"
#include "parisian/parisian.hpp"

using namespace parisian;

namespace {

const InversionConfig kTalbot{TalbotFixed{24}, false};

ModelSpec cl_exp() { return ModelSpec::cramer_lundberg(2, 1, ClaimDistribution::exponential(1)); }
ModelSpec stable() { return ModelSpec(2, 0, std::nullopt, 0, StableComponent{1, 1.5}); }

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string format(const char* fmt, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

mc::MCConfig mc_config(std::uint64_t n) {
    mc::MCConfig c;
    c.n_paths = n;
    return c;
}

Verdict closed_form_vs_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = cl_exp();
    double worst = 0.0;
    for (double x : {0.0, 0.5, 1.0, 2.0})
        for (double z : {0.5, 1.0, 2.0}) {
            const auto e = mc::estimate_parisian(m, x, z, mc_config(1000000));
            const double cf = parisian_cl_exp(2, 1, 1, x, z).probability;
            worst = std::max(worst, std::abs(cf - e.p_hat) / (3 * e.stderr_ + e.truncation_bound));
        }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst <= 1.0 && secs <= 120.0,
            format("worst |cf - mc| / (3 stderr + bound) = %.3f over 12 cells, %.1f s", worst, secs)};
}

Verdict assembly_vs_closed_form() {
    const ScaleContext ctx(cl_exp(), kTalbot);
    double worst = 0.0;
    for (double z : {0.5, 1.0, 2.0}) {
        const auto k = parisian_constant(ctx, z);
        for (double x : {0.0, 0.5, 1.0, 2.0}) {
            const double a = parisian_ruin_with_constant(ctx, ParisianQuery{x, z}, k).probability;
            const double cf = parisian_cl_exp(2, 1, 1, x, z).probability;
            worst = std::max(worst, std::abs(a - cf) / cf);
        }
    }
    return {worst <= 1e-6, format("worst relative gap %.2e with Talbot inversion", worst)};
}

Verdict brownian() {
    const double p = 1, s = 1, zeta = 2;
    const auto m = ModelSpec::brownian(p, s);
    auto cfg = mc_config(1000000);
    cfg.dt = 1e-4;
    cfg.richardson = true;
    std::string detail;
    bool ok = true;
    for (double x : {0.0, 0.5}) {
        const auto e = x == 0.0 ? mc::estimate_constant(m, zeta, cfg) : mc::estimate_parisian(m, x, zeta, cfg);
        const double cf = parisian_bm(p, s, x, zeta).probability;
        const double tol = 3 * e.stderr_ + std::abs(e.bias_estimate) + e.truncation_bound;
        ok = ok && std::abs(cf - e.p_hat) <= tol;
        detail += format("x=%g: cf %.6f mc %.6f tol %.2e; ", x, cf, e.p_hat, tol);
    }
    double worst = 0.0;
    for (double x : {0.0, 0.25, 1.0, 3.0})
        worst = std::max(worst, std::abs(parisian_bm(p, s, x, 1e-8).probability - std::exp(-2 * p * x / (s * s))));
    ok = ok && worst <= 1e-6;
    detail += format("zeta=1e-8 gap %.2e", worst);
    return {ok, detail};
}

Verdict cramer_identity() {
    const ScaleContext ctx(cl_exp(), kTalbot);
    const double p = 2, lam = 1, xi = 1;
    double worst = 0.0;
    for (double z : {0.5, 1.0, 2.0}) {
        const double d = d_factor(p, lam, xi, z);
        const double exact = lam / (p * xi) * (p * xi * d / (p * xi - lam * (1 - d)));
        const auto c = cramer_constant(ctx, z, parisian_constant(ctx, z).probability);
        worst = std::max(worst, std::abs(c.constant - exact) / exact);
    }
    return {worst <= 1e-6, format("worst relative gap %.2e", worst)};
}

Verdict mu_routes() {
    double worst = 0.0;
    for (const auto& m : {cl_exp(), ModelSpec::cramer_lundberg(1.5, 2, ClaimDistribution::exponential(3)),
                          ModelSpec::cramer_lundberg(3, 1.2, ClaimDistribution::mixture({0.4, 0.6}, {0.8, 3.0}))}) {
        const ScaleContext ctx(m);
        const auto mu = cramer_mu(ctx, cramer_gamma(ctx));
        worst = std::max(worst, std::abs(mu.mu - mu.mu_quadrature) / mu.mu);
    }
    return {worst <= 1e-8, format("worst relative gap %.2e over 3 models", worst)};
}

Verdict scale_stack() {
    double w_gap = 0.0;
    for (const auto& m : {ModelSpec::brownian(1, std::sqrt(2.0)), cl_exp()}) {
        const ScaleContext ctx(m);
        for (double q : {0.0, 0.5, 1.0})
            for (int i = 0; i <= 40; ++i) {
                const double x = 0.25 * i;
                const double w = scale_w(ctx, q, x);
                w_gap = std::max(w_gap, std::abs(scale_w_numeric(ctx, q, x) - w) / std::max(1.0, w));
            }
    }
    double phi_gap = 0.0;
    for (const auto& m : {ModelSpec::brownian(1, std::sqrt(2.0)), cl_exp(), stable(),
                          ModelSpec::cramer_lundberg(2, 1, ClaimDistribution::pareto(3, 1)),
                          ModelSpec(1, 0.5, ClaimDistribution::exponential(1), 1.0)}) {
        const ScaleContext ctx(m);
        for (double th : {1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0})
            phi_gap = std::max(phi_gap, std::abs(laplace_exponent(m, phi_inverse(ctx, th)) - th) / std::max(1.0, th));
    }
    const ScaleContext bv_exp(cl_exp());
    const ScaleContext bv_pareto(ModelSpec::cramer_lundberg(2, 1, ClaimDistribution::pareto(3, 1)));
    const ScaleContext ubv_bm(ModelSpec::brownian(1, 1));
    const ScaleContext ubv_jd(ModelSpec(1, 0.5, ClaimDistribution::exponential(1), 1.0));
    double zero_gap = 0.0;
    for (double q : {0.0, 1.0}) {
        zero_gap = std::max(zero_gap, std::abs(scale_w(bv_exp, q, 1e-10) - 0.5));
        zero_gap = std::max(zero_gap, std::abs(scale_w(bv_pareto, q, 1e-10) - 0.5));
        zero_gap = std::max(zero_gap, scale_w(ubv_bm, q, 1e-10));
        zero_gap = std::max(zero_gap, scale_w(ubv_jd, q, 1e-10));
    }
    return {w_gap <= 1e-8 && phi_gap <= 1e-12 && zero_gap <= 1e-6,
            format("W numeric gap %.2e, |phi(Phi)-theta| %.2e, W(0+) gap %.2e", w_gap, phi_gap, zero_gap)};
}

Verdict pollaczek_khintchine() {
    const ScaleContext ctx(cl_exp());
    double pk_gap = 0.0;
    for (double x : {0.0, 0.5, 1.0, 2.0, 5.0})
        pk_gap = std::max(pk_gap, std::abs(classical_ruin_pk(ctx, x, 40, 1e-3).probability - classical_ruin(ctx, x)));
    const auto m = stable();
    const ScaleContext sc(m);
    auto cfg = mc_config(100000);
    cfg.dt = 1e-4;
    cfg.max_time = 1e12;
    double worst = 0.0;
    std::string values;
    for (double x : {0.5, 1.0, 2.0}) {
        const auto e = mc::estimate_classical_ruin(m, x, cfg);
        const double series = classical_ruin(sc, x);
        worst = std::max(worst, std::abs(e.p_hat - series) / (3 * e.stderr_));
        values += format(" x=%g %.4f/%.4f", x, series, e.p_hat);
    }
    return {pk_gap <= 1e-4 && worst <= 1.0,
            format("PK gap %.2e; stable series/MC%s, worst |diff|/(3 stderr) = %.3f", pk_gap, values.c_str(), worst)};
}

Verdict d_limits() {
    const double d0 = d_factor(2, 1, 1, 0.0), d50 = d_factor(2, 1, 1, 50.0);
    return {d0 == 1.0 && d50 < 1e-6 && d50 >= 0.0, format("D(0) = %.17g, D(50) = %.2e", d0, d50)};
}

Verdict convolution_equivalent() {
    const ScaleContext ctx(cl_exp(), kTalbot);
    const double a = 0.3;
    const double mass =
        integrate_semiinf([&](double z) { return b_density(ctx, a, z); }, 0.0, TailHint::exponential(a)).value;
    bool nonneg = true;
    for (int i = 0; i <= 200; ++i) nonneg = nonneg && b_density(ctx, a, 0.1 * i) >= 0.0;
    const double fe0 = f_e(ctx, a, 1e-8);
    bool mono = true;
    double prev = 1.0;
    for (double z : {0.5, 1.0, 2.0, 5.0}) {
        const double v = f_e(ctx, a, z);
        mono = mono && v <= prev + 1e-12;
        prev = v;
    }
    double identity = 0.0;
    for (double x : {2.0, 20.0})
        for (double k : {0.1, 0.6}) {
            const double r = conv_asympt(ctx, a, x, 1.0, k) / classical_conv_asympt(ctx, a, x);
            identity = std::max(identity, std::abs(r - (k + (1 - k) * f_e(ctx, a, 1.0))));
        }

    // stable model with alpha_c = 0: hybrid numerator over the asymptote
    const ScaleContext sc(stable());
    auto cfg = mc_config(100000);
    cfg.max_time = 1e12;
    const double zeta = 1.0;
    const auto constant = parisian_constant(sc, zeta, cfg);
    std::vector<double> ratio;
    for (double x : {20.0, 40.0, 80.0}) {
        const double num = parisian_ruin_with_constant(sc, ParisianQuery{x, zeta}, constant).probability;
        ratio.push_back(num / conv_asympt(sc, 0.0, x, zeta, constant.probability));
    }
    bool in_band = true;
    for (double r : ratio) in_band = in_band && r >= 0.7 && r <= 1.3;
    const bool trend = std::abs(ratio[2] - 1.0) <= std::abs(ratio[0] - 1.0);
    const bool ok = std::abs(mass - 1.0) <= 1e-6 && nonneg && std::abs(fe0 - 1.0) <= 1e-6 && mono &&
                    identity <= 1e-12 && in_band && trend;
    return {ok, format("int B = %.9f, B>=0 %s, f_e(0+) = %.8f, nonincreasing %s, identity gap %.1e, "
                       "stable ratios %.4f %.4f %.4f",
                       mass, nonneg ? "yes" : "no", fe0, mono ? "yes" : "no", identity, ratio[0], ratio[1], ratio[2])};
}

ModelSpec random_model(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int kind = static_cast<int>(u(rng) * 4);
    const double lam = 0.3 + 1.7 * u(rng);
    const double load = 1.1 + 2.0 * u(rng);
    switch (kind) {
        case 0: {
            const double xi = 0.5 + 2.5 * u(rng);
            return ModelSpec::cramer_lundberg(load * lam / xi, lam, ClaimDistribution::exponential(xi));
        }
        case 1: {
            const double w = 0.1 + 0.8 * u(rng), r1 = 0.5 + u(rng), r2 = 2.0 + 3.0 * u(rng);
            const auto f = ClaimDistribution::mixture({w, 1 - w}, {r1, r2});
            return ModelSpec::cramer_lundberg(load * lam * f.mean(), lam, f);
        }
        case 2: {
            const double shape = 2.2 + 2.0 * u(rng), scale = 0.5 + u(rng);
            const auto f = ClaimDistribution::pareto(shape, scale);
            return ModelSpec::cramer_lundberg(load * lam * f.mean(), lam, f);
        }
        default: return ModelSpec::brownian(0.3 + 2.0 * u(rng), 0.5 + 1.5 * u(rng));
    }
}

Verdict monotonicity_suite() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int bad = 0;
    std::string first;
    for (int i = 0; i < 200; ++i) {
        const auto m = random_model(rng);
        const ScaleContext ctx(m);
        const double x = 3.0 * u(rng), dx = 0.1 + u(rng), z = 0.1 + 3.0 * u(rng), dz = 0.1 + u(rng);
        try {
            const auto r = parisian_ruin(ctx, ParisianQuery{x, z});
            const double rx = parisian_ruin(ctx, ParisianQuery{x + dx, z}).probability;
            const double rz = parisian_ruin(ctx, ParisianQuery{x, z + dz}).probability;
            const double psi = classical_ruin(ctx, x);
            const double tol = 1e-9;
            bool ok = r.probability >= 0.0 && r.probability <= 1.0 && rx <= r.probability + tol &&
                      rz <= r.probability + tol && r.probability <= psi + tol;
            if (m.variation() == VariationClass::BoundedVariation) {
                // each route returns its own constant at x = 0; across routes the inversion error applies
                const auto zero = parisian_ruin(ctx, ParisianQuery{0.0, z});
                ok = ok && std::abs(zero.probability - zero.constant_used) <= 1e-12;
                ok = ok && std::abs(zero.probability - parisian_constant(ctx, z).probability) <= 1e-5;
            }
            if (!ok && first.empty()) first = m.describe() + format(" x=%g zeta=%g", x, z);
            bad += !ok;
        } catch (const std::exception& e) {
            if (first.empty()) first = m.describe() + ": " + e.what();
            ++bad;
        }
    }
    return {bad == 0, format("%d of 200 cases violate", bad) + (first.empty() ? "" : "; first: " + first)};
}

bool same(const mc::MCEstimate& a, const mc::MCEstimate& b) {
    return std::memcmp(&a.p_hat, &b.p_hat, sizeof(double)) == 0 &&
           std::memcmp(&a.truncation_bound, &b.truncation_bound, sizeof(double)) == 0 && a.killed == b.killed &&
           a.censored == b.censored;
}

Verdict reproducibility() {
    int mismatches = 0, runs = 0;
    for (const auto& [m, x, z] : {std::tuple{cl_exp(), 0.5, 1.0}, std::tuple{ModelSpec::brownian(1, 1), 0.5, 1.0},
                                  std::tuple{stable(), 1.0, 0.5}}) {
        auto cfg = mc_config(20000);
        cfg.seed = 12345;
        cfg.threads = 1;
        const auto ref = mc::estimate_parisian(m, x, z, cfg);
        for (int t : {4, 8}) {
            cfg.threads = t;
            mismatches += !same(ref, mc::estimate_parisian(m, x, z, cfg));
            ++runs;
        }
    }
    return {mismatches == 0, format("%d of %d multi-worker runs differ from the 1-worker run", mismatches, runs)};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"closed form vs event-driven oracle", closed_form_vs_oracle},
        {"assembly vs closed form", assembly_vs_closed_form},
        {"Brownian closed form", brownian},
        {"Cramer identity", cramer_identity},
        {"ladder mean route equality", mu_routes},
        {"scale-function stack", scale_stack},
        {"Pollaczek-Khintchine and stable series", pollaczek_khintchine},
        {"D-factor limits", d_limits},
        {"convolution-equivalent properties", convolution_equivalent},
        {"monotonicity and sandwich suite", monotonicity_suite},
        {"Monte Carlo reproducibility", reproducibility},
    };
    int failed = 0, index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        std::printf("criterion %2d %s: %s (%s)\n", index, v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
        std::fflush(stdout);
        failed += !v.pass;
    }
    std::printf("%d of %d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
