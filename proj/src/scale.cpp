#include "parisian/scale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "parisian/errors.hpp"
#include "parisian/specfun.hpp"

namespace parisian {

namespace {

// Rational exponent pieces: distinct rates (ascending) with merged weights.
struct RationalParts {
    double p, lambda, s2;
    std::vector<double> rates, weights;
};

RationalParts rational_parts(const ModelSpec& m) {
    RationalParts r{m.premium(), m.claim_intensity(), m.sigma() * m.sigma(), {}, {}};
    if (!m.has_claims()) return r;
    std::map<double, double> merged;
    if (auto* e = std::get_if<ExponentialClaims>(&m.claims()->law())) {
        merged[e->rate] = 1.0;
    } else {
        const auto& mix = std::get<MixtureClaims>(m.claims()->law());
        for (std::size_t i = 0; i < mix.rates.size(); ++i) merged[mix.rates[i]] += mix.weights[i];
    }
    for (auto [rate, w] : merged) {
        if (!r.rates.empty() && std::abs(rate - r.rates.back()) <= 1e-12 * rate) {
            r.weights.back() += w;
            continue;
        }
        r.rates.push_back(rate);
        r.weights.push_back(w);
    }
    return r;
}

double rat_phi(const RationalParts& r, double b) {
    double v = r.p * b + 0.5 * r.s2 * b * b - r.lambda;
    for (std::size_t i = 0; i < r.rates.size(); ++i) v += r.lambda * r.weights[i] * r.rates[i] / (r.rates[i] + b);
    return v;
}

double rat_dphi(const RationalParts& r, double b) {
    double v = r.p + r.s2 * b;
    for (std::size_t i = 0; i < r.rates.size(); ++i) {
        const double d = r.rates[i] + b;
        v -= r.lambda * r.weights[i] * r.rates[i] / (d * d);
    }
    return v;
}

// Root of f on (a, b) with f(a) > 0 > f(b) or the reverse, then Newton polish.
template <class F, class D>
double bracketed_root(F f, D df, double a, double b) {
    const double fa = f(a), fb = f(b);
    if (!(fa * fb < 0.0)) {
        std::ostringstream os;
        os << "no sign change on [" << a << ", " << b << "]";
        throw NumericalError("root-bracket", os.str());
    }
    std::uintmax_t iters = 200;
    auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52),
                                                      iters);
    double x = 0.5 * (lo + hi);
    for (int k = 0; k < 3; ++k) {
        const double d = df(x);
        if (d == 0.0) break;
        const double nx = x - f(x) / d;
        if (!(nx > a && nx < b) || std::abs(f(nx)) >= std::abs(f(x))) break;
        x = nx;
    }
    return x;
}

bool closed_form(const ScaleContext& ctx) { return ctx.model.has_rational_exponent(); }

double w_at_zero(const ModelSpec& m) {
    return m.variation() == VariationClass::BoundedVariation ? 1.0 / m.premium() : 0.0;
}

// Gauss–Legendre panels on [0, x], graded towards both ends.
void graded_nodes(double x, std::vector<double>& nodes, std::vector<double>& weights) {
    using GL = boost::math::quadrature::gauss<double, 20>;
    static const double fr[] = {0.0, 1e-6, 1e-4, 1e-2, 0.1, 0.5, 0.9, 0.99, 0.9999, 0.999999, 1.0};
    nodes.clear();
    weights.clear();
    for (std::size_t i = 0; i + 1 < std::size(fr); ++i) {
        const double a = fr[i] * x, b = fr[i + 1] * x;
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (std::size_t k = 0; k < GL::abscissa().size(); ++k) {
            for (int sgn : {-1, 1}) {
                nodes.push_back(c + sgn * h * GL::abscissa()[k]);
                weights.push_back(h * GL::weights()[k]);
            }
        }
    }
}

}  // namespace

void ScaleContext::validate() const {
    if (!(phi_tol > 0.0) || phi_tol > 1e-10) throw DomainError("phi_tol must be in (0, 1e-10]");
    inversion.validate();
    scale_inversion.validate();
    quadrature.validate();
}

double phi_inverse(const ScaleContext& ctx, double theta) {
    if (!(theta >= 0.0)) throw DomainError("phi_inverse needs theta >= 0");
    if (theta == 0.0) return 0.0;
    const ModelSpec& m = ctx.model;
    if (m.is_pure_brownian()) {
        const double p = m.premium(), s2 = m.sigma() * m.sigma();
        return 2.0 * theta / (p + std::sqrt(p * p + 2.0 * s2 * theta));
    }
    auto f = [&](double b) { return laplace_exponent(m, b) - theta; };
    auto df = [&](double b) { return laplace_exponent_derivative(m, b); };
    double lo = 0.0, hi = std::max(1.0, theta / m.premium() + 1.0);
    int grow = 0;
    while (f(hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++grow > 200) throw NumericalError("phi_inverse", "could not bracket the root");
    }
    double root;
    if (f(lo) == 0.0) {
        root = lo;
    } else {
        std::uintmax_t iters = 200;
        auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                                        iters);
        root = 0.5 * (a + b);
        for (int k = 0; k < 3; ++k) {
            const double nx = root - f(root) / df(root);
            if (!(nx > 0.0) || std::abs(f(nx)) >= std::abs(f(root))) break;
            root = nx;
        }
    }
    if (std::abs(f(root)) > ctx.phi_tol * std::max(1.0, theta)) {
        std::ostringstream os;
        os << "residual " << std::abs(f(root)) << " at theta=" << theta;
        throw NumericalError("phi_inverse", os.str());
    }
    return root;
}

cplx phi_inverse(const ScaleContext& ctx, cplx theta) {
    if (theta.imag() == 0.0 && theta.real() >= 0.0) return phi_inverse(ctx, theta.real());
    const ModelSpec& m = ctx.model;
    if (m.is_pure_brownian()) {
        const double p = m.premium(), s2 = m.sigma() * m.sigma();
        return 2.0 * theta / (p + std::sqrt(p * p + 2.0 * s2 * theta));
    }
    const double radius = std::abs(theta);
    const double target = std::arg(theta);
    cplx beta = phi_inverse(ctx, radius);
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(target) / 0.05)));
    for (int k = 1; k <= steps; ++k) {
        const cplx th = std::polar(radius, target * k / steps);
        bool done = false;
        for (int it = 0; it < 60 && !done; ++it) {
            const cplx step = (laplace_exponent(m, beta) - th) / laplace_exponent_derivative(m, beta);
            beta -= step;
            done = std::abs(step) <= 4e-16 * (1.0 + std::abs(beta));
        }
        if (!done && k == steps) {
            const cplx res = laplace_exponent(m, beta) - th;
            if (std::abs(res) > 1e-10 * std::max(1.0, radius))
                throw NumericalError("phi_inverse", "continuation off the real axis did not converge");
        }
    }
    return beta;
}

ExponentialSum exponential_sum(const ScaleContext& ctx, double q) {
    const ModelSpec& m = ctx.model;
    if (!m.has_rational_exponent()) throw DomainError("exponential-sum scale function needs a rational exponent");
    if (!(q >= 0.0)) throw DomainError("q must be >= 0");
    const RationalParts r = rational_parts(m);
    auto f = [&](double b) { return rat_phi(r, b) - q; };
    auto df = [&](double b) { return rat_dphi(r, b); };

    ExponentialSum es;
    es.q = q;
    es.roots.push_back(phi_inverse(ctx, q));

    // Negative roots interlace the poles -rates[i]; zero is excluded when q = 0.
    const double right = (q == 0.0) ? -1e-9 * (r.rates.empty() ? 2.0 * r.p / r.s2 : r.rates.front()) : 0.0;
    double upper = right;
    for (std::size_t i = 0; i < r.rates.size(); ++i) {
        const double pole = -r.rates[i];
        es.roots.push_back(bracketed_root(f, df, pole + 1e-13 * r.rates[i], upper));
        upper = pole - 1e-13 * r.rates[i];
    }
    if (r.s2 > 0.0) {
        double lo = upper - 1.0;
        int grow = 0;
        while (f(lo) <= 0.0) {
            lo = upper - 2.0 * (upper - lo);
            if (++grow > 200) throw NumericalError("scale", "could not bracket the Gaussian root");
        }
        es.roots.push_back(bracketed_root(f, df, lo, upper));
    }
    for (double b : es.roots) es.slopes.push_back(rat_dphi(r, b));
    return es;
}

double scale_w_numeric(const ScaleContext& ctx, double q, double x) {
    if (!(q >= 0.0)) throw DomainError("q must be >= 0");
    if (x < 0.0) return 0.0;
    if (x == 0.0) return w_at_zero(ctx.model);
    const ModelSpec& m = ctx.model;
    const double shift = phi_inverse(ctx, q);
    Transform F;
    F.real = [&m, shift, q](double b) { return 1.0 / (laplace_exponent(m, b + shift) - q); };
    F.complex = [&m, shift, q](cplx b) { return 1.0 / (laplace_exponent(m, b + shift) - q); };
    auto res = invert(F, x, ctx.scale_inversion);
    return std::exp(shift * x) * res.value;
}

double scale_w(const ScaleContext& ctx, double q, double x) {
    if (!(q >= 0.0)) throw DomainError("q must be >= 0");
    if (x < 0.0) return 0.0;
    if (!closed_form(ctx)) return scale_w_numeric(ctx, q, x);
    const auto es = exponential_sum(ctx, q);
    double w = 0.0;
    for (std::size_t j = 0; j < es.roots.size(); ++j) w += std::exp(es.roots[j] * x) / es.slopes[j];
    return std::max(w, 0.0);
}

double scale_w_derivative(const ScaleContext& ctx, double q, double x) {
    if (x < 0.0) return 0.0;
    if (closed_form(ctx)) {
        const auto es = exponential_sum(ctx, q);
        double d = 0.0;
        for (std::size_t j = 0; j < es.roots.size(); ++j) d += es.roots[j] * std::exp(es.roots[j] * x) / es.slopes[j];
        return d;
    }
    const double h = 1e-6 * std::max(1.0, x);
    if (x < h) return (scale_w(ctx, q, x + h) - scale_w(ctx, q, x)) / h;
    return (scale_w(ctx, q, x + h) - scale_w(ctx, q, x - h)) / (2.0 * h);
}

double scale_z(const ScaleContext& ctx, double q, double x) {
    if (!(q >= 0.0)) throw DomainError("q must be >= 0");
    if (x <= 0.0 || q == 0.0) return 1.0;
    if (closed_form(ctx)) {
        const auto es = exponential_sum(ctx, q);
        double z = 1.0;
        for (std::size_t j = 0; j < es.roots.size(); ++j)
            z += q * std::expm1(es.roots[j] * x) / (es.roots[j] * es.slopes[j]);
        return z;
    }
    auto w = [&](double y) { return scale_w(ctx, q, y); };
    return 1.0 + q * integrate(w, 0.0, x, QuadratureConfig{1e-10, 1e-14, 64}).value;
}

double classical_ruin(const ScaleContext& ctx, double x) {
    if (!(x >= 0.0)) throw DomainError("classical_ruin needs x >= 0");
    const ModelSpec& m = ctx.model;
    const double drift = mean_drift(m);
    double v;
    if (closed_form(ctx)) {
        // Drop the constant term 1/φ'(0) analytically to avoid cancellation.
        const auto es = exponential_sum(ctx, 0.0);
        v = 0.0;
        for (std::size_t j = 1; j < es.roots.size(); ++j) v -= drift * std::exp(es.roots[j] * x) / es.slopes[j];
    } else {
        v = 1.0 - drift * scale_w(ctx, 0.0, x);
    }
    return std::clamp(v, 0.0, 1.0);
}

PkResult classical_ruin_pk(const ScaleContext& ctx, double x, int n_max, double h) {
    if (!(x >= 0.0)) throw DomainError("classical_ruin_pk needs x >= 0");
    if (n_max < 0) throw DomainError("n_max must be >= 0");
    if (!(h > 0.0)) throw DomainError("grid step must be positive");
    const ModelSpec& m = ctx.model;
    const double rho = m.rho();
    const double p = m.premium();

    enum class Kernel { Atom, Gaussian, Stable } kind = Kernel::Atom;
    if (m.sigma() > 0.0) kind = Kernel::Gaussian;
    if (m.stable()) kind = Kernel::Stable;
    auto kcdf = [&](double z) -> double {
        if (z < 0.0) return 0.0;
        switch (kind) {
            case Kernel::Atom: return 1.0;
            case Kernel::Gaussian: return -std::expm1(-2.0 * p * z / (m.sigma() * m.sigma()));
            case Kernel::Stable:
                return 1.0 - specfun::ml_tail(p / m.stable()->c, m.stable()->alpha, z).value;
        }
        return 1.0;
    };

    PkResult out;
    out.truncation_bound = std::pow(rho, n_max + 1);
    out.truncation_flagged = out.truncation_bound > 1e-6;
    if (x == 0.0 || !m.has_claims()) {
        out.probability = std::clamp(1.0 - (1.0 - rho) * kcdf(x), 0.0, 1.0);
        return out;
    }

    const int n = std::max(1, static_cast<int>(std::lround(x / h)));
    const double dh = x / n;
    const double nu = m.claim_mean();
    auto mdens = [&](double z) { return z < 0.0 ? 0.0 : m.claims()->tail(z) / nu; };

    std::vector<double> dk;  // cell masses of K
    if (kind != Kernel::Atom) {
        dk.resize(n);
        double prev = kcdf(0.0);
        for (int i = 0; i < n; ++i) {
            const double cur = kcdf((i + 1) * dh);
            dk[i] = cur - prev;
            prev = cur;
        }
    }

    // Density of L = K * M on the grid.
    std::vector<double> l(n + 1);
    for (int j = 0; j <= n; ++j) {
        if (kind == Kernel::Atom) {
            l[j] = mdens(j * dh);
        } else {
            double s = 0.0;
            for (int i = 0; i < j; ++i) s += dk[i] * mdens(j * dh - (i + 0.5) * dh);
            l[j] = s;
        }
    }

    auto trapconv = [&](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> c(n + 1, 0.0);
        for (int j = 1; j <= n; ++j) {
            double s = 0.5 * (a[0] * b[j] + a[j] * b[0]);
            for (int i = 1; i < j; ++i) s += a[i] * b[j - i];
            c[j] = s * dh;
        }
        return c;
    };

    std::vector<double> acc(n + 1), cur = l;
    double weight = rho;
    for (int j = 0; j <= n; ++j) acc[j] = weight * cur[j];
    for (int k = 2; k <= n_max; ++k) {
        weight *= rho;
        if (weight < 1e-18) break;
        cur = trapconv(cur, l);
        for (int j = 0; j <= n; ++j) acc[j] += weight * cur[j];
    }
    std::vector<double> ucdf(n + 1, 0.0);
    for (int j = 1; j <= n; ++j) ucdf[j] = ucdf[j - 1] + 0.5 * dh * (acc[j - 1] + acc[j]);

    double s;
    if (kind == Kernel::Atom) {
        s = 1.0 + ucdf[n];
    } else {
        s = kcdf(x);
        for (int i = 0; i < n; ++i) {
            const int j = n - 1 - i;  // x - (i+1/2)dh lies at the middle of cell j
            s += dk[i] * 0.5 * (ucdf[j] + ucdf[j + 1]);
        }
    }
    out.probability = std::clamp(1.0 - (1.0 - rho) * s, 0.0, 1.0);
    return out;
}

namespace {

double knee_integral(const std::function<double(double)>& g, double knee, double decay, const QuadratureConfig& cfg) {
    return integrate_semiinf(g, 0.0, TailHint::power_law(decay, knee), cfg).value;
}

}  // namespace

struct DeficitExcess::Impl {
    const ScaleContext* ctx;
    double x;
    double psi;
    bool rational;
    ExponentialSum es;
    double drift;
    // Non-rational route.
    double wx = 0.0;
    std::vector<double> nodes, weights, wdiff;

    double jump_kernel(double s, double y) const;
    double tail_part(double s) const;
};

// ∫_0^∞ (1 - e^{-sz}) π(y + z) dz for the Lévy density π of the jumps.
double DeficitExcess::Impl::jump_kernel(double s, double y) const {
    const ModelSpec& m = ctx->model;
    double v = 0.0;
    if (m.has_claims()) {
        const auto& law = m.claims()->law();
        if (auto* e = std::get_if<ExponentialClaims>(&law)) {
            v += m.claim_intensity() * std::exp(-e->rate * y) * s / (e->rate + s);
        } else if (auto* mix = std::get_if<MixtureClaims>(&law)) {
            for (std::size_t i = 0; i < mix->rates.size(); ++i)
                v += m.claim_intensity() * mix->weights[i] * std::exp(-mix->rates[i] * y) * s / (mix->rates[i] + s);
        } else {
            const auto& par = std::get<ParetoClaims>(law);
            auto g = [&](double z) { return -std::expm1(-s * z) * m.claims()->density(y + z); };
            v += m.claim_intensity() * knee_integral(g, 1.0 / s, par.shape + 1.0, ctx->quadrature);
        }
    }
    if (m.stable()) {
        const double a = m.stable()->alpha;
        const double c = m.stable()->levy_density_constant();
        auto g = [&](double u) { return -std::expm1(-s * y * u) * std::pow(1.0 + u, -1.0 - a); };
        v += c * std::pow(y, -a) * knee_integral(g, 1.0 / (s * y), 1.0 + a, ctx->quadrature);
    }
    return v;
}

double DeficitExcess::Impl::tail_part(double s) const {
    const ModelSpec& m = ctx->model;
    auto g = [&](double z) { return -std::expm1(-s * z) * jump_tail(m, x + z); };
    double decay = m.stable() ? m.stable()->alpha : 2.0;
    if (m.has_claims()) {
        if (auto* par = std::get_if<ParetoClaims>(&m.claims()->law())) decay = std::min(decay, par->shape);
    }
    return knee_integral(g, 1.0 / s, decay, ctx->quadrature);
}

DeficitExcess::DeficitExcess(const ScaleContext& ctx, double x) : impl_(std::make_unique<Impl>()) {
    if (!(x >= 0.0)) throw DomainError("deficit needs x >= 0");
    impl_->ctx = &ctx;
    impl_->x = x;
    impl_->drift = mean_drift(ctx.model);
    impl_->rational = closed_form(ctx);
    impl_->psi = classical_ruin(ctx, x);
    if (impl_->rational) {
        impl_->es = exponential_sum(ctx, 0.0);
        return;
    }
    impl_->wx = scale_w(ctx, 0.0, x);
    if (x > 0.0) {
        graded_nodes(x, impl_->nodes, impl_->weights);
        impl_->wdiff.resize(impl_->nodes.size());
        for (std::size_t k = 0; k < impl_->nodes.size(); ++k)
            impl_->wdiff[k] = impl_->wx - scale_w(ctx, 0.0, x - impl_->nodes[k]);
    }
}

DeficitExcess::~DeficitExcess() = default;
DeficitExcess::DeficitExcess(DeficitExcess&&) noexcept = default;

double DeficitExcess::ruin_mass() const { return impl_->psi; }

bool DeficitExcess::has_complex() const { return impl_->rational; }

cplx DeficitExcess::operator()(cplx s) const {
    if (!impl_->rational) throw UsageError("complex deficit transform needs a rational exponent");
    const auto& es = impl_->es;
    const cplx ph = laplace_exponent(impl_->ctx->model, s);
    cplx mgf = 0.0;
    for (std::size_t j = 1; j < es.roots.size(); ++j) {
        const double b = es.roots[j];
        mgf += std::exp(b * impl_->x) / es.slopes[j] * b / (s * (s - b));
    }
    return impl_->psi - ph * mgf;
}

double DeficitExcess::operator()(double s) const {
    if (!(s >= 0.0)) throw DomainError("deficit transform needs s >= 0");
    if (s == 0.0) return 0.0;
    if (impl_->rational) return (*this)(cplx(s, 0.0)).real();
    double v = impl_->wx > 0.0 ? impl_->wx * impl_->tail_part(s) : 0.0;
    for (std::size_t k = 0; k < impl_->nodes.size(); ++k)
        v += impl_->weights[k] * impl_->wdiff[k] * impl_->jump_kernel(s, impl_->nodes[k]);
    return v;
}

double deficit_mgf(const ScaleContext& ctx, double x, double v) {
    if (!(v > 0.0)) throw DomainError("deficit_mgf needs v > 0");
    DeficitExcess ex(ctx, x);
    return std::clamp(ex.ruin_mass() - ex(v), 0.0, ex.ruin_mass());
}

double ruin_time_lt(const ScaleContext& ctx, double x, double q) {
    if (!(q > 0.0)) throw DomainError("ruin_time_lt needs q > 0");
    if (x < 0.0) return 1.0;
    const ModelSpec& m = ctx.model;
    if (closed_form(ctx)) {
        const auto es = exponential_sum(ctx, q);
        const double big = es.roots[0];
        double v = 1.0 - q / (big * es.slopes[0]);
        for (std::size_t j = 1; j < es.roots.size(); ++j) {
            const double b = es.roots[j];
            v += q * std::expm1(b * x) / (b * es.slopes[j]) - (q / big) * std::exp(b * x) / es.slopes[j];
        }
        return std::clamp(v, 0.0, 1.0);
    }
    const double big = phi_inverse(ctx, q);
    if (x == 0.0) return std::clamp(1.0 - (q / big) * w_at_zero(m), 0.0, 1.0);
    // Transform of the whole quantity; the pole at Φ(q) cancels.
    auto G = [&m, big, q](cplx b) {
        auto g = [&](cplx s) { return (big * laplace_exponent(m, s) - q * s) / (s * big * (laplace_exponent(m, s) - q)); };
        if (std::abs(b - big) < 1e-4 * big) {
            const double d = 1e-4 * big;
            return 0.5 * (g(b + d) + g(b - d));
        }
        return g(b);
    };
    Transform F;
    F.complex = G;
    F.real = [G](double b) { return G(cplx(b, 0.0)).real(); };
    return std::clamp(invert(F, x, ctx.scale_inversion).value, 0.0, 1.0);
}

double inf_at_exp_time_density(const ScaleContext& ctx, double omega, double z) {
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
    if (!(z > 0.0)) throw DomainError("z must be positive");
    if (closed_form(ctx)) {
        const auto es = exponential_sum(ctx, omega);
        const double big = es.roots[0];
        double d = 0.0;
        for (std::size_t j = 1; j < es.roots.size(); ++j)
            d += std::exp(es.roots[j] * z) / es.slopes[j] * omega * (es.roots[j] / big - 1.0);
        return std::max(d, 0.0);
    }
    const double big = phi_inverse(ctx, omega);
    return std::max(0.0, omega / big * scale_w_derivative(ctx, omega, z) - omega * scale_w(ctx, omega, z));
}

}  // namespace parisian
