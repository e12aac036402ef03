#include "parisian/laplace.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "parisian/errors.hpp"

namespace parisian {

namespace {

using quad = boost::multiprecision::cpp_bin_float_quad;
using boost::math::quadrature::gauss_kronrod;

constexpr int kMinStehfest = 4;
constexpr int kMaxStehfest = 20;

quad factorial_q(int n) {
    quad r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

std::vector<quad> compute_stehfest(int n) {
    const int half = n / 2;
    std::vector<quad> v(n + 1, quad(0));
    for (int k = 1; k <= n; ++k) {
        quad sum = 0;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            quad num = boost::multiprecision::pow(quad(j), half) * factorial_q(2 * j);
            quad den = factorial_q(half - j) * factorial_q(j) * factorial_q(j - 1) *
                       factorial_q(k - j) * factorial_q(2 * j - k);
            sum += num / den;
        }
        v[k] = ((k + half) % 2 == 0) ? sum : quad(-sum);
    }
    return v;
}

const std::vector<quad>& stehfest_quad(int n) {
    static std::array<std::vector<quad>, kMaxStehfest + 1> table;
    static std::array<std::once_flag, kMaxStehfest + 1> flags;
    if (n < kMinStehfest || n > kMaxStehfest || n % 2 != 0)
        throw DomainError("Gaver-Stehfest order must be even and in [4, 20]");
    std::call_once(flags[n], [n] { table[n] = compute_stehfest(n); });
    return table[n];
}

// Stehfest sums of orders n-4, n-2, n over one shared set of node values.
std::array<double, 3> stehfest_ladder(const std::vector<double>& node_values, double t, int n) {
    const double ln2_t = std::numbers::ln2 / t;
    std::array<double, 3> out{};
    const std::array<int, 3> orders{std::max(kMinStehfest, n - 4), std::max(kMinStehfest, n - 2), n};
    for (std::size_t o = 0; o < orders.size(); ++o) {
        const auto& v = stehfest_quad(orders[o]);
        quad acc = 0;
        for (int k = 1; k <= orders[o]; ++k) acc += v[k] * quad(node_values[k]);
        out[o] = static_cast<double>(acc) * ln2_t;
    }
    return out;
}

struct GsOutcome {
    double value;
    double err_est;
};

GsOutcome run_gaver_stehfest(const std::function<double(double)>& F, double t, int n) {
    const double ln2_t = std::numbers::ln2 / t;
    std::vector<double> nodes(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
        nodes[k] = F(k * ln2_t);
        if (!std::isfinite(nodes[k]))
            throw NumericalError("gaver-stehfest", "transform not finite at a node");
    }
    auto ladder = stehfest_ladder(nodes, t, n);
    double lo = std::min({ladder[0], ladder[1], ladder[2]});
    double hi = std::max({ladder[0], ladder[1], ladder[2]});
    return {ladder[2], hi - lo};
}

GsOutcome run_talbot(const std::function<cplx(cplx)>& F, double t, int m) {
    double full = talbot_fixed(F, t, m);
    double coarse = talbot_fixed(F, t, m - 8);
    return {full, std::abs(full - coarse)};
}

}  // namespace

void InversionConfig::validate() const {
    if (auto gs = std::get_if<GaverStehfest>(&method)) {
        if (gs->n_terms < 8 || gs->n_terms > 20 || gs->n_terms % 2 != 0)
            throw DomainError("Gaver-Stehfest n_terms must be even and in [8, 20]");
    } else {
        const auto& tb = std::get<TalbotFixed>(method);
        if (tb.n_nodes < 16 || tb.n_nodes > 64)
            throw DomainError("Talbot n_nodes must be in [16, 64]");
    }
}

std::string InversionConfig::describe() const {
    std::ostringstream os;
    if (auto gs = std::get_if<GaverStehfest>(&method))
        os << "gaver-stehfest(" << gs->n_terms << ")";
    else
        os << "talbot(" << std::get<TalbotFixed>(method).n_nodes << ")";
    if (cross_check) os << "+cross-check";
    return os.str();
}

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0) || rel_tol > 1e-8) throw DomainError("quadrature rel_tol must be in (0, 1e-8]");
    if (!(abs_tol > 0.0)) throw DomainError("quadrature abs_tol must be positive");
    if (max_subdivisions < 50) throw DomainError("quadrature max_subdivisions must be >= 50");
}

const std::vector<double>& stehfest_weights(int n_terms) {
    static std::array<std::vector<double>, kMaxStehfest + 1> table;
    static std::array<std::once_flag, kMaxStehfest + 1> flags;
    const auto& q = stehfest_quad(n_terms);
    std::call_once(flags[n_terms], [&] {
        table[n_terms].resize(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) table[n_terms][i] = static_cast<double>(q[i]);
    });
    return table[n_terms];
}

double gaver_stehfest(const std::function<double(double)>& F, double t, int n_terms) {
    if (!(t > 0.0)) throw DomainError("inversion time must be positive");
    return run_gaver_stehfest(F, t, n_terms).value;
}

double talbot_fixed(const std::function<cplx(cplx)>& F, double t, int n_nodes) {
    if (!(t > 0.0)) throw DomainError("inversion time must be positive");
    const int m = n_nodes;
    const double r = 2.0 * m / (5.0 * t);
    double acc = 0.5 * std::exp(r * t) * F(cplx(r, 0.0)).real();
    for (int k = 1; k < m; ++k) {
        const double theta = k * std::numbers::pi / m;
        const double cot = std::cos(theta) / std::sin(theta);
        const cplx s(r * theta * cot, r * theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        acc += (std::exp(t * s) * F(s) * cplx(1.0, sigma)).real();
    }
    return acc * r / m;
}

InversionResult invert(const Transform& F, double t, const InversionConfig& cfg) {
    cfg.validate();
    if (!(t > 0.0)) throw DomainError("inversion time must be positive");
    InversionResult res;
    bool use_talbot = std::holds_alternative<TalbotFixed>(cfg.method);
    if (use_talbot && !F.complex) {
        res.diagnostics.push_back("talbot unavailable for real-only transform; using gaver-stehfest(16)");
        use_talbot = false;
    }
    if (use_talbot) {
        auto out = run_talbot(F.complex, t, std::get<TalbotFixed>(cfg.method).n_nodes);
        res.value = out.value;
        res.err_est = out.err_est;
        res.method = "talbot";
        if (cfg.cross_check && F.real) {
            auto gs = run_gaver_stehfest(F.real, t, 16);
            res.err_est = std::max(res.err_est, std::abs(gs.value - out.value));
            res.diagnostics.push_back("cross-check gaver-stehfest value " + std::to_string(gs.value));
        }
    } else {
        int n = 16;
        if (auto gs = std::get_if<GaverStehfest>(&cfg.method)) n = gs->n_terms;
        auto out = run_gaver_stehfest(F.real, t, n);
        res.value = out.value;
        res.err_est = out.err_est;
        res.method = "gaver-stehfest";
        if (cfg.cross_check && F.complex) {
            auto tb = run_talbot(F.complex, t, 24);
            res.err_est = std::max(res.err_est, std::abs(tb.value - out.value));
            res.diagnostics.push_back("cross-check talbot value " + std::to_string(tb.value));
        }
    }
    if (!std::isfinite(res.value) || res.err_est > 1e-4 * std::max(1.0, std::abs(res.value))) {
        std::ostringstream os;
        os << "inversion at t=" << t << " failed: value " << res.value << ", err_est " << res.err_est;
        throw NumericalError(res.method, os.str());
    }
    return res;
}

InversionResult invert_probability(const Transform& F, double t, const InversionConfig& cfg) {
    auto res = invert(F, t, cfg);
    if (res.value < 0.0 || res.value > 1.0) {
        res.diagnostics.push_back("pre-clamp value " + std::to_string(res.value));
        res.value = std::clamp(res.value, 0.0, 1.0);
    }
    return res;
}

namespace {

unsigned depth_for(int max_subdivisions) {
    unsigned d = 0;
    while ((1 << d) < max_subdivisions) ++d;
    return d;
}

template <class Value>
struct Piece {
    Value value;
    double err;
    double l1;
};

template <class Value, class G>
Piece<Value> gk_piece(const G& g, double a, double b, const QuadratureConfig& cfg) {
    Piece<Value> p{Value(0), 0.0, 0.0};
    p.value = gauss_kronrod<double, 31>::integrate(g, a, b, depth_for(cfg.max_subdivisions), cfg.rel_tol, &p.err,
                                                   &p.l1);
    return p;
}

void police(double err, double l1, double a, double b, const QuadratureConfig& cfg) {
    if (!(err <= std::max(cfg.abs_tol, 1e3 * cfg.rel_tol * l1))) {
        std::ostringstream os;
        os << "no convergence on [" << a << ", " << b << "], err " << err << " vs L1 " << l1;
        throw NumericalError("quadrature", os.str());
    }
}

double tail_cutoff(double a, TailHint hint) {
    if (hint.kind == TailHint::Kind::Exponential) return a + 40.0 / std::max(hint.parameter, 1e-3);
    return std::max({1.0, a, 8.0 * hint.knee}) * 64.0;
}

// Head on [a, cut] plus tail on [cut, ∞). Power-law tails are mapped through
// z = cut·u^{-γ}, which turns z^{-k} into a smooth integrand on (0, 1].
template <class Value>
Piece<Value> semiinf(const std::function<Value(double)>& g, double a, TailHint hint, const QuadratureConfig& cfg) {
    if (!(a >= 0.0)) throw DomainError("semi-infinite quadrature needs a >= 0");
    const double cut = tail_cutoff(a, hint);
    // Geometric panels keep features near a resolved when the head range is long.
    std::vector<Piece<Value>> heads;
    std::vector<double> edges{a};
    for (double w = 1.0; edges.back() < cut; w *= 8.0) edges.push_back(std::min(cut, a + w));
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) heads.push_back(gk_piece<Value>(g, edges[i], edges[i + 1], cfg));
    Piece<Value> tail;
    if (hint.kind == TailHint::Kind::Exponential) {
        tail = gk_piece<Value>(g, cut, std::numeric_limits<double>::infinity(), cfg);
    } else {
        const double gam = std::clamp(2.0 / std::max(hint.parameter - 1.0, 1e-3), 0.5, 8.0);
        auto mapped = [&](double u) -> Value {
            if (u <= 0.0) return Value(0);
            const double z = cut * std::pow(u, -gam);
            return g(z) * (gam * z / u);
        };
        tail = gk_piece<Value>(mapped, 0.0, 1.0, cfg);
    }
    Piece<Value> total = tail;
    for (const auto& h : heads) {
        total.value += h.value;
        total.err += h.err;
        total.l1 += h.l1;
    }
    for (std::size_t i = 0; i < heads.size(); ++i) police(heads[i].err, total.l1, edges[i], edges[i + 1], cfg);
    police(tail.err, total.l1, cut, std::numeric_limits<double>::infinity(), cfg);
    return total;
}

}  // namespace

Estimate integrate(const std::function<double(double)>& g, double a, double b, const QuadratureConfig& cfg) {
    if (b == a) return {};
    auto p = gk_piece<double>(g, a, b, cfg);
    police(p.err, p.l1, a, b, cfg);
    return {p.value, p.err};
}

Estimate integrate_semiinf(const std::function<double(double)>& g, double a, TailHint hint,
                           const QuadratureConfig& cfg) {
    auto p = semiinf<double>(g, a, hint, cfg);
    return {p.value, p.err};
}

cplx integrate_semiinf_complex(const std::function<cplx(double)>& g, double a, TailHint hint,
                               const QuadratureConfig& cfg) {
    return semiinf<cplx>(g, a, hint, cfg).value;
}

}  // namespace parisian
