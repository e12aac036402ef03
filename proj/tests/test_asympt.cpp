#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "parisian/asympt.hpp"
#include "parisian/errors.hpp"
#include "parisian/parisian.hpp"

using namespace parisian;

namespace {

ModelSpec cl_exp() { return ModelSpec::cramer_lundberg(2, 1, ClaimDistribution::exponential(1)); }
ModelSpec mixture() { return ModelSpec::cramer_lundberg(3, 1.2, ClaimDistribution::mixture({0.4, 0.6}, {0.8, 3.0})); }
ModelSpec pareto() { return ModelSpec::cramer_lundberg(2, 1, ClaimDistribution::pareto(3, 1)); }
ModelSpec stable() { return ModelSpec(2, 0, std::nullopt, 0, StableComponent{1, 1.5}); }

ScaleContext talbot(ModelSpec m) { return ScaleContext(std::move(m), InversionConfig{TalbotFixed{24}, false}); }

double d_oracle(double zeta) {
    auto g = [&](double t) {
        if (t == 0.0) return std::sqrt(2.0);
        return std::sqrt(2.0) * std::exp(-3.0 * t) * boost::math::cyl_bessel_i(1, 2.0 * std::sqrt(2.0) * t) / t;
    };
    return 1.0 - boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, zeta, 20, 1e-14);
}

}  // namespace

TEST_CASE("adjustment coefficient") {
    CHECK(cramer_gamma(ScaleContext(cl_exp())) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(cramer_gamma(ScaleContext(ModelSpec::brownian(1.5, 0.8))) == doctest::Approx(2 * 1.5 / 0.64).epsilon(1e-12));
    const ScaleContext mx(mixture());
    const double g = cramer_gamma(mx);
    CHECK(std::abs(laplace_exponent_extended(mixture(), -g)) <= 1e-12);
    CHECK(g < 0.8);
    CHECK_THROWS_AS(cramer_gamma(ScaleContext(pareto())), DomainError);
    CHECK_THROWS_AS(cramer_gamma(ScaleContext(stable())), DomainError);
}

TEST_CASE("ladder mean") {
    const auto mu = cramer_mu(ScaleContext(cl_exp()), 0.5);
    CHECK(mu.mu == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(mu.mu_quadrature == doctest::Approx(4.0).epsilon(1e-10));
    const ScaleContext b(ModelSpec::brownian(1.5, 0.8));
    const auto mb = cramer_mu(b, cramer_gamma(b));
    CHECK(mb.mu == doctest::Approx(0.32).epsilon(1e-12));
    CHECK(mb.mu_quadrature == doctest::Approx(0.32).epsilon(1e-12));
    CHECK(mb.mu_sigma_variant == doctest::Approx(0.8));
    const ScaleContext mx(mixture());
    const auto mm = cramer_mu(mx, cramer_gamma(mx));
    CHECK(std::abs(mm.mu - mm.mu_quadrature) <= 1e-8 * mm.mu);
}

TEST_CASE("Cramer correction function") {
    const ScaleContext c = talbot(cl_exp());
    const double top = 1.0 / (0.5 * 4.0);
    CHECK(f_c(c, 0.5, 4.0, 1e-5) == doctest::Approx(top).epsilon(1e-3));
    CHECK(f_c(c, 0.5, 4.0, 200.0) < 1e-3);
    double prev = top;
    for (double z : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const double v = f_c(c, 0.5, 4.0, z);
        CHECK(v > 0.0);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
    CHECK_THROWS_AS(f_c(c, 0.5, 4.0, 0.0), DomainError);
}

TEST_CASE("Cramer constant") {
    const ScaleContext c = talbot(cl_exp());
    for (double z : {0.5, 1.0, 2.0}) {
        const double d = d_oracle(z);
        const double expect = 0.5 * (2 * d / (2 - (1 - d)));
        const double p0 = parisian_constant(c, z).probability;
        const auto cd = cramer_constant(c, z, p0);
        CHECK(std::abs(cd.constant - expect) <= 1e-6 * expect);
        // x-free: e^{γx} P_x equals the constant
        CHECK(std::exp(0.5 * 3.0) * parisian_cl_exp(2, 1, 1, 3.0, z).probability ==
              doctest::Approx(expect).epsilon(1e-9));
    }
    const auto small = cramer_constant(c, 1e-6, parisian_constant(c, 1e-6).probability);
    CHECK(small.constant == doctest::Approx(small.classical).epsilon(1e-3));
    CHECK(small.classical == doctest::Approx(0.5));
    const auto big = cramer_constant(c, 60.0, parisian_constant(c, 60.0).probability);
    CHECK(big.constant < 1e-5);
    CHECK_THROWS_AS(cramer_constant(c, 1.0, 1.5), DomainError);
}

TEST_CASE("Cramer asymptote is approached") {
    const ScaleContext mx = talbot(mixture());
    const double g = cramer_gamma(mx), zeta = 1.0;
    const auto k = parisian_constant(mx, zeta);
    const auto cd = cramer_constant(mx, zeta, k.probability);
    const double x = 20.0 / g;
    const double r = std::exp(g * x) * parisian_ruin_with_constant(mx, ParisianQuery{x, zeta}, k).probability / cd.constant;
    CHECK(r > 0.95);
    CHECK(r < 1.05);
}

TEST_CASE("overshoot density") {
    const ScaleContext c(cl_exp());
    CHECK(b_density(c, 0.0, 1.0) == 0.0);
    const double mass = integrate_semiinf([&](double z) { return b_density(c, 0.3, z); }, 0.0, TailHint::exponential(0.3)).value;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    for (double z : {0.0, 0.1, 1.0, 5.0, 30.0}) CHECK(b_density(c, 0.3, z) >= 0.0);
    CHECK_THROWS_AS(b_density(c, 1.2, 1.0), DomainError);
    CHECK_THROWS_AS(b_density(ScaleContext(pareto()), 0.3, 1.0), DomainError);
}

TEST_CASE("overshoot correction function") {
    const ScaleContext c = talbot(cl_exp());
    CHECK(f_e(c, 0.0, 3.0) == 1.0);
    CHECK(f_e(c, 0.3, 1e-6) == doctest::Approx(1.0).epsilon(1e-3));
    double prev = 1.0;
    for (double z : {0.5, 1.0, 2.0, 5.0}) {
        const double v = f_e(c, 0.3, z);
        CHECK(v <= prev + 1e-12);
        CHECK(v >= 0.0);
        prev = v;
    }
}

TEST_CASE("convolution-equivalent asymptote") {
    const ScaleContext c = talbot(cl_exp());
    const double k = 0.2;
    for (double x : {1.0, 10.0}) {
        const double ratio = conv_asympt(c, 0.3, x, 1.0, k) / classical_conv_asympt(c, 0.3, x);
        CHECK(std::abs(ratio - (k + (1 - k) * f_e(c, 0.3, 1.0))) <= 1e-12);
    }
    const ScaleContext p(pareto());
    CHECK(conv_asympt(p, 0.0, 5.0, 2.0, 0.3) == doctest::Approx(integrated_jump_tail(pareto(), 5.0) / 1.5).epsilon(1e-14));
    const ScaleContext s(stable());
    const double C = 1.0 / std::tgamma(-1.5);
    CHECK(integrated_jump_tail(stable(), 9.0) == doctest::Approx(C * std::pow(9.0, -0.5) / 0.75).epsilon(1e-13));
    CHECK(conv_asympt(s, 0.0, 1e12, 1.0, 0.4) < 1e-5);
    const auto d = conv_eq_data(c, 0.3, 1.0);
    CHECK(d.prefactor == doctest::Approx(1.0 * std::pow(0.3 / laplace_exponent_extended(cl_exp(), -0.3), 2)));
    CHECK_FALSE(d.condition_flags.empty());
    CHECK(conv_eq_data(p, 0.0, 1.0).f_e_at_zeta == 1.0);
}
