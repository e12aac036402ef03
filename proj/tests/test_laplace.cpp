#include <doctest.h>

#include <cmath>

#include "parisian/errors.hpp"
#include "parisian/laplace.hpp"

using namespace parisian;

namespace {

Transform make(std::function<double(double)> f, std::function<cplx(cplx)> g) { return Transform{f, g}; }

const InversionConfig kGS{GaverStehfest{16}, false};
const InversionConfig kTalbot{TalbotFixed{24}, false};

}  // namespace

TEST_CASE("inversion of textbook transforms") {
    const auto one = make([](double s) { return 1.0 / s; }, [](cplx s) { return 1.0 / s; });
    const auto expo = make([](double s) { return 1.0 / (s + 1.0); }, [](cplx s) { return 1.0 / (s + 1.0); });
    const auto ramp = make([](double s) { return 1.0 / (s * s); }, [](cplx s) { return 1.0 / (s * s); });
    for (const auto& cfg : {kGS, kTalbot}) {
        CHECK(invert(one, 1.0, cfg).value == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(invert(expo, 1.0, cfg).value == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
        CHECK(invert(ramp, 2.5, cfg).value == doctest::Approx(2.5).epsilon(1e-6));
    }
    CHECK(invert(ramp, 2.5, kTalbot).value == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(invert(expo, 1.0, kTalbot).value == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(talbot_fixed([](cplx s) { return 1.0 / (s * s + 1.0); }, 2.0, 32) == doctest::Approx(std::sin(2.0)).epsilon(1e-10));
}

TEST_CASE("stehfest weights") {
    const auto& w = stehfest_weights(16);
    double sum = 0.0;
    for (int k = 1; k <= 16; ++k) sum += w[k];
    CHECK(std::abs(sum) < 1e-3);
}

TEST_CASE("inversion diagnostics") {
    InversionConfig cc{GaverStehfest{16}, true};
    const auto expo = make([](double s) { return 1.0 / (s + 1.0); }, [](cplx s) { return 1.0 / (s + 1.0); });
    const auto r = invert(expo, 1.0, cc);
    CHECK(r.err_est > 0.0);
    CHECK(r.err_est < 1e-4);
    const auto p = invert_probability(make([](double s) { return 1.0 / s; }, nullptr), 0.5, kGS);
    CHECK(p.value <= 1.0);
    CHECK_THROWS_AS((InversionConfig{GaverStehfest{15}, false}.validate()), DomainError);
    CHECK_THROWS_AS(invert(expo, 0.0, kGS), DomainError);
    // without a complex branch Talbot falls back to Gaver-Stehfest and says so
    const auto fb = invert(make([](double s) { return 1.0 / s; }, nullptr), 1.0, kTalbot);
    CHECK(fb.method == "gaver-stehfest");
    REQUIRE(!fb.diagnostics.empty());
    CHECK(fb.diagnostics.front().find("talbot unavailable") != std::string::npos);
}

TEST_CASE("quadrature") {
    CHECK(integrate_semiinf([](double z) { return std::exp(-z); }, 0.0, TailHint::exponential(1)).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate_semiinf([](double z) { return z * std::exp(-0.5 * z); }, 0.0, TailHint::exponential(0.5)).value ==
          doctest::Approx(4.0).epsilon(1e-12));
    CHECK(integrate_semiinf([](double z) { return std::pow(z, -2.5); }, 1.0, TailHint::power_law(2.5)).value ==
          doctest::Approx(1.0 / 1.5).epsilon(1e-10));
    CHECK(integrate([](double z) { return std::sin(z); }, 0.0, M_PI).value == doctest::Approx(2.0).epsilon(1e-13));
    // a slow power tail with a knee far from the origin
    CHECK(integrate_semiinf([](double z) { return std::pow(1.0 + z / 50.0, -2.2); }, 0.0, TailHint::power_law(2.2, 50.0))
              .value == doctest::Approx(50.0 / 1.2).epsilon(1e-9));
    const cplx c = integrate_semiinf_complex([](double z) { return std::exp(cplx(-1.0, 1.0) * z); }, 0.0,
                                             TailHint::exponential(1.0));
    CHECK(c.real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.imag() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(integrate([](double z) { return 1.0 / std::sqrt(std::abs(z - 0.3)) * std::sin(1.0 / (z - 0.3)); },
                              0.0, 1.0, QuadratureConfig{1e-14, 1e-300, 50}),
                    NumericalError);
}
