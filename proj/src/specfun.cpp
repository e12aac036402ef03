#include "parisian/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "parisian/errors.hpp"

namespace parisian::specfun {

void SeriesControl::validate() const {
    if (max_terms < 8) throw DomainError("series max_terms must be >= 8");
    if (!(rel_tol > 0.0) || rel_tol > 1e-3) throw DomainError("series rel_tol must be in (0, 1e-3]");
}

double bessel_i1(double x) {
    if (!(x >= 0.0)) throw DomainError("bessel_i1 needs x >= 0");
    if (x == 0.0) return 0.0;
    return boost::math::cyl_bessel_i(1, x);
}

double bessel_i1_scaled(double x) {
    if (!(x >= 0.0)) throw DomainError("bessel_i1_scaled needs x >= 0");
    if (x < 500.0) return std::exp(-x) * bessel_i1(x);
    // Hankel expansion: e^{-x} I_1(x) ~ (2πx)^{-1/2} Σ (-1)^k a_k(1) / x^k
    const double mu = 4.0;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 30; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (k * 8.0 * x);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

namespace {

using quad = boost::multiprecision::cpp_bin_float_quad;

// log of the largest term magnitude z^n / Γ(1+βn).
double log_peak_term(double z, double beta, int max_terms) {
    if (z <= 0.0) return 0.0;
    double best = 0.0;
    const double lz = std::log(z);
    for (int n = 1; n < max_terms; ++n) {
        const double lt = n * lz - std::lgamma(1.0 + beta * n);
        best = std::max(best, lt);
        if (beta * n > 2.0 * std::pow(z, 1.0 / beta) + 10.0 && lt < best - 5.0) break;
    }
    return best;
}

template <class Real>
SeriesValue sum_series(double z, double beta, const SeriesControl& ctl) {
    using std::abs;
    Real sum = 1;
    Real prev_mag = 1;
    const Real lz = z > 0.0 ? Real(boost::multiprecision::log(quad(z))) : Real(0);
    SeriesValue out;
    for (int n = 1; n < ctl.max_terms; ++n) {
        Real mag;
        if constexpr (std::is_same_v<Real, double>) {
            mag = std::exp(n * std::log(z) - std::lgamma(1.0 + beta * n));
        } else {
            mag = boost::multiprecision::exp(n * lz - boost::math::lgamma(Real(1) + Real(beta) * n));
        }
        sum += (n % 2 == 0) ? mag : Real(-mag);
        const Real scale = std::max<Real>(abs(sum), Real(1e-300));
        if (mag < Real(ctl.rel_tol) * scale && mag < prev_mag) {
            out.terms = n + 1;
            out.raw = static_cast<double>(sum);
            return out;
        }
        prev_mag = mag;
    }
    throw NumericalError("ml_tail", "alternating series did not converge within max_terms");
}

}  // namespace

SeriesValue ml_tail(double p, double alpha, double x, const SeriesControl& ctl) {
    ctl.validate();
    if (!(x >= 0.0)) throw DomainError("ml_tail needs x >= 0");
    if (!(p > 0.0)) throw DomainError("ml_tail needs p > 0");
    if (!(alpha > 1.0 && alpha <= 2.0)) throw DomainError("ml_tail needs alpha in (1, 2]");
    SeriesValue out;
    if (x == 0.0) {
        out.value = out.raw = 1.0;
        out.terms = 1;
        return out;
    }
    const double beta = alpha - 1.0;
    const double z = p * std::pow(x, beta);
    const double log_peak = log_peak_term(z, beta, ctl.max_terms);
    if (log_peak > std::log(1e4)) {
        out = sum_series<quad>(z, beta, ctl);
        out.extended_precision = true;
    } else {
        out = sum_series<double>(z, beta, ctl);
    }
    out.value = std::clamp(out.raw, 0.0, 1.0);
    out.clamped = out.raw < -1e-8 || out.raw > 1.0 + 1e-8;
    return out;
}

}  // namespace parisian::specfun
