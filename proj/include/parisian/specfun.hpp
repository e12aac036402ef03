#pragma once

#include <string>

namespace parisian::specfun {

struct SeriesControl {
    int max_terms = 4000;
    double rel_tol = 1e-16;

    void validate() const;
};

struct SeriesValue {
    double value = 0.0;
    int terms = 0;
    bool extended_precision = false;
    bool clamped = false;
    double raw = 0.0;  // sum before clamping into [0, 1]
};

double bessel_i1(double x);
// e^{-x} I_1(x); finite for all x >= 0.
double bessel_i1_scaled(double x);

double normal_cdf(double x);
double normal_pdf(double x);

// Σ_{n≥0} (-p)^n x^{(α-1)n} / Γ(1+(α-1)n): the Mittag-Leffler survival function
// E_{α-1}(-p x^{α-1}). Summed in 113-bit arithmetic once cancellation would
// cost more than a few digits in double.
SeriesValue ml_tail(double p, double alpha, double x, const SeriesControl& ctl = {});

}  // namespace parisian::specfun
