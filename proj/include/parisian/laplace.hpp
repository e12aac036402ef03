#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "parisian/model.hpp"

namespace parisian {

struct GaverStehfest {
    int n_terms = 16;
};

struct TalbotFixed {
    int n_nodes = 24;
};

struct InversionConfig {
    std::variant<GaverStehfest, TalbotFixed> method = GaverStehfest{};
    bool cross_check = false;

    void validate() const;
    std::string describe() const;
};

struct QuadratureConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-15;
    int max_subdivisions = 200;

    void validate() const;
};

// Decay of an integrand beyond the adaptive range; used to place the cut-off
// between the finite part and the tail part.
struct TailHint {
    enum class Kind { Exponential, PowerLaw };
    Kind kind = Kind::Exponential;
    double parameter = 1.0;  // decay rate, or power-law exponent k for g ~ z^{-k}
    double knee = 0.0;       // the integrand may still change shape out to here

    static TailHint exponential(double rate) { return {Kind::Exponential, rate, 0.0}; }
    static TailHint power_law(double exponent, double knee = 0.0) { return {Kind::PowerLaw, exponent, knee}; }
};

struct Estimate {
    double value = 0.0;
    double err_est = 0.0;
};

// A Laplace transform. `real` must be defined on the positive half-line;
// `complex` is optional and, when present, enables Talbot inversion.
struct Transform {
    std::function<double(double)> real;
    std::function<cplx(cplx)> complex;
};

struct InversionResult {
    double value = 0.0;
    double err_est = 0.0;
    std::string method;
    std::vector<std::string> diagnostics;
};

InversionResult invert(const Transform& F, double t, const InversionConfig& cfg);

// Like invert, then clamps into [0, 1] and records the raw value if it moved.
InversionResult invert_probability(const Transform& F, double t, const InversionConfig& cfg);

// Raw rules without error policing; used by tests and by invert itself.
double gaver_stehfest(const std::function<double(double)>& F, double t, int n_terms);
double talbot_fixed(const std::function<cplx(cplx)>& F, double t, int n_nodes);
// Stehfest weights V_1..V_n (index 0 unused), computed in 113-bit arithmetic.
const std::vector<double>& stehfest_weights(int n_terms);

Estimate integrate(const std::function<double(double)>& g, double a, double b,
                   const QuadratureConfig& cfg = {});
Estimate integrate_semiinf(const std::function<double(double)>& g, double a, TailHint hint,
                           const QuadratureConfig& cfg = {});
cplx integrate_semiinf_complex(const std::function<cplx(double)>& g, double a, TailHint hint,
                       const QuadratureConfig& cfg = {});

}  // namespace parisian
