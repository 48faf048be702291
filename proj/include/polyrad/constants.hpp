#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "coefficients.hpp"
#include "errors.hpp"

namespace polyrad {

namespace detail {

// Lanczos approximation, g = 7, n = 9 (Godfrey's coefficient set).
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Series factor A(x) for Gamma(x + 1) = sqrt(2 pi) t^(x + 1/2) e^(-t) A(x), t = x + g + 1/2.
inline double lanczos_sum(double x) {
    double a = lanczos_coeffs[0];
    for (std::size_t i = 1; i < lanczos_coeffs.size(); ++i) a += lanczos_coeffs[i] / (x + static_cast<double>(i));
    return a;
}

}  // namespace detail

/// Relative accuracy the gamma routine is held to on [0.5, 60].
inline constexpr double gamma_rel_accuracy = 1e-13;

/// Euler's gamma function for x > 0.
inline double gamma_function(double x) {
    if (!(x > 0.0)) throw domain_error("gamma: argument must be positive");
    if (x < 0.5) return gamma_function(x + 1.0) / x;
    const double xm = x - 1.0;
    const double t = xm + detail::lanczos_g + 0.5;
    const double a = detail::lanczos_sum(xm);
    const double s2pi = std::sqrt(2.0 * std::numbers::pi);
    if (x < 140.0) return s2pi * std::pow(t, xm + 0.5) * std::exp(-t) * a;
    const double half = std::pow(t, 0.5 * (xm + 0.5));
    return s2pi * half * (half * std::exp(-t)) * a;
}

/// log Gamma(x) for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0)) throw domain_error("log_gamma: argument must be positive");
    if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
    if (x < 20.0) return std::log(gamma_function(x));
    const double xm = x - 1.0;
    const double t = xm + detail::lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (xm + 0.5) * std::log(t) - t + std::log(detail::lanczos_sum(xm));
}

/// int_0^inf s^(x-1) (1+s)^(-(x+y)) ds = Gamma(x) Gamma(y) / Gamma(x+y).
inline double beta_integral(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw domain_error("beta_integral: arguments must be positive");
    if (x + y < 100.0) return gamma_function(x) * gamma_function(y) / gamma_function(x + y);
    return std::exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y));
}

/// 2* = 2(alpha + 1) / (alpha - 2m + 1).
inline double critical_exponent(int m, double alpha) {
    require_sobolev(m, alpha);
    return 2.0 * (alpha + 1.0) / (alpha - 2.0 * m + 1.0);
}

/// P(alpha, m) at a numeric alpha. The double is converted to its exact
/// rational value, the expanded polynomial is evaluated exactly, and only the
/// final value is rounded.
inline double p_value(int m, double alpha) {
    return static_cast<double>(p_constant(m).evaluate(Rational(alpha)));
}

enum class BestConstantRoute { closed_form, quadrature };

inline const char* to_string(BestConstantRoute r) {
    return r == BestConstantRoute::closed_form ? "closed_form" : "quadrature";
}

struct BestConstantResult {
    int m = 0;
    double alpha = 0.0;
    double S = 0.0;
    double S_inv_sqrt = 0.0;
    BestConstantRoute route = BestConstantRoute::closed_form;
    double err_estimate = 0.0;
    bool sobolev_condition = true;
};

/// int_0^inf r^alpha (1+r^2)^(-(alpha+1)) dr = Gamma((alpha+1)/2)^2 / (2 Gamma(alpha+1)), via log-gamma.
inline double log_extremal_integral(double alpha) {
    return 2.0 * log_gamma(0.5 * (alpha + 1.0)) - std::log(2.0) - log_gamma(alpha + 1.0);
}

/// S = P * [Gamma((alpha+1)/2)^2 / (2 Gamma(alpha+1))]^(2m/(alpha+1)).
inline BestConstantResult best_constant(int m, double alpha) {
    require_sobolev(m, alpha);
    const double P = p_value(m, alpha);
    const double expo = 2.0 * m / (alpha + 1.0);
    const double logS = std::log(P) + expo * log_extremal_integral(alpha);
    BestConstantResult res;
    res.m = m;
    res.alpha = alpha;
    res.S = std::exp(logS);
    res.S_inv_sqrt = std::exp(-0.5 * logS);
    res.route = BestConstantRoute::closed_form;
    // Three log-gamma evaluations scaled by the exponent, rounding of P and of exp.
    const double eps = std::numeric_limits<double>::epsilon();
    const double log_err = expo * (3.0 * gamma_rel_accuracy + eps * std::abs(log_extremal_integral(alpha))) +
                           2.0 * eps + eps * std::abs(logS);
    res.err_estimate = res.S * log_err;
    return res;
}

/// The m = 1 best constant written in the classical Bliss form
///   S^(-1/2) = P^(-1/2) [2 Gamma(alpha+1) / Gamma((alpha+1)/2)^2]^(1/(alpha+1)),
/// with P = (alpha-1)(alpha+1) in product form. Independent of best_constant's
/// evaluation path.
inline double bliss_constant_m1_inv_sqrt(double alpha) {
    require_sobolev(1, alpha);
    const double P = (alpha - 1.0) * (alpha + 1.0);
    const double g = gamma_function(0.5 * (alpha + 1.0));
    const double ratio = 2.0 * gamma_function(alpha + 1.0) / (g * g);
    return std::pow(P, -0.5) * std::pow(ratio, 1.0 / (alpha + 1.0));
}

/// Energy floor for sign-changing solutions: 2^(2m/(alpha+1)) S.
inline double nodal_gap_threshold(int m, double alpha) {
    return std::pow(2.0, 2.0 * m / (alpha + 1.0)) * best_constant(m, alpha).S;
}

}  // namespace polyrad
