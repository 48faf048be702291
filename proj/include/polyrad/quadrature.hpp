#pragma once

// Globally adaptive Gauss-Kronrod (10/21) quadrature on [0, inf).
// The half line is split at `split_point`; the tail is mapped by r = 1/t onto
// (0, 1/split_point], which turns algebraic decay r^-p into t^(p-2).

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "config.hpp"
#include "errors.hpp"

namespace polyrad {

struct QuadratureSpec {
    double rel_tol = config::quad_rel_tol;
    double abs_tol = config::quad_abs_tol;
    int max_subdivisions = config::quad_max_subdivisions;
    double split_point = config::quad_split_point;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("quadrature tolerances must be positive");
        if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be >= 1");
        if (!(split_point > 0.0)) throw std::invalid_argument("split_point must be positive");
    }
};

struct NormReport {
    double value = 0.0;
    double err_estimate = 0.0;
    double truncation_radius = std::numeric_limits<double>::quiet_NaN();  // NaN: untruncated
    int subdivisions = 0;
};

namespace detail {

// QUADPACK dqk21 nodes and weights.
inline constexpr std::array<double, 11> gk21_x = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452, 0.930157491355708226001207180059508,
    0.865063366688984510732096688423493, 0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784, 0.294392862701460198131126603103866,
    0.148874338981631210884826001129720, 0.0};
inline constexpr std::array<double, 11> gk21_wk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390, 0.054755896574351996031381300244580,
    0.075039674810919952767043140916190, 0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707, 0.142775938577060080797094273138717,
    0.147739104901338491374841515972068, 0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> gk21_wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697, 0.219086362515982043995534934228163,
    0.269266719309996355091226921569469, 0.295524224714752870173892994651338};

struct Segment {
    double a, b, value, err;
    int piece;
    bool operator<(const Segment& o) const { return err < o.err; }
};

template <class F>
Segment gk21(const F& f, double a, double b, int piece) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * gk21_wk[10];
    double resg = 0.0;
    double resabs = std::abs(resk);
    std::array<double, 10> f1{}, f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = h * gk21_x[j];
        f1[j] = f(c - dx);
        f2[j] = f(c + dx);
        const double s = f1[j] + f2[j];
        resk += gk21_wk[j] * s;
        resabs += gk21_wk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += gk21_wg[j / 2] * s;
    }
    const double reskh = 0.5 * resk;
    double resasc = gk21_wk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j) resasc += gk21_wk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));
    const double result = resk * h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    if (!std::isfinite(result) || !std::isfinite(err)) err = std::numeric_limits<double>::infinity();
    return {a, b, result, err, piece};
}

}  // namespace detail

/// Segments narrower than this fraction of their piece are not split further.
inline constexpr double min_relative_width = 1e-60;

/// Adaptive integration of several pieces sharing one error budget.
/// pieces[k] integrates fs[k] over [a_k, b_k].
template <class F>
NormReport adaptive_integrate(const std::vector<F>& fs, const std::vector<std::pair<double, double>>& ranges,
                              const QuadratureSpec& spec) {
    spec.validate();
    std::priority_queue<detail::Segment> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t k = 0; k < ranges.size(); ++k) {
        auto s = detail::gk21(fs[k], ranges[k].first, ranges[k].second, static_cast<int>(k));
        total += s.value;
        total_err += s.err;
        heap.push(s);
    }
    int subdivisions = static_cast<int>(ranges.size());
    while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (subdivisions >= spec.max_subdivisions || !std::isfinite(total_err))
            throw convergence_error("adaptive quadrature did not converge (divergent or pathological integrand)",
                                    total, total_err);
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const auto& piece = ranges[worst.piece];
        if (worst.b - worst.a < min_relative_width * std::abs(piece.second - piece.first))
            throw convergence_error("adaptive quadrature: refinement below 1e-60 of the range (divergent integrand)",
                                    total, total_err);
        if (!(mid > worst.a && mid < worst.b))
            throw convergence_error("adaptive quadrature: interval collapsed below machine resolution", total,
                                    total_err);
        auto left = detail::gk21(fs[worst.piece], worst.a, mid, worst.piece);
        auto right = detail::gk21(fs[worst.piece], mid, worst.b, worst.piece);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }
    // Re-sum to shed the drift of the running updates.
    double sum = 0.0, err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().err;
        heap.pop();
    }
    return {sum, err, std::numeric_limits<double>::quiet_NaN(), subdivisions};
}

/// int_a^b f(r) dr on a finite interval.
inline NormReport integrate_interval(const std::function<double(double)>& f, double a, double b,
                                     const QuadratureSpec& spec = {}) {
    return adaptive_integrate(std::vector<std::function<double(double)>>{f}, {{a, b}}, spec);
}

/// int_0^inf f(r) dr.
inline NormReport improper_integral(const std::function<double(double)>& f, const QuadratureSpec& spec = {}) {
    spec.validate();
    const double s = spec.split_point;
    std::function<double(double)> tail = [&f](double t) { return f(1.0 / t) / (t * t); };
    return adaptive_integrate(std::vector<std::function<double(double)>>{f, tail}, {{0.0, s}, {0.0, 1.0 / s}}, spec);
}

}  // namespace polyrad
