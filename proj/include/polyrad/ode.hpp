#pragma once

// The singular initial value problem (-Delta_alpha)^m u = |u|^{2*-2} u written
// as the coupled system
//   -Delta_alpha u_j = u_{j+1}  (j < m-1),   -Delta_alpha u_{m-1} = |u_0|^{2*-2} u_0,
// started off the origin by a Taylor series and integrated with Dormand-Prince 5(4).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "functionals.hpp"
#include "iteration.hpp"

namespace polyrad {

struct IVPSpec {
    int m = 1;
    double alpha = 3.0;
    std::vector<double> even_initial;  // u_j(0), j = 0..m-1; odd-order data are zero
    double r0 = config::ivp_r0_factor;
    double r_max = config::ivp_r_max;
    double rel_tol = config::ivp_rel_tol;
    double abs_tol = config::ivp_abs_tol;
    int output_points = config::ivp_output_points;  // geometric output grid on [r0, r_max]
    long max_steps = 5'000'000;

    void validate() const {
        require_sobolev(m, alpha);
        if (static_cast<int>(even_initial.size()) != m)
            throw std::invalid_argument("IVPSpec: even_initial must hold m values");
        if (!(r0 > 0.0) || !(r_max > r0)) throw std::invalid_argument("IVPSpec: need 0 < r0 < r_max");
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("IVPSpec: tolerances must be positive");
        if (output_points < 3) throw std::invalid_argument("IVPSpec: output_points must be >= 3");
    }
};

/// Growth past this magnitude of u_0 is treated as blow-up.
inline constexpr double overflow_threshold = 1e12;
/// Steps below this fraction of max(1, r) are treated as underflow.
inline constexpr double step_floor = 1e-12;

namespace detail {

inline double nonlinearity(double u0, double crit) { return u0 == 0.0 ? 0.0 : std::pow(std::abs(u0), crit - 2.0) * u0; }

/// State layout: [u_0, u_0', u_1, u_1', ...].
inline void ivp_rhs(int m, double alpha, double crit, double r, const std::vector<double>& y, std::vector<double>& dy) {
    for (int j = 0; j < m; ++j) {
        const double f = j + 1 < m ? y[2 * (j + 1)] : nonlinearity(y[0], crit);
        dy[2 * j] = y[2 * j + 1];
        dy[2 * j + 1] = -alpha / r * y[2 * j + 1] - f;
    }
}

}  // namespace detail

/// Taylor coefficients u_j(r) = u_j(0) + a_j r^2 + b_j r^4 from -Delta_alpha u_j = f_j:
/// a_j = -f_j(0)/(2(alpha+1)),  b_j = -f_j''(0)/(8(alpha+3)).
struct SeriesCoefficients {
    std::vector<double> c0, a, b;
};

inline SeriesCoefficients series_coefficients(const IVPSpec& spec) {
    const int m = spec.m;
    const double al = spec.alpha;
    const double crit = critical_exponent(m, al);
    SeriesCoefficients s;
    s.c0 = spec.even_initial;
    s.a.resize(m);
    s.b.resize(m);
    const double g0 = detail::nonlinearity(s.c0[0], crit);
    for (int j = 0; j < m; ++j) s.a[j] = -(j + 1 < m ? s.c0[j + 1] : g0) / (2.0 * (al + 1.0));
    const double dg = s.c0[0] == 0.0 ? 0.0 : (crit - 1.0) * std::pow(std::abs(s.c0[0]), crit - 2.0);
    for (int j = 0; j < m; ++j) {
        const double f2 = j + 1 < m ? 2.0 * s.a[j + 1] : 2.0 * dg * s.a[0];
        s.b[j] = -f2 / (8.0 * (al + 3.0));
    }
    return s;
}

/// State at r0 from the fourth-order series.
inline std::vector<double> series_start(const IVPSpec& spec) {
    spec.validate();
    const auto s = series_coefficients(spec);
    const double r = spec.r0, r2 = r * r;
    std::vector<double> y(2 * spec.m);
    for (int j = 0; j < spec.m; ++j) {
        y[2 * j] = s.c0[j] + s.a[j] * r2 + s.b[j] * r2 * r2;
        y[2 * j + 1] = 2.0 * s.a[j] * r + 4.0 * s.b[j] * r2 * r;
    }
    return y;
}

struct SolveDiagnostics {
    long steps = 0;
    long rejected = 0;
    double min_step = std::numeric_limits<double>::infinity();
    double max_step = 0.0;
};

struct SolveResult {
    RadialGrid grid;
    std::vector<std::vector<double>> states;  // per node, layout [u_0, u_0', u_1, u_1', ...]
    SolveDiagnostics diagnostics;

    double u(int j, std::size_t i) const { return states[i][2 * j]; }
    double du(int j, std::size_t i) const { return states[i][2 * j + 1]; }
    std::vector<double> component(int j) const {
        std::vector<double> v(states.size());
        for (std::size_t i = 0; i < states.size(); ++i) v[i] = states[i][2 * j];
        return v;
    }
};

/// Dormand-Prince 5(4) with max-norm error control, landing on every output node.
inline SolveResult integrate(const IVPSpec& spec) {
    spec.validate();
    const int n = 2 * spec.m;
    const double crit = critical_exponent(spec.m, spec.alpha);
    SolveResult res;
    res.grid = RadialGrid::geometric(spec.r0, spec.r_max, spec.output_points);
    std::vector<double> y = series_start(spec);
    res.states.reserve(res.grid.size());
    res.states.push_back(y);

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    auto f = [&](double r, const std::vector<double>& s, std::vector<double>& d) {
        detail::ivp_rhs(spec.m, spec.alpha, crit, r, s, d);
    };
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n), comp(n, 0.0), compnew(n);
    double r = spec.r0;
    double h = 0.01 * spec.r0 + 1e-3 * std::pow(spec.rel_tol, 0.2);
    f(r, y, k1);
    auto& dg = res.diagnostics;
    for (std::size_t node = 1; node < res.grid.size(); ++node) {
        const double target = res.grid[node];
        while (r < target) {
            if (dg.steps + dg.rejected > spec.max_steps)
                throw integration_error(integration_error::kind::step_underflow, r, "integrate: step budget exhausted");
            const bool clipped = r + h >= target;
            const double hs = clipped ? target - r : h;
            for (int i = 0; i < n; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
            f(r + c2 * hs, tmp, k2);
            for (int i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
            f(r + c3 * hs, tmp, k3);
            for (int i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            f(r + c4 * hs, tmp, k4);
            for (int i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            f(r + c5 * hs, tmp, k5);
            for (int i = 0; i < n; ++i)
                tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            f(r + hs, tmp, k6);
            // Compensated update: the carried rounding error comp[i] is folded back in.
            for (int i = 0; i < n; ++i) {
                const double inc = hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]) - comp[i];
                ynew[i] = y[i] + inc;
                compnew[i] = (ynew[i] - y[i]) - inc;
            }
            f(r + hs, ynew, k7);
            double err = 0.0;
            for (int i = 0; i < n; ++i) {
                const double e =
                    hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double sc = spec.abs_tol + spec.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err = std::max(err, std::abs(e) / sc);
            }
            if (!std::isfinite(err)) err = 1e10;
            const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                r = clipped ? target : r + hs;
                y.swap(ynew);
                comp.swap(compnew);
                k1.swap(k7);
                ++dg.steps;
                dg.min_step = std::min(dg.min_step, hs);
                dg.max_step = std::max(dg.max_step, hs);
                if (!(std::abs(y[0]) <= overflow_threshold))
                    throw integration_error(integration_error::kind::overflow, r,
                                            "integrate: |u_0| exceeded 1e12 at r = " + std::to_string(r));
                // A clipped step does not shrink the next proposal.
                h = clipped ? std::max(h, hs * fac) : hs * fac;
            } else {
                ++dg.rejected;
                h = hs * fac;
            }
            if (h < step_floor * std::max(1.0, r))
                throw integration_error(integration_error::kind::step_underflow, r,
                                        "integrate: step size underflow at r = " + std::to_string(r));
        }
        res.states.push_back(y);
    }
    return res;
}

// ---------------------------------------------------------------------------

/// eps with w_eps(0) = v0.
inline double match_epsilon(int m, double alpha, double v0) {
    require_sobolev(m, alpha);
    if (!(v0 > 0.0)) throw domain_error("match_epsilon: v0 must be positive");
    return std::pow(bliss_amplitude(m, alpha) / v0, 2.0 / (alpha - 2.0 * m + 1.0));
}

/// Initial data of the extremal w_eps, series handoff at r0 = 1e-4 eps.
inline IVPSpec bliss_ivp(int m, double alpha, double eps, double r_max) {
    IVPSpec spec;
    spec.m = m;
    spec.alpha = alpha;
    spec.even_initial = BlissChain(m, alpha, eps).even_initial();
    spec.r0 = config::ivp_r0_factor * eps;
    spec.r_max = r_max;
    return spec;
}

struct ClassificationReport {
    double max_rel_dev = 0.0;                  // over all components u_0..u_{m-1}
    std::vector<double> component_rel_dev;     // per j
    SolveDiagnostics diagnostics;
};

/// Integrate from the data of w_eps and compare every u_j with (-Delta)^j w_eps on [r0, r_max].
inline ClassificationReport classification_check(int m, double alpha, double eps, double r_max,
                                                 std::optional<IVPSpec> tuned = std::nullopt) {
    require_sobolev(m, alpha);
    IVPSpec spec = bliss_ivp(m, alpha, eps, r_max);
    if (tuned) {
        spec.rel_tol = tuned->rel_tol;
        spec.abs_tol = tuned->abs_tol;
        spec.output_points = tuned->output_points;
    }
    const auto sol = integrate(spec);
    const BlissChain chain(m, alpha, eps);
    ClassificationReport rep;
    rep.diagnostics = sol.diagnostics;
    rep.component_rel_dev.assign(m, 0.0);
    for (std::size_t i = 0; i < sol.grid.size(); ++i)
        for (int j = 0; j < m; ++j) {
            const double ex = chain.value(j, sol.grid[i]);
            rep.component_rel_dev[j] = std::max(rep.component_rel_dev[j], std::abs(sol.u(j, i) - ex) / std::abs(ex));
        }
    rep.max_rel_dev = *std::max_element(rep.component_rel_dev.begin(), rep.component_rel_dev.end());
    return rep;
}

/// sup over the output grid of |u_0 - w_eps| / w_eps.
inline double distance_to_bliss(const SolveResult& sol, int m, double alpha, double eps) {
    const auto w = bliss_profile(m, alpha, eps);
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        const double ex = w(sol.grid[i]);
        worst = std::max(worst, std::abs(sol.u(0, i) - ex) / ex);
    }
    return worst;
}

struct DepartureReport {
    bool blew_up = false;
    double blow_up_radius = std::numeric_limits<double>::quiet_NaN();
    double best_eps = std::numeric_limits<double>::quiet_NaN();
    double min_distance = std::numeric_limits<double>::infinity();  // min over eps of sup-relative distance
    SolveDiagnostics diagnostics;
};

/// Integrate from the data of w_eps with u_index(0) scaled by (1 + scale), then
/// minimise the distance to the family over eps (log-scan plus golden section).
inline DepartureReport departure_probe(int m, double alpha, double eps, double r_max, int index, double scale) {
    IVPSpec spec = bliss_ivp(m, alpha, eps, r_max);
    if (index < 0 || index >= m) throw std::invalid_argument("departure_probe: perturb index must lie in [0, m)");
    spec.even_initial[index] *= 1.0 + scale;
    DepartureReport rep;
    SolveResult sol;
    try {
        sol = integrate(spec);
    } catch (const integration_error& e) {
        rep.blew_up = true;
        rep.blow_up_radius = e.radius();
        return rep;
    }
    rep.diagnostics = sol.diagnostics;
    if (!(sol.u(0, 0) > 0.0)) return rep;
    auto dist = [&](double le) { return distance_to_bliss(sol, m, alpha, std::exp(le)); };
    // The natural candidate matches u_0(0); scan a wide bracket around it.
    const double centre = std::log(match_epsilon(m, alpha, sol.u(0, 0)));
    double best_le = centre, best = dist(centre);
    const int scan = 80;
    for (int i = 0; i <= scan; ++i) {
        const double le = centre - 4.0 + 8.0 * i / scan;
        const double d = dist(le);
        if (d < best) best = d, best_le = le;
    }
    double lo = best_le - 0.1, hi = best_le + 0.1;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = dist(x1), f2 = dist(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2, x2 = x1, f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = dist(x1);
        } else {
            lo = x1, x1 = x2, f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = dist(x2);
        }
    }
    for (auto [x, fx] : {std::pair{x1, f1}, std::pair{x2, f2}})
        if (fx < best) best = fx, best_le = x;
    rep.min_distance = best;
    rep.best_eps = std::exp(best_le);
    return rep;
}

/// max over nodes and components of the relative gap between the eps
/// trajectory and the rescaled eps = 1 trajectory u_j(r) = eps^{-s-2j} U_j(r/eps).
inline double scaling_equivariance(int m, double alpha, double eps, double r_max) {
    IVPSpec s1 = bliss_ivp(m, alpha, 1.0, r_max / eps);
    IVPSpec se = bliss_ivp(m, alpha, eps, r_max);
    const auto a = integrate(s1);
    const auto b = integrate(se);
    const double s = dilation_exponent(m, alpha);
    double worst = 0.0;
    for (std::size_t i = 0; i < b.grid.size(); ++i)
        for (int j = 0; j < m; ++j) {
            const double scaled = std::pow(eps, -s - 2.0 * j) * a.u(j, i);
            worst = std::max(worst, std::abs(b.u(j, i) - scaled) / std::abs(b.u(j, i)));
        }
    return worst;
}

/// Relative gap between FD (-Delta_alpha)^m u_0 and |u_0|^{2*-2} u_0 at the
/// output nodes nearest to each check radius. Every stride up to max_log_spacing
/// is tried; at each node the stride whose value is closest to both neighbouring
/// strides is kept.
inline std::vector<double> scalar_form_residual(const SolveResult& sol, int m, double alpha,
                                                const std::vector<double>& check_radii,
                                                double max_log_spacing = config::scalar_check_max_log_spacing) {
    const double crit = critical_exponent(m, alpha);
    const auto u0 = sol.component(0);
    const auto& r = sol.grid.nodes();
    const long smax = std::lround(max_log_spacing / sol.grid.log_step());
    if (smax < 3) throw std::invalid_argument("scalar_form_residual: output grid too coarse for the stride ladder");
    std::vector<std::vector<double>> ladder;
    for (long s = 1; s <= smax; ++s) {
        FdOptions opts;
        opts.log_spacing = static_cast<double>(s) * sol.grid.log_step();
        ladder.push_back(fd_polyharmonic(sol.grid, u0, alpha, m, opts));
    }
    std::vector<double> out;
    for (double rc : check_radii) {
        const auto it = std::lower_bound(r.begin(), r.end(), rc);
        if (it == r.end()) throw std::invalid_argument("scalar_form_residual: check radius beyond r_max");
        const auto i = static_cast<std::size_t>(it - r.begin());
        double spread = std::numeric_limits<double>::infinity(), lhs = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t k = 1; k + 1 < ladder.size(); ++k) {
            const double d = std::max(std::abs(ladder[k][i] - ladder[k - 1][i]), std::abs(ladder[k][i] - ladder[k + 1][i]));
            if (std::isfinite(d) && d < spread) spread = d, lhs = ladder[k][i];
        }
        if (!std::isfinite(lhs)) throw std::invalid_argument("scalar_form_residual: stencil does not fit at check radius");
        const double rhs = detail::nonlinearity(u0[i], crit);
        out.push_back(std::abs(lhs - rhs) / std::abs(rhs));
    }
    return out;
}

}  // namespace polyrad
