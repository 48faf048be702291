#pragma once

// The regularity chain
//   w_0 = |u|^{2*-2} u,   w_k(r) = int_r^inf t^-alpha int_0^t s^alpha w_{k-1}(s) ds dt,
// so that -Delta_alpha w_k = w_{k-1}, computed on a geometric grid by
// trapezoid sums in x = ln r with an Euler-Maclaurin end correction.

#include <algorithm>
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

namespace polyrad {

class RadialGrid {
public:
    static RadialGrid geometric(double r_min = config::grid_r_min, double r_max = config::grid_r_max,
                                int points = config::grid_points) {
        if (!(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("RadialGrid: need 0 < r_min < r_max");
        if (points < 3) throw std::invalid_argument("RadialGrid: need at least 3 nodes");
        RadialGrid g;
        g.log_step_ = (std::log(r_max) - std::log(r_min)) / (points - 1);
        g.nodes_.resize(points);
        for (int i = 0; i < points; ++i) g.nodes_[i] = r_min * std::exp(g.log_step_ * i);
        g.nodes_.front() = r_min;
        g.nodes_.back() = r_max;
        return g;
    }

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double operator[](std::size_t i) const { return nodes_[i]; }
    double r_min() const { return nodes_.front(); }
    double r_max() const { return nodes_.back(); }
    double log_step() const noexcept { return log_step_; }
    double ratio() const { return std::exp(log_step_); }

private:
    std::vector<double> nodes_;
    double log_step_ = 0.0;
};

struct GridFunction {
    RadialGrid grid;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(RadialGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
        if (values.size() != grid.size()) throw std::invalid_argument("GridFunction: length mismatch");
    }
    template <class F>
    static GridFunction sample(const RadialGrid& g, F&& f) {
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g[i]);
        return {g, std::move(v)};
    }
    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    bool is_zero() const {
        return std::all_of(values.begin(), values.end(), [](double x) { return x == 0.0; });
    }
};

/// q_k = 2(alpha+1)/(alpha+2m+1-4k).
inline double q_closed_form(int k, int m, double alpha) {
    return 2.0 * (alpha + 1.0) / (alpha + 2.0 * m + 1.0 - 4.0 * k);
}

/// q_0 = 2*/(2*-1), q_k = q_{k-1}(alpha+1)/(alpha - 2 q_{k-1} + 1), k = 0..m.
inline std::vector<double> q_sequence(int m, double alpha) {
    const double c = critical_exponent(m, alpha);
    std::vector<double> q{c / (c - 1.0)};
    for (int k = 1; k <= m; ++k) q.push_back(q.back() * (alpha + 1.0) / (alpha - 2.0 * q.back() + 1.0));
    return q;
}

struct IterationChain {
    int m = 0;
    double alpha = 0.0;
    std::vector<GridFunction> w;      // k = 0..m
    std::vector<double> q;            // k = 0..m
    std::vector<double> tail_decay;   // algebraic decay exponent assumed for each w_k
};

namespace detail {

/// Second-order derivative of uniformly spaced samples.
inline std::vector<double> uniform_gradient(const std::vector<double>& g, double h) {
    const std::size_t n = g.size();
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h);
    d[n - 1] = (3.0 * g[n - 1] - 4.0 * g[n - 2] + g[n - 3]) / (2.0 * h);
    return d;
}

/// One inverse step: given w_{k-1} with tail ~ r^-p, return w_k.
inline std::vector<double> inverse_laplacian_step(const RadialGrid& grid, const std::vector<double>& w, double alpha,
                                                  double p, bool end_correction) {
    const std::size_t n = grid.size();
    const double h = grid.log_step();
    const auto& r = grid.nodes();
    if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) return std::vector<double>(n, 0.0);
    if (!(p > 2.0) || !(alpha > 1.0))
        throw tail_divergence_error("outer integral diverges: declared decay exponent " + std::to_string(p) +
                                    " must exceed 2 (and alpha > 1)");

    // Inner integral I(r) = int_0^r s^alpha w(s) ds. On [0, r_0], w ~ a + b s^2.
    const double b = (w[1] - w[0]) / (r[1] * r[1] - r[0] * r[0]);
    const double a = w[0] - b * r[0] * r[0];
    std::vector<double> g(n), I(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = std::pow(r[i], alpha + 1.0) * w[i];
    const std::vector<double> dg = end_correction ? uniform_gradient(g, h) : std::vector<double>(n, 0.0);
    I[0] = a * std::pow(r[0], alpha + 1.0) / (alpha + 1.0) + b * std::pow(r[0], alpha + 3.0) / (alpha + 3.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        acc += 0.5 * h * (g[i - 1] + g[i]);
        I[i] = I[0] + acc - h * h / 12.0 * (dg[i] - dg[0]);
    }

    // Tail beyond R with w(s) = w(R) (s/R)^-p.
    const double R = r[n - 1];
    const double wR = w[n - 1];
    const double qexp = alpha - p + 1.0;
    double tail;
    if (std::abs(qexp) > 1e-12) {
        const double c = wR * std::pow(R, p) / qexp;
        tail = (I[n - 1] - c * std::pow(R, qexp)) * std::pow(R, 1.0 - alpha) / (alpha - 1.0) +
               c * std::pow(R, 2.0 - p) / (p - 2.0);
    } else {
        tail = I[n - 1] * std::pow(R, 1.0 - alpha) / (alpha - 1.0) +
               wR * std::pow(R, p) * std::pow(R, 1.0 - alpha) / ((alpha - 1.0) * (alpha - 1.0));
    }

    // Outer integral int_r^R t^(1-alpha) I(t) dx, accumulated from the right.
    std::vector<double> F(n), out(n);
    for (std::size_t i = 0; i < n; ++i) F[i] = std::pow(r[i], 1.0 - alpha) * I[i];
    const std::vector<double> dF = end_correction ? uniform_gradient(F, h) : std::vector<double>(n, 0.0);
    acc = 0.0;
    out[n - 1] = tail;
    for (std::size_t i = n - 1; i-- > 0;) {
        acc += 0.5 * h * (F[i] + F[i + 1]);
        out[i] = tail + acc - h * h / 12.0 * (dF[n - 1] - dF[i]);
    }
    return out;
}

}  // namespace detail

/// Decay exponent of w_k given that of w_{k-1}.
inline double propagate_decay(double p, double alpha) { return p < alpha + 1.0 ? p - 2.0 : alpha - 1.0; }

inline IterationChain iterate_chain(const RadialProfile& u, int m, double alpha, const RadialGrid& grid,
                                    bool end_correction = true) {
    require_sobolev(m, alpha);
    const double c = critical_exponent(m, alpha);
    IterationChain chain;
    chain.m = m;
    chain.alpha = alpha;
    chain.q = q_sequence(m, alpha);
    chain.w.push_back(GridFunction::sample(grid, [&](double r) {
        const double v = u(r);
        return v == 0.0 ? 0.0 : std::pow(std::abs(v), c - 2.0) * v;
    }));
    const bool zero = chain.w[0].is_zero();
    if (!zero && !u.decay_exponent())
        throw std::invalid_argument("iterate_chain: profile needs a declared decay exponent for the tail closure");
    double p = zero ? std::numeric_limits<double>::infinity() : *u.decay_exponent() * (c - 1.0);
    chain.tail_decay.push_back(p);
    for (int k = 1; k <= m; ++k) {
        chain.w.emplace_back(grid, detail::inverse_laplacian_step(grid, chain.w.back().values, alpha, p, end_correction));
        p = propagate_decay(p, alpha);
        chain.tail_decay.push_back(p);
    }
    return chain;
}

// ---------------------------------------------------------------------------
// Finite-difference checks.

/// Delta_alpha by three-point stencils on nodes (i-s, i, i+s) with exact
/// weights for the local spacing. Entries closer than s to either end are NaN.
inline std::vector<double> fd_laplacian(const std::vector<double>& r, const std::vector<double>& u, double alpha,
                                        std::size_t s = 1) {
    const std::size_t n = r.size();
    std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = s; i + s < n; ++i) {
        const double hm = r[i] - r[i - s], hp = r[i + s] - r[i], hs = hm + hp;
        const double d1 = -hp / (hm * hs) * u[i - s] + (hp - hm) / (hm * hp) * u[i] + hm / (hp * hs) * u[i + s];
        const double d2 = 2.0 * (u[i - s] / (hm * hs) - u[i] / (hm * hp) + u[i + s] / (hp * hs));
        out[i] = d2 + alpha / r[i] * d1;
    }
    return out;
}

struct FdOptions {
    double log_spacing = config::fd_log_spacing;  // stencil half-width in ln r
    bool richardson = true;     // combine strides s and 2s to cancel the O(h^2) term
};

/// (-Delta_alpha)^j on a geometric grid. The stride is the node count closest
/// to opts.log_spacing; invalid entries are NaN.
inline std::vector<double> fd_polyharmonic(const RadialGrid& grid, std::vector<double> u, double alpha, int j,
                                           const FdOptions& opts = {}) {
    const auto& r = grid.nodes();
    const std::size_t s = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(opts.log_spacing / grid.log_step())));
    for (int step = 0; step < j; ++step) {
        auto a = fd_laplacian(r, u, alpha, s);
        if (opts.richardson) {
            const auto b = fd_laplacian(r, u, alpha, 2 * s);
            for (std::size_t i = 0; i < a.size(); ++i) a[i] = (4.0 * a[i] - b[i]) / 3.0;
        }
        for (auto& x : a) x = -x;
        u = std::move(a);
    }
    return u;
}

struct InverseResidual {
    int k = 0, j = 0;
    double max_abs_residual = 0.0;
    double sup_relative = 0.0;       // max |res| / max |w_{k-j}| over the window
    double pointwise_relative = 0.0; // max |res| / |w_{k-j}| over the window
    double r_lo = 0.0, r_hi = 0.0;
    std::size_t checked_nodes = 0;
};

/// Compare (-Delta_alpha)^j w_k with w_{k-j} on the nodes inside [r_lo, r_hi]
/// where the stencils fit.
inline InverseResidual verify_inverse(const IterationChain& chain, int k, int j, double r_lo = 0.0,
                                      double r_hi = std::numeric_limits<double>::infinity(),
                                      const FdOptions& opts = {}) {
    if (j < 1 || j > k || k > chain.m) throw std::invalid_argument("verify_inverse: requires 1 <= j <= k <= m");
    const auto& grid = chain.w[k].grid;
    const auto& r = grid.nodes();
    const auto lhs = fd_polyharmonic(grid, chain.w[k].values, chain.alpha, j, opts);
    const auto& rhs = chain.w[k - j].values;
    InverseResidual rep;
    rep.k = k;
    rep.j = j;
    rep.r_lo = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    auto in_window = [&](std::size_t i) { return std::isfinite(lhs[i]) && r[i] >= r_lo && r[i] <= r_hi; };
    for (std::size_t i = 0; i < r.size(); ++i)
        if (in_window(i)) scale = std::max(scale, std::abs(rhs[i]));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!in_window(i)) continue;
        const double res = std::abs(lhs[i] - rhs[i]);
        rep.max_abs_residual = std::max(rep.max_abs_residual, res);
        if (rhs[i] != 0.0) rep.pointwise_relative = std::max(rep.pointwise_relative, res / std::abs(rhs[i]));
        rep.r_lo = std::min(rep.r_lo, r[i]);
        rep.r_hi = std::max(rep.r_hi, r[i]);
        ++rep.checked_nodes;
    }
    rep.sup_relative = scale > 0.0 ? rep.max_abs_residual / scale : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Decay.

/// Decay slope of the closed-form extremal chain: w_k ~ r^-(alpha+1-2k) for
/// k >= 1, and w_0 = w^{2*-1} ~ r^-(alpha+2m+1).
inline double bliss_chain_slope(int k, int m, double alpha) {
    return k == 0 ? -(alpha + 2.0 * m + 1.0) : -(alpha + 1.0 - 2.0 * k);
}

/// Upper bound exponent -(alpha+2m+1-4k)/2 for |w_k|.
inline double decay_bound_exponent(int k, int m, double alpha) { return -(alpha + 2.0 * m + 1.0 - 4.0 * k) / 2.0; }

struct DecayEntry {
    int k = 0;
    bool skipped = false;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double bound_exponent = 0.0;
    double bliss_slope = 0.0;
    bool bound_ok = false;
    bool bliss_ok = false;
};

struct DecayReport {
    double fit_lo = 0.0, fit_hi = 0.0;
    double slope_tolerance = config::decay_slope_tolerance;
    std::vector<DecayEntry> entries;
    bool bounds_ok() const {
        for (const auto& e : entries)
            if (!e.skipped && !e.bound_ok) return false;
        return true;
    }
    bool bliss_ok() const {
        for (const auto& e : entries)
            if (!e.skipped && !e.bliss_ok) return false;
        return true;
    }
};

/// Least-squares slope of log|w_k| against log r over [r_max/10, r_max].
inline DecayReport decay_report(const IterationChain& chain, double tolerance = config::decay_slope_tolerance) {
    DecayReport rep;
    if (chain.w.empty()) return rep;
    const auto& r = chain.w[0].grid.nodes();
    const double R = r.back();
    if (R < 50.0) throw domain_error("decay_report: grid must reach r_max >= 50");
    rep.fit_lo = R / 10.0;
    rep.fit_hi = R;
    rep.slope_tolerance = tolerance;
    for (int k = 0; k <= chain.m; ++k) {
        DecayEntry e;
        e.k = k;
        e.bound_exponent = decay_bound_exponent(k, chain.m, chain.alpha);
        e.bliss_slope = bliss_chain_slope(k, chain.m, chain.alpha);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r[i] < rep.fit_lo) continue;
            const double v = std::abs(chain.w[k].values[i]);
            if (!(v > 0.0) || !std::isfinite(v)) {
                e.skipped = true;
                break;
            }
            const double x = std::log(r[i]), y = std::log(v);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
        if (n < 2) e.skipped = true;
        if (!e.skipped) {
            e.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            e.bound_ok = e.slope <= e.bound_exponent + tolerance;
            e.bliss_ok = std::abs(e.slope - e.bliss_slope) <= tolerance;
        }
        rep.entries.push_back(e);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Behaviour at the origin.

struct OriginFit {
    double value = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

/// Least-squares fit of 1, r, r^2, r^3, r^4 on nodes r <= r_fit.
inline OriginFit fit_origin(const GridFunction& f, double r_fit) {
    const auto& r = f.grid.nodes();
    constexpr int B = 5;
    double A[B][B] = {}, rhs[B] = {};
    int used = 0;
    for (std::size_t i = 0; i < r.size() && r[i] <= r_fit; ++i) {
        const double x = r[i] / r_fit;
        double phi[B];
        phi[0] = 1.0;
        for (int c = 1; c < B; ++c) phi[c] = phi[c - 1] * x;
        for (int a = 0; a < B; ++a) {
            rhs[a] += phi[a] * f.values[i];
            for (int b = 0; b < B; ++b) A[a][b] += phi[a] * phi[b];
        }
        ++used;
    }
    if (used < 2 * B) throw std::invalid_argument("fit_origin: too few nodes below r_fit");
    // Gaussian elimination with partial pivoting on the normal equations.
    for (int c = 0; c < B; ++c) {
        int piv = c;
        for (int a = c + 1; a < B; ++a)
            if (std::abs(A[a][c]) > std::abs(A[piv][c])) piv = a;
        std::swap(A[c], A[piv]);
        std::swap(rhs[c], rhs[piv]);
        for (int a = c + 1; a < B; ++a) {
            const double f_ = A[a][c] / A[c][c];
            for (int b = c; b < B; ++b) A[a][b] -= f_ * A[c][b];
            rhs[a] -= f_ * rhs[c];
        }
    }
    double coef[B];
    for (int c = B - 1; c >= 0; --c) {
        double s = rhs[c];
        for (int b = c + 1; b < B; ++b) s -= A[c][b] * coef[b];
        coef[c] = s / A[c][c];
    }
    return {coef[0], coef[1] / r_fit, 2.0 * coef[2] / (r_fit * r_fit), 6.0 * coef[3] / (r_fit * r_fit * r_fit)};
}

struct OriginEntry {
    int k = 0;
    OriginFit fit;
    double expected_d2 = 0.0;   // -w_{k-1}(0)/(alpha+1)
    double d1_relative = 0.0;   // |w'(0)| / |w(0)|
    double d2_relative = 0.0;   // |w''(0) - expected| / |expected|
    double d3_relative = 0.0;   // |w'''(0)| / |w''(0)|
    double boundary_flux = 0.0; // r^alpha w'(r) at the second node
    bool d1_ok = false, d2_ok = false, d3_ok = false;
};

struct OriginReport {
    double r_fit = 0.0;
    double tol_d1 = 1e-3, tol_d2 = 1e-3, tol_d3 = 1e-2;
    std::vector<OriginEntry> entries;  // k = 1..m
    bool pass() const {
        for (const auto& e : entries)
            if (!(e.d1_ok && e.d2_ok && e.d3_ok)) return false;
        return !entries.empty();
    }
};

inline OriginReport origin_behavior(const IterationChain& chain, double r_fit = config::origin_fit_radius) {
    OriginReport rep;
    rep.r_fit = r_fit;
    if (chain.w.empty()) return rep;
    if (chain.w[0].grid.r_min() > 1e-3) throw domain_error("origin_behavior: grid must start at r_min <= 1e-3");
    std::vector<OriginFit> fits;
    for (const auto& w : chain.w) fits.push_back(fit_origin(w, r_fit));
    const auto& r = chain.w[0].grid.nodes();
    for (int k = 1; k <= chain.m; ++k) {
        OriginEntry e;
        e.k = k;
        e.fit = fits[k];
        e.expected_d2 = -fits[k - 1].value / (chain.alpha + 1.0);
        const double w0 = std::abs(e.fit.value);
        e.d1_relative = w0 > 0.0 ? std::abs(e.fit.d1) / w0 : 0.0;
        e.d2_relative = e.expected_d2 != 0.0 ? std::abs(e.fit.d2 - e.expected_d2) / std::abs(e.expected_d2)
                                             : std::abs(e.fit.d2);
        e.d3_relative = e.fit.d2 != 0.0 ? std::abs(e.fit.d3) / std::abs(e.fit.d2) : std::abs(e.fit.d3);
        const auto& v = chain.w[k].values;
        e.boundary_flux = std::pow(r[1], chain.alpha) * (v[2] - v[0]) / (r[2] - r[0]);
        e.d1_ok = e.d1_relative <= rep.tol_d1;
        e.d2_ok = e.d2_relative <= rep.tol_d2;
        e.d3_ok = e.d3_relative <= rep.tol_d3;
        rep.entries.push_back(e);
    }
    return rep;
}

inline bool strictly_decreasing(const GridFunction& f) {
    for (std::size_t i = 1; i < f.size(); ++i)
        if (!(f.values[i] < f.values[i - 1])) return false;
    return true;
}

/// sup over interior nodes of |w_m - u| / max(|u|, floor).
inline double fixed_point_residual(const RadialProfile& u, int m, double alpha, const RadialGrid& grid,
                                   double floor = 1e-12) {
    const auto chain = iterate_chain(u, m, alpha, grid);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double ui = u(grid[i]);
        worst = std::max(worst, std::abs(chain.w[m].values[i] - ui) / std::max(std::abs(ui), floor));
    }
    return worst;
}

/// max over interior nodes of |w_k - (-Delta)^{m-k} w_eps| / |(-Delta)^{m-k} w_eps|, k = 0..m.
inline std::vector<double> chain_vs_closed_form(const IterationChain& chain, const BlissChain& bliss,
                                                double r_lo = 0.0,
                                                double r_hi = std::numeric_limits<double>::infinity()) {
    std::vector<double> out;
    const auto& r = chain.w[0].grid.nodes();
    for (int k = 0; k <= chain.m; ++k) {
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < r.size(); ++i) {
            if (r[i] < r_lo || r[i] > r_hi) continue;
            const double ex = bliss.value(chain.m - k, r[i]);
            worst = std::max(worst, std::abs(chain.w[k].values[i] - ex) / std::abs(ex));
        }
        out.push_back(worst);
    }
    return out;
}

}  // namespace polyrad
