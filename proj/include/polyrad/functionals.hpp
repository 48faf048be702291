#pragma once

// Radial profiles, weighted norms, the energy seminorm, Rayleigh quotients and
// the extremal family w_eps.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coefficients.hpp"
#include "config.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "radial_expr.hpp"

namespace polyrad {

/// A radial function on (0, inf). Either symbolic,
///   f(r) = amplitude * e(r / scale)
/// with e a real-coefficient radial expression, or a black-box evaluator that
/// may carry user-supplied nabla^m chains.
class RadialProfile {
public:
    using Fn = std::function<double(double)>;

    static RadialProfile symbolic(RealRadialExpr e, double amplitude = 1.0, double scale = 1.0) {
        if (!(scale > 0.0)) throw domain_error("RadialProfile: scale must be positive");
        RadialProfile p;
        p.expr_ = std::move(e);
        p.amplitude_ = amplitude;
        p.scale_ = scale;
        return p;
    }

    static RadialProfile black_box(Fn f, int smoothness_order = 0) {
        RadialProfile p;
        p.fn_ = std::move(f);
        p.smoothness_ = smoothness_order;
        return p;
    }

    RadialProfile with_nabla(int m, Fn g) const {
        RadialProfile p = *this;
        p.nabla_[m] = std::move(g);
        return p;
    }
    RadialProfile with_decay(double p_exp) const {
        RadialProfile p = *this;
        p.decay_ = p_exp;
        return p;
    }

    bool is_symbolic() const noexcept { return expr_.has_value(); }
    const std::optional<RealRadialExpr>& expression() const noexcept { return expr_; }
    double amplitude() const noexcept { return amplitude_; }
    double scale() const noexcept { return scale_; }
    std::optional<double> decay_exponent() const noexcept { return decay_; }
    int smoothness_order() const noexcept { return smoothness_; }

    double operator()(double r) const {
        if (expr_) return amplitude_ * expr_->evaluate(alpha_of(*expr_), r / scale_);
        return fn_(r);
    }

    bool has_nabla(int m) const { return expr_.has_value() || nabla_.count(m) > 0; }

    /// r -> nabla^m f(r). Symbolic profiles differentiate exactly, rescaled by scale^-m.
    Fn nabla_fn(int m) const {
        if (expr_) {
            const RealRadialExpr d = nabla_m(*expr_, m);
            const double a = alpha_of(*expr_);
            const double k = amplitude_ * std::pow(scale_, -m);
            const double s = scale_;
            return [d, a, k, s](double r) { return k * d.evaluate(a, r / s); };
        }
        auto it = nabla_.find(m);
        if (it == nabla_.end())
            throw unsupported_profile_error("black-box profile has no nabla^" + std::to_string(m) + " chain");
        return it->second;
    }

    /// r -> (-Delta_alpha)^j f(r); symbolic profiles only.
    Fn polyharmonic_fn(int j) const {
        if (!expr_) throw unsupported_profile_error("(-Delta)^j needs a symbolic profile");
        const RealRadialExpr d = j == 0 ? *expr_ : apply_polyharmonic(*expr_, j, true);
        const double a = alpha_of(*expr_);
        const double k = amplitude_ * std::pow(scale_, -2.0 * j);
        const double s = scale_;
        return [d, a, k, s](double r) { return k * d.evaluate(a, r / s); };
    }

    RadialProfile scaled(double c) const {
        RadialProfile p = *this;
        if (expr_) {
            p.amplitude_ *= c;
        } else {
            auto f = fn_;
            p.fn_ = [f, c](double r) { return c * f(r); };
            for (auto& [m, g] : p.nabla_) {
                auto h = g;
                g = [h, c](double r) { return c * h(r); };
            }
        }
        return p;
    }

    /// Sum of two symbolic profiles at the same scale and alpha.
    friend RadialProfile operator+(const RadialProfile& a, const RadialProfile& b) {
        if (!a.expr_ || !b.expr_) throw unsupported_profile_error("profile sum needs symbolic operands");
        if (a.scale_ != b.scale_ || !(a.expr_->context() == b.expr_->context()))
            throw unsupported_profile_error("profile sum needs matching scale and alpha");
        RealRadialExpr e = a.amplitude_ * *a.expr_ + b.amplitude_ * *b.expr_;
        RadialProfile p = symbolic(std::move(e), 1.0, a.scale_);
        if (a.decay_ && b.decay_) p.decay_ = std::min(*a.decay_, *b.decay_);
        return p;
    }

private:
    static double alpha_of(const RealRadialExpr& e) { return e.context().value; }

    std::optional<RealRadialExpr> expr_;
    double amplitude_ = 1.0;
    double scale_ = 1.0;
    Fn fn_;
    std::map<int, Fn> nabla_;
    std::optional<double> decay_;
    int smoothness_ = 0;
};

inline RadialProfile zero_profile(double alpha) { return RadialProfile::symbolic(RealRadialExpr(BoundAlpha{alpha})); }

// ---------------------------------------------------------------------------
// The extremal family.

/// s = (alpha - 2m + 1)/2, the dilation exponent.
inline double dilation_exponent(int m, double alpha) { return 0.5 * (alpha - 2.0 * m + 1.0); }

/// P^{(alpha-2m+1)/(4m)}, the amplitude of w_1.
inline double bliss_amplitude(int m, double alpha) {
    require_sobolev(m, alpha);
    return std::pow(p_value(m, alpha), (alpha - 2.0 * m + 1.0) / (4.0 * m));
}

/// w_eps(r) = P^{(alpha-2m+1)/(4m)} (eps / (eps^2 + r^2))^{(alpha-2m+1)/2}.
inline RadialProfile bliss_profile(int m, double alpha, double eps) {
    require_sobolev(m, alpha);
    if (!(eps > 0.0)) throw domain_error("bliss_profile: eps must be positive");
    const double s = dilation_exponent(m, alpha);
    return RadialProfile::symbolic(specialize(extremal_base(m), alpha), bliss_amplitude(m, alpha) * std::pow(eps, -s),
                                   eps)
        .with_decay(alpha - 2.0 * m + 1.0);
}

/// w_eps(0) = P^{(alpha-2m+1)/(4m)} eps^{-(alpha-2m+1)/2}.
inline double bliss_origin_value(int m, double alpha, double eps) {
    return bliss_amplitude(m, alpha) * std::pow(eps, -dilation_exponent(m, alpha));
}

/// The closed-form chain u_j = (-Delta_alpha)^j w_eps, j = 0..m, with first
/// derivatives. Exact term algebra at unit scale, then the dilation law
///   u_j(r) = c eps^{-s-2j} U_j(r/eps).
class BlissChain {
public:
    BlissChain(int m, double alpha, double eps) : m_(m), alpha_(alpha), eps_(eps) {
        require_sobolev(m, alpha);
        if (!(eps > 0.0)) throw domain_error("BlissChain: eps must be positive");
        c_ = bliss_amplitude(m, alpha);
        s_ = dilation_exponent(m, alpha);
        RadialExpr cur = extremal_base(m);
        for (int j = 0; j <= m; ++j) {
            if (j > 0) cur = -apply_laplacian(cur);
            lap_.push_back(specialize(cur, alpha));
            dlap_.push_back(specialize(differentiate(cur), alpha));
        }
    }

    int m() const noexcept { return m_; }
    double alpha() const noexcept { return alpha_; }
    double eps() const noexcept { return eps_; }

    double value(int j, double r) const { return factor(j) * lap_.at(j).evaluate(alpha_, r / eps_); }
    double derivative(int j, double r) const {
        return factor(j) / eps_ * dlap_.at(j).evaluate(alpha_, r / eps_);
    }
    double at_origin(int j) const { return factor(j) * lap_.at(j).evaluate(alpha_, 0.0); }

    /// (u_0(0), ..., u_{m-1}(0)): the even initial data of the IVP.
    std::vector<double> even_initial() const {
        std::vector<double> v;
        for (int j = 0; j < m_; ++j) v.push_back(at_origin(j));
        return v;
    }

private:
    double factor(int j) const { return c_ * std::pow(eps_, -s_ - 2.0 * j); }

    int m_;
    double alpha_, eps_, c_ = 0.0, s_ = 0.0;
    std::vector<RealRadialExpr> lap_, dlap_;
};

// ---------------------------------------------------------------------------
// Norms.

inline NormReport improper_integral(const RadialProfile& f, const QuadratureSpec& spec = {}) {
    return improper_integral([&f](double r) { return f(r); }, spec);
}

namespace detail {

inline NormReport root_report(const NormReport& integral, double q) {
    NormReport out = integral;
    out.value = std::pow(std::max(integral.value, 0.0), 1.0 / q);
    out.err_estimate = integral.value > 0.0 ? out.value * integral.err_estimate / (q * integral.value) : 0.0;
    return out;
}

inline bool identically_zero(const RadialProfile& f) { return f.is_symbolic() && f.expression()->is_zero(); }

}  // namespace detail

/// (int_0^inf |f|^q r^theta dr)^{1/q}.
inline NormReport weighted_lebesgue_norm(const RadialProfile& f, double q, double theta,
                                         const QuadratureSpec& spec = {}) {
    if (!(q >= 1.0)) throw domain_error("weighted_lebesgue_norm: q must be >= 1");
    if (!(theta > -1.0)) throw domain_error("weighted_lebesgue_norm: theta must be > -1");
    if (detail::identically_zero(f)) return {};
    const auto rep = improper_integral([&](double r) { return std::pow(std::abs(f(r)), q) * std::pow(r, theta); }, spec);
    return detail::root_report(rep, q);
}

/// ||nabla^m_alpha f||_{L^2_alpha}.
inline NormReport gradient_seminorm(const RadialProfile& f, int m, double alpha, const QuadratureSpec& spec = {}) {
    if (m < 1) throw domain_error("gradient_seminorm: m must be >= 1");
    if (detail::identically_zero(f)) return {};
    const auto g = f.nabla_fn(m);
    const auto rep = improper_integral(
        [&](double r) {
            const double v = g(r);
            return v * v * std::pow(r, alpha);
        },
        spec);
    return detail::root_report(rep, 2.0);
}

struct RayleighReport {
    double quotient = 0.0;
    NormReport seminorm;
    NormReport lebesgue;
    double err_estimate = 0.0;
};

inline RayleighReport rayleigh_report(const RadialProfile& f, int m, double alpha, const QuadratureSpec& spec = {}) {
    const double q = critical_exponent(m, alpha);
    RayleighReport rep;
    rep.lebesgue = weighted_lebesgue_norm(f, q, alpha, spec);
    if (!(rep.lebesgue.value > spec.abs_tol))
        throw domain_error("rayleigh_quotient: ||f||_{L^2*} is below abs_tol, quotient undefined");
    rep.seminorm = gradient_seminorm(f, m, alpha, spec);
    const double n2 = rep.lebesgue.value * rep.lebesgue.value;
    rep.quotient = rep.seminorm.value * rep.seminorm.value / n2;
    rep.err_estimate = rep.quotient * (2.0 * rep.seminorm.err_estimate / std::max(rep.seminorm.value, 1e-300) +
                                       2.0 * rep.lebesgue.err_estimate / rep.lebesgue.value);
    return rep;
}

/// ||nabla^m f||^2_{L^2_alpha} / ||f||^2_{L^{2*}_alpha}.
inline double rayleigh_quotient(const RadialProfile& f, int m, double alpha, const QuadratureSpec& spec = {}) {
    return rayleigh_report(f, m, alpha, spec).quotient;
}

/// The quadrature route to S: the Rayleigh quotient of the minimiser w_1.
inline BestConstantResult best_constant_by_quadrature(int m, double alpha, const QuadratureSpec& spec = {}) {
    require_sobolev(m, alpha);
    const auto rep = rayleigh_report(bliss_profile(m, alpha, 1.0), m, alpha, spec);
    BestConstantResult res;
    res.m = m;
    res.alpha = alpha;
    res.S = rep.quotient;
    res.S_inv_sqrt = 1.0 / std::sqrt(rep.quotient);
    res.route = BestConstantRoute::quadrature;
    res.err_estimate = rep.err_estimate;
    return res;
}

// ---------------------------------------------------------------------------
// Perturbation directions for the minimality probes. With s0 = alpha-2m+1 and
// Q = 1 + r^2, each direction decays at least as fast as w_1.

struct PerturbationDirection {
    std::string name;
    RadialExpr expr;
};

inline std::vector<PerturbationDirection> perturbation_directions(int m) {
    const long long b = 1 - 2LL * m;  // s0 = alpha + b
    auto t = [&](long long c, int rho, long long extra) { return radial_term(AlphaPoly(c), rho, {1, b + extra}); };
    return {
        {"Q^-(s0+2)/2", t(1, 0, 2)},
        {"Q^-(s0+4)/2", t(1, 0, 4)},
        {"r^2 Q^-(s0+4)/2", t(1, 2, 4)},
        {"r^2 Q^-(s0+6)/2", t(1, 2, 6)},
        {"r^4 Q^-(s0+8)/2", t(1, 4, 8)},
        {"Q^-(s0+2)/2 - 2 Q^-(s0+4)/2", t(1, 0, 2) + t(-2, 0, 4)},
        {"-Q^-(s0+2)/2", t(-1, 0, 2)},
        {"Q^-(s0+1)/2", t(1, 0, 1)},
        {"r^2 Q^-(s0+3)/2 - Q^-(s0+3)/2", t(1, 2, 3) + t(-1, 0, 3)},
        {"-r^4 Q^-(s0+6)/2", t(-1, 4, 6)},
    };
}

/// f_eps(r) = eps^{-s} f(r/eps), the norm-preserving dilation of a symbolic profile.
inline RadialProfile dilated(const RadialProfile& f, int m, double alpha, double eps) {
    if (!f.is_symbolic()) throw unsupported_profile_error("dilation needs a symbolic profile");
    if (!(eps > 0.0)) throw domain_error("dilated: eps must be positive");
    auto p = RadialProfile::symbolic(*f.expression(), f.amplitude() * std::pow(eps, -dilation_exponent(m, alpha)),
                                     f.scale() * eps);
    return f.decay_exponent() ? p.with_decay(*f.decay_exponent()) : p;
}

/// w_1 + delta * phi_index.
inline RadialProfile perturbed_profile(int m, double alpha, int index, double delta) {
    const auto dirs = perturbation_directions(m);
    if (index < 0 || index >= static_cast<int>(dirs.size()))
        throw std::invalid_argument("perturbation index out of range [0, " + std::to_string(dirs.size()) + ")");
    const auto phi = RadialProfile::symbolic(specialize(dirs[index].expr, alpha), delta).with_decay(alpha - 2.0 * m + 1.0);
    return bliss_profile(m, alpha, 1.0) + phi;
}

// ---------------------------------------------------------------------------
// Radial bound: |f(r)| r^{(alpha-2m+1)/2} <= c ||f||_{nabla^m}.

struct RadialBoundReport {
    double weighted_sup = 0.0;                // sup |f| r^{(alpha-2m+1)/2}
    double argmax_r = 0.0;
    std::optional<double> seminorm;           // nullopt when the energy diverges
    std::optional<double> normalized_sup;     // weighted_sup / seminorm
    double tail_ratio = 0.0;                  // weighted value at the last node / sup
    bool interior_max = false;
    bool finite = false;
};

inline RadialBoundReport radial_bound_check(const RadialProfile& f, int m, double alpha,
                                            const QuadratureSpec& spec = {}, double r_min = config::bound_r_min,
                                            double r_max = config::bound_r_max, int nodes = config::bound_points) {
    require_sobolev(m, alpha);
    RadialBoundReport rep;
    const double e = 0.5 * (alpha - 2.0 * m + 1.0);
    const double lr0 = std::log(r_min), lr1 = std::log(r_max);
    double last = 0.0;
    int imax = 0;
    for (int i = 0; i < nodes; ++i) {
        const double r = std::exp(lr0 + (lr1 - lr0) * i / (nodes - 1));
        const double v = std::abs(f(r)) * std::pow(r, e);
        if (v > rep.weighted_sup) {
            rep.weighted_sup = v;
            rep.argmax_r = r;
            imax = i;
        }
        last = v;
    }
    rep.tail_ratio = rep.weighted_sup > 0.0 ? last / rep.weighted_sup : 0.0;
    rep.interior_max = rep.weighted_sup > 0.0 && imax > 0 && imax < nodes - 1;
    try {
        const double s = gradient_seminorm(f, m, alpha, spec).value;
        rep.seminorm = s;
        if (s > 0.0) rep.normalized_sup = rep.weighted_sup / s;
    } catch (const convergence_error&) {
        rep.seminorm.reset();
    }
    rep.finite = std::isfinite(rep.weighted_sup) &&
                 (rep.weighted_sup == 0.0 || (rep.normalized_sup && std::isfinite(*rep.normalized_sup)));
    return rep;
}

}  // namespace polyrad
