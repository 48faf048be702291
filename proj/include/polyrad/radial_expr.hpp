#pragma once

// Radial expressions: finite sums of c * r^rho * (1 + r^2)^(-sigma/2) with
// sigma = a*alpha + b, a in {0, 1}. The family is closed under the weighted
// radial Laplacian  Delta_alpha u = u'' + (alpha/r) u'  and under d/dr.
//
// BasicRadialExpr is parameterised on the coefficient ring: AlphaPoly keeps
// alpha as a formal symbol (all arithmetic exact), double binds alpha to a
// number so that real amplitudes such as P^{(alpha-2m+1)/4m} can be carried.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "alpha_poly.hpp"
#include "errors.hpp"

namespace polyrad {

/// sigma = alpha_multiplier * alpha + constant_shift.
struct ExponentAffine {
    int alpha_multiplier = 0;
    long long constant_shift = 0;

    constexpr ExponentAffine() = default;
    constexpr ExponentAffine(int a, long long b) : alpha_multiplier(a), constant_shift(b) {
        if (a != 0 && a != 1) throw domain_error("exponent alpha multiplier must be 0 or 1");
    }

    AlphaPoly as_poly() const { return AlphaPoly::affine(alpha_multiplier, constant_shift); }
    double value(double alpha) const { return alpha_multiplier * alpha + static_cast<double>(constant_shift); }
    ExponentAffine shifted(long long d) const { return {alpha_multiplier, constant_shift + d}; }

    friend constexpr auto operator<=>(const ExponentAffine&, const ExponentAffine&) = default;
};

/// Coefficient evaluation context. The symbolic ring has no binding; the real
/// ring carries the numeric alpha that polynomial quantities are evaluated at.
struct SymbolicAlpha {
    friend constexpr bool operator==(SymbolicAlpha, SymbolicAlpha) { return true; }
};
struct BoundAlpha {
    double value = 0.0;
    friend constexpr bool operator==(BoundAlpha, BoundAlpha) = default;
};

template <class Coeff>
struct coeff_traits;

template <>
struct coeff_traits<AlphaPoly> {
    using context = SymbolicAlpha;
    static const AlphaPoly& lift(const context&, const AlphaPoly& p) { return p; }
    static bool is_zero(const AlphaPoly& c) { return c.is_zero(); }
    static double to_double(const AlphaPoly& c, double alpha) { return c.evaluate(alpha); }
};

template <>
struct coeff_traits<double> {
    using context = BoundAlpha;
    static double lift(const context& ctx, const AlphaPoly& p) { return p.evaluate(ctx.value); }
    static bool is_zero(double c) { return c == 0.0; }
    static double to_double(double c, double) { return c; }
};

template <class Coeff>
struct BasicRadialTerm {
    Coeff coeff{};
    int r_power = 0;
    ExponentAffine sigma{};

    double evaluate(double alpha, double r) const {
        const double c = coeff_traits<Coeff>::to_double(coeff, alpha);
        const double s = sigma.value(alpha);
        if (r <= 1.0) return c * std::pow(r, r_power) * std::pow(1.0 + r * r, -0.5 * s);
        return c * std::pow(r, r_power - s) * std::pow(1.0 + 1.0 / (r * r), -0.5 * s);
    }
};

template <class Coeff>
class BasicRadialExpr {
public:
    using coeff_type = Coeff;
    using traits = coeff_traits<Coeff>;
    using context_type = typename traits::context;
    using term_type = BasicRadialTerm<Coeff>;

    BasicRadialExpr() = default;
    explicit BasicRadialExpr(context_type ctx) : ctx_(ctx) {}
    BasicRadialExpr(context_type ctx, std::vector<term_type> terms) : ctx_(ctx), terms_(std::move(terms)) {
        canonicalize();
    }

    static BasicRadialExpr term(context_type ctx, Coeff c, int r_power, ExponentAffine sigma) {
        return BasicRadialExpr(ctx, {term_type{std::move(c), r_power, sigma}});
    }

    const context_type& context() const noexcept { return ctx_; }
    const std::vector<term_type>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    bool has_negative_powers() const {
        return std::any_of(terms_.begin(), terms_.end(), [](const term_type& t) { return t.r_power < 0; });
    }

    /// Coefficient attached to r^rho (1+r^2)^(-sigma/2); zero when absent.
    Coeff coefficient(int r_power, ExponentAffine sigma) const {
        for (const auto& t : terms_)
            if (t.r_power == r_power && t.sigma == sigma) return t.coeff;
        return Coeff{};
    }

    BasicRadialExpr& operator+=(const BasicRadialExpr& o) {
        terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
        canonicalize();
        return *this;
    }
    BasicRadialExpr& operator-=(const BasicRadialExpr& o) { return *this += -o; }
    BasicRadialExpr& operator*=(const Coeff& s) {
        for (auto& t : terms_) t.coeff = t.coeff * s;
        canonicalize();
        return *this;
    }

    friend BasicRadialExpr operator+(BasicRadialExpr a, const BasicRadialExpr& b) { return a += b; }
    friend BasicRadialExpr operator-(BasicRadialExpr a, const BasicRadialExpr& b) { return a -= b; }
    friend BasicRadialExpr operator-(BasicRadialExpr a) {
        for (auto& t : a.terms_) t.coeff = -t.coeff;
        return a;
    }
    friend BasicRadialExpr operator*(const Coeff& s, BasicRadialExpr e) { return e *= s; }
    friend BasicRadialExpr operator*(BasicRadialExpr e, const Coeff& s) { return e *= s; }

    /// Structural equality of canonical forms.
    friend bool operator==(const BasicRadialExpr& a, const BasicRadialExpr& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t k = 0; k < a.terms_.size(); ++k) {
            const auto& x = a.terms_[k];
            const auto& y = b.terms_[k];
            if (x.r_power != y.r_power || x.sigma != y.sigma || !(x.coeff == y.coeff)) return false;
        }
        return true;
    }

    double evaluate(double alpha, double r) const {
        double s = 0.0;
        for (const auto& t : terms_) s += t.evaluate(alpha, r);
        return s;
    }

    /// Merge like (sigma, r_power) keys, drop zero coefficients, sort by
    /// (sigma, r_power). Idempotent.
    void canonicalize() {
        std::sort(terms_.begin(), terms_.end(), [](const term_type& x, const term_type& y) {
            return std::tie(x.sigma, x.r_power) < std::tie(y.sigma, y.r_power);
        });
        std::vector<term_type> merged;
        merged.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!merged.empty() && merged.back().sigma == t.sigma && merged.back().r_power == t.r_power)
                merged.back().coeff = merged.back().coeff + t.coeff;
            else
                merged.push_back(std::move(t));
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [](const term_type& t) { return traits::is_zero(t.coeff); }),
                     merged.end());
        terms_ = std::move(merged);
    }

private:
    context_type ctx_{};
    std::vector<term_type> terms_;
};

using RadialTerm = BasicRadialTerm<AlphaPoly>;
using RadialExpr = BasicRadialExpr<AlphaPoly>;
using RealRadialExpr = BasicRadialExpr<double>;

// ---------------------------------------------------------------------------
// Constructors for the common shapes.

inline RadialExpr radial_term(AlphaPoly c, int r_power, ExponentAffine sigma) {
    return RadialExpr::term({}, std::move(c), r_power, sigma);
}

inline RadialExpr radial_constant(AlphaPoly c) { return radial_term(std::move(c), 0, {0, 0}); }

/// (1 + r^2)^(-(alpha - 2m + 1)/2), the unnormalised extremal profile.
inline RadialExpr extremal_base(int m) { return radial_term(1, 0, {1, 1 - 2LL * m}); }

/// Bind alpha to a number; coefficients become reals.
inline RealRadialExpr specialize(const RadialExpr& e, double alpha) {
    std::vector<BasicRadialTerm<double>> terms;
    terms.reserve(e.size());
    for (const auto& t : e.terms()) terms.push_back({t.coeff.evaluate(alpha), t.r_power, t.sigma});
    return RealRadialExpr(BoundAlpha{alpha}, std::move(terms));
}

// ---------------------------------------------------------------------------
// Operators.

/// A, B, C of the term-wise Laplacian identity
///   Delta_alpha [r^rho (1+r^2)^(-sigma/2)]
///     = (1+r^2)^(-(sigma+4)/2) [A r^(rho+2) + B r^rho + C r^(rho-2)].
struct LaplacianCoefficients {
    AlphaPoly A, B, C;
};

inline LaplacianCoefficients abc_coefficients(int rho, ExponentAffine sigma) {
    const AlphaPoly a = AlphaPoly::alpha();
    const AlphaPoly p = rho;
    const AlphaPoly s = sigma.as_poly();
    const AlphaPoly rr = p * (p + a - 1);  // rho (rho + alpha - 1)
    return {rr + s * (s - 2 * p + 1 - a), 2 * rr - s * (2 * p + a + 1), rr};
}

template <class Coeff>
BasicRadialExpr<Coeff> apply_laplacian(const BasicRadialExpr<Coeff>& e) {
    using traits = coeff_traits<Coeff>;
    std::vector<BasicRadialTerm<Coeff>> out;
    out.reserve(3 * e.size());
    for (const auto& t : e.terms()) {
        const auto abc = abc_coefficients(t.r_power, t.sigma);
        const ExponentAffine s4 = t.sigma.shifted(4);
        out.push_back({t.coeff * traits::lift(e.context(), abc.A), t.r_power + 2, s4});
        out.push_back({t.coeff * traits::lift(e.context(), abc.B), t.r_power, s4});
        if (!abc.C.is_zero()) out.push_back({t.coeff * traits::lift(e.context(), abc.C), t.r_power - 2, s4});
    }
    return BasicRadialExpr<Coeff>(e.context(), std::move(out));
}

/// Delta_alpha applied j times; multiplied by (-1)^j when `negated` is set,
/// which yields (-Delta_alpha)^j e.
template <class Coeff>
BasicRadialExpr<Coeff> apply_polyharmonic(const BasicRadialExpr<Coeff>& e, int j, bool negated = true) {
    if (j < 1) throw domain_error("apply_polyharmonic: j must be >= 1");
    BasicRadialExpr<Coeff> out = e;
    for (int k = 0; k < j; ++k) {
        out = apply_laplacian(out);
        if (negated) out = -out;
    }
    return out;
}

/// Exact d/dr:  r^rho (1+r^2)^(-s/2)  ->  rho r^(rho-1) (1+r^2)^(-s/2)
///                                        - s r^(rho+1) (1+r^2)^(-(s+2)/2).
template <class Coeff>
BasicRadialExpr<Coeff> differentiate(const BasicRadialExpr<Coeff>& e) {
    using traits = coeff_traits<Coeff>;
    std::vector<BasicRadialTerm<Coeff>> out;
    out.reserve(2 * e.size());
    for (const auto& t : e.terms()) {
        if (t.r_power != 0) out.push_back({t.coeff * traits::lift(e.context(), AlphaPoly(t.r_power)), t.r_power - 1, t.sigma});
        const AlphaPoly s = t.sigma.as_poly();
        if (!s.is_zero()) out.push_back({-(t.coeff * traits::lift(e.context(), s)), t.r_power + 1, t.sigma.shifted(2)});
    }
    return BasicRadialExpr<Coeff>(e.context(), std::move(out));
}

/// Delta_alpha^k e for m = 2k, (Delta_alpha^k e)' for m = 2k + 1.
template <class Coeff>
BasicRadialExpr<Coeff> nabla_m(const BasicRadialExpr<Coeff>& e, int m) {
    if (m < 1) throw domain_error("nabla_m: m must be >= 1");
    BasicRadialExpr<Coeff> out = e;
    for (int k = 0; k < m / 2; ++k) out = apply_laplacian(out);
    if (m % 2 == 1) out = differentiate(out);
    return out;
}

template <class Coeff>
double evaluate(const BasicRadialExpr<Coeff>& e, double alpha_value, double r) {
    if (!(r > 0.0)) throw domain_error("evaluate: r must be positive");
    return e.evaluate(alpha_value, r);
}

/// Exact value when every (1+r^2) exponent is an integer at the given alpha;
/// nullopt when an irrational power would be required.
inline std::optional<Rational> evaluate_exact(const RadialExpr& e, const Rational& alpha, const Rational& r) {
    if (r <= 0) throw domain_error("evaluate_exact: r must be positive");
    const Rational q = 1 + r * r;
    Rational sum = 0;
    for (const auto& t : e.terms()) {
        const Rational sigma = t.sigma.alpha_multiplier * alpha + t.sigma.constant_shift;
        const Rational half = sigma / 2;
        if (boost::multiprecision::denominator(half) != 1) return std::nullopt;
        const long long k = static_cast<long long>(boost::multiprecision::numerator(half));
        auto ipow = [](Rational base, long long n) {
            Rational acc = 1;
            if (n < 0) {
                base = 1 / base;
                n = -n;
            }
            for (; n > 0; --n) acc *= base;
            return acc;
        };
        sum += t.coeff.evaluate(alpha) * ipow(r, t.r_power) * ipow(q, -k);
    }
    return sum;
}

/// Unique normal form on the subspace r_power >= 0: every even/odd power is
/// lowered to r^0 / r^1 with  r^2 (1+r^2)^(-s/2) = (1+r^2)^(-(s-2)/2) - (1+r^2)^(-s/2).
/// Two expressions with non-negative powers denote the same function for
/// generic alpha iff their normal forms coincide.
template <class Coeff>
BasicRadialExpr<Coeff> reduce(const BasicRadialExpr<Coeff>& e) {
    using Key = std::pair<ExponentAffine, int>;
    std::map<Key, Coeff> acc;
    for (const auto& t : e.terms()) {
        auto [it, fresh] = acc.try_emplace({t.sigma, t.r_power}, t.coeff);
        if (!fresh) it->second = it->second + t.coeff;
    }
    for (;;) {
        auto it = std::find_if(acc.begin(), acc.end(), [](const auto& kv) { return kv.first.second >= 2; });
        if (it == acc.end()) break;
        const auto [sigma, rho] = it->first;
        const Coeff c = it->second;
        acc.erase(it);
        if (coeff_traits<Coeff>::is_zero(c)) continue;
        auto add = [&](Key k, const Coeff& v) {
            auto [jt, fresh] = acc.try_emplace(k, v);
            if (!fresh) jt->second = jt->second + v;
        };
        add({sigma.shifted(-2), rho - 2}, c);
        add({sigma, rho - 2}, -c);
    }
    std::vector<BasicRadialTerm<Coeff>> out;
    out.reserve(acc.size());
    for (auto& [k, c] : acc) out.push_back({c, k.second, k.first});
    return BasicRadialExpr<Coeff>(e.context(), std::move(out));
}

/// Semantic equality via the normal form.
template <class Coeff>
bool equivalent(const BasicRadialExpr<Coeff>& a, const BasicRadialExpr<Coeff>& b) {
    return reduce(a - b).is_zero();
}

}  // namespace polyrad
