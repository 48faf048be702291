#pragma once

// Exact combinatorial coefficients of the polyharmonic expansion
//
//   (-Delta_alpha)^j u = (1+r^2)^(-(alpha-2m+1+4j)/2) * sum_i G(i,j) r^(2i),
//   u = (1+r^2)^(-(alpha-2m+1)/2),
//
// together with the induction quantity H(i,j) and the checks tying them to
// the symbolic Laplacian.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "alpha_poly.hpp"
#include "errors.hpp"
#include "radial_expr.hpp"

namespace polyrad {

inline Integer binomial(int j, int i) {
    if (i < 0 || i > j || j < 0) return 0;
    Integer b = 1;
    for (int k = 1; k <= i; ++k) b = b * (j - i + k) / k;
    return b;
}

inline Rational pow2(int i) {
    Rational p = 1;
    for (int k = 0; k < (i < 0 ? -i : i); ++k) p *= 2;
    return i < 0 ? Rational(1 / p) : p;
}

/// D(i,j): 0 for i < 0 or i >= j+1, 1 for i = 0, prod_{h=j-i+1}^{j} (m-h) otherwise.
inline Integer d_factor(int i, int j, int m) {
    if (m < 1) throw domain_error("d_factor: m must be >= 1");
    if (i < 0 || i >= j + 1) return 0;
    Integer d = 1;
    for (int h = j - i + 1; h <= j; ++h) d *= (m - h);
    return d;
}

/// E(i,j): prod_{h=i}^{j-1} (alpha + 1 + 2h) for 0 <= i <= j-1, 1 for i = j, 0 otherwise.
inline AlphaPoly e_factor(int i, int j) {
    if (i < 0 || i >= j + 1) return {};
    AlphaPoly e = 1;
    for (int h = i; h <= j - 1; ++h) e *= AlphaPoly::affine(1, 1 + 2LL * h);
    return e;
}

/// K_j = prod_{h=0}^{j-1} (alpha - 2m + 1 + 2h).
inline AlphaPoly k_factor(int j, int m) {
    if (j < 0 || j > m) throw domain_error("k_factor: requires 0 <= j <= m");
    AlphaPoly k = 1;
    for (int h = 0; h <= j - 1; ++h) k *= AlphaPoly::affine(1, 1 - 2LL * m + 2LL * h);
    return k;
}

/// G(i,j) = 2^i binom(j,i) K_j D(i,j) E(i,j).
inline AlphaPoly g_coefficient(int i, int j, int m) {
    if (j < 0 || j > m) throw domain_error("g_coefficient: requires 0 <= j <= m");
    const Integer scalar = binomial(j, i) * d_factor(i, j, m);
    if (scalar == 0) return {};
    return AlphaPoly(pow2(i) * Rational(scalar)) * k_factor(j, m) * e_factor(i, j);
}

/// sigma = alpha - 2m + 1 + 4j, the exponent carried by (-Delta_alpha)^j u.
inline ExponentAffine expansion_sigma(int j, int m) { return {1, 1 - 2LL * m + 4LL * j}; }

/// H(i,j) straight from its three-line definition with sigma = alpha-2m+1+4j.
inline AlphaPoly h_coefficient(int i, int j, int m) {
    if (j < 1 || j >= m) throw domain_error("h_coefficient: requires 1 <= j < m");
    const ExponentAffine sigma = expansion_sigma(j, m);
    auto part = [&](int ii) {
        return AlphaPoly(pow2(ii) * Rational(binomial(j, ii) * d_factor(ii, j, m))) * e_factor(ii, j);
    };
    AlphaPoly h;
    h += part(i - 1) * abc_coefficients(2 * i - 2, sigma).A;
    h += part(i) * abc_coefficients(2 * i, sigma).B;
    h += part(i + 1) * abc_coefficients(2 * i + 2, sigma).C;
    return h;
}

/// P(alpha, m) = prod_{h=-m}^{m-1} (alpha + 1 + 2h).
inline AlphaPoly p_constant(int m) {
    if (m < 1) throw domain_error("p_constant: m must be >= 1");
    AlphaPoly p = 1;
    for (int h = -m; h <= m - 1; ++h) p *= AlphaPoly::affine(1, 1 + 2LL * h);
    return p;
}

// ---------------------------------------------------------------------------
// Case-reduced forms of H, kept independent of h_coefficient so that a
// transcription error in either is detected by comparing them.

struct LmqTriple {
    Integer L, M, Q;
};

inline LmqTriple lmq(int j, int m) {
    return {-Integer(j + 1) * (m - j - 1), 2 * Integer(j + 1) * (m - j - 1) * (m - 2 * j),
            4 * Integer(j) * (j + 1) * (m - j - 1) * (m - j)};
}

/// (alpha+1)^2 L_j + (alpha+1) M_j + Q_j.
inline AlphaPoly lmq_bracket(int j, int m) {
    const auto t = lmq(j, m);
    const AlphaPoly a1 = AlphaPoly::affine(1, 1);
    return a1 * a1 * AlphaPoly(Rational(t.L)) + a1 * AlphaPoly(Rational(t.M)) + AlphaPoly(Rational(t.Q));
}

/// -(j+1)(m-j-1)(alpha+2j+1)(alpha-2m+2j+1).
inline AlphaPoly lmq_bracket_factored(int j, int m) {
    return AlphaPoly(-Integer(j + 1) * (m - j - 1)) * AlphaPoly::affine(1, 2LL * j + 1) *
           AlphaPoly::affine(1, 2LL * j + 1 - 2LL * m);
}

/// Interior case 1 <= i <= j-1, bracketed form:
/// (2^i / i) binom(j,i-1) D(i-1,j) E(i+1,j) (alpha+2i+1) [bracket].
inline AlphaPoly h_case1_bracket_form(int i, int j, int m) {
    return AlphaPoly(pow2(i) / i * Rational(binomial(j, i - 1) * d_factor(i - 1, j, m))) * e_factor(i + 1, j) *
           AlphaPoly::affine(1, 2LL * i + 1) * lmq_bracket(j, m);
}

/// The case-reduced closed forms of H(i,j) for i = 0 .. j+1.
inline AlphaPoly h_case_reduced(int i, int j, int m) {
    if (j < 1 || j >= m) throw domain_error("h_case_reduced: requires 1 <= j < m");
    const AlphaPoly shift = AlphaPoly::affine(1, 1 - 2LL * m + 2LL * j);  // alpha + 1 - 2m + 2j
    if (i == 0) return -(e_factor(0, j + 1) * shift);
    if (i == j + 1)
        return AlphaPoly(-pow2(j + 1) * Rational(d_factor(j, j, m) * (m - j - 1))) * shift;
    if (i == j) return AlphaPoly(pow2(j) * Rational(d_factor(j - 1, j, m))) * lmq_bracket(j, m);
    if (i >= 1 && i <= j - 1)
        return AlphaPoly(-pow2(i) * Rational(binomial(j + 1, i) * d_factor(i, j + 1, m))) * shift *
               e_factor(i, j + 1);
    return {};
}

// ---------------------------------------------------------------------------

/// Exact table of D, E, K, G, H for one m, j in 0..m, i in -1..j+2.
struct CoeffTable {
    using Index = std::pair<int, int>;  // (i, j)

    int m = 0;
    std::map<Index, Integer> D;
    std::map<Index, AlphaPoly> E;
    std::map<int, AlphaPoly> K;
    std::map<Index, AlphaPoly> G;
    std::map<Index, AlphaPoly> H;  // only for 1 <= j < m

    static CoeffTable build(int m) {
        if (m < 1) throw domain_error("CoeffTable: m must be >= 1");
        CoeffTable t;
        t.m = m;
        for (int j = 0; j <= m; ++j) {
            t.K[j] = k_factor(j, m);
            for (int i = -1; i <= j + 2; ++i) {
                t.D[{i, j}] = d_factor(i, j, m);
                t.E[{i, j}] = e_factor(i, j);
                t.G[{i, j}] = g_coefficient(i, j, m);
                if (j >= 1 && j < m) t.H[{i, j}] = h_coefficient(i, j, m);
            }
        }
        return t;
    }

    AlphaPoly g(int i, int j) const {
        auto it = G.find({i, j});
        return it == G.end() ? AlphaPoly{} : it->second;
    }
};

struct CoefficientDiff {
    int r_power = 0;
    ExponentAffine sigma{};
    AlphaPoly computed;
    AlphaPoly expected;
    AlphaPoly difference() const { return computed - expected; }
};

struct ExpansionCheck {
    int j = 0;
    bool pass = false;
    std::vector<CoefficientDiff> diffs;
};

struct ExpansionReport {
    int m = 0;
    std::vector<ExpansionCheck> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

/// Compare (-Delta_alpha)^j u, computed by the term algebra, against the
/// G-table expansion coefficient by coefficient, for j = 1..m.
inline ExpansionReport verify_expansion(int m, const CoeffTable& table) {
    if (m < 1) throw domain_error("verify_expansion: m must be >= 1");
    ExpansionReport report;
    report.m = m;
    RadialExpr current = extremal_base(m);
    for (int j = 1; j <= m; ++j) {
        current = -apply_laplacian(current);
        const ExponentAffine sigma = expansion_sigma(j, m);
        std::vector<RadialTerm> expected_terms;
        for (int i = 0; i <= j; ++i) expected_terms.push_back({table.g(i, j), 2 * i, sigma});
        const RadialExpr expected({}, std::move(expected_terms));

        ExpansionCheck check;
        check.j = j;
        std::map<std::pair<ExponentAffine, int>, std::pair<AlphaPoly, AlphaPoly>> keyed;
        for (const auto& t : current.terms()) keyed[{t.sigma, t.r_power}].first = t.coeff;
        for (const auto& t : expected.terms()) keyed[{t.sigma, t.r_power}].second = t.coeff;
        for (const auto& [key, ce] : keyed)
            if (ce.first != ce.second) check.diffs.push_back({key.second, key.first, ce.first, ce.second});
        check.pass = check.diffs.empty() && !current.has_negative_powers();
        report.checks.push_back(std::move(check));
    }
    return report;
}

inline ExpansionReport verify_expansion(int m) { return verify_expansion(m, CoeffTable::build(m)); }

/// Exact symbolic check of (-Delta_alpha)^m u = P(alpha,m) (1+r^2)^(-(alpha+2m+1)/2).
inline bool verify_polyharmonic_identity(int m) {
    const RadialExpr lhs = apply_polyharmonic(extremal_base(m), m, true);
    const RadialExpr rhs = radial_term(p_constant(m), 0, {1, 2LL * m + 1});
    return lhs == rhs;
}

/// Every algebraic identity of the induction step for one m; each entry of
/// `failures` names the identity and the index that broke.
struct RecursionReport {
    int m = 0;
    int identities_checked = 0;
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
};

inline RecursionReport verify_recursion(int m) {
    RecursionReport rep;
    rep.m = m;
    auto check = [&](bool ok, const std::string& what) {
        ++rep.identities_checked;
        if (!ok) rep.failures.push_back(what);
    };
    const std::string tag = "m=" + std::to_string(m);

    for (int j = 0; j < m; ++j)
        check(k_factor(j + 1, m) == AlphaPoly::affine(1, 1 - 2LL * m + 2LL * j) * k_factor(j, m),
              "K recursion " + tag + " j=" + std::to_string(j));

    check(g_coefficient(0, m, m) == p_constant(m), "G(0,m) = P " + tag);
    check(k_factor(m, m) * e_factor(0, m) == p_constant(m), "K_m E(0,m) = P " + tag);
    for (int i = 1; i <= m; ++i) check(g_coefficient(i, m, m).is_zero(), "G(i,m) = 0 " + tag + " i=" + std::to_string(i));

    for (int j = 1; j < m; ++j) {
        const std::string jt = tag + " j=" + std::to_string(j);
        check(lmq_bracket(j, m) == lmq_bracket_factored(j, m), "L/M/Q bracket " + jt);
        for (int i = 0; i <= j + 1; ++i) {
            const std::string it = jt + " i=" + std::to_string(i);
            const AlphaPoly h = h_coefficient(i, j, m);
            check(g_coefficient(i, j + 1, m) == -(k_factor(j, m) * h), "G(i,j+1) = -K_j H(i,j) " + it);
            check(h == h_case_reduced(i, j, m), "H case reduction " + it);
            if (i >= 1 && i <= j - 1) check(h == h_case1_bracket_form(i, j, m), "H case-1 bracket form " + it);
        }
        // Zero conventions at the extended indices.
        check(g_coefficient(-1, j, m).is_zero() && g_coefficient(j + 1, j, m).is_zero() &&
                  g_coefficient(j + 2, j, m).is_zero(),
              "G zero extension " + jt);
    }
    check(abc_coefficients(0, {1, 0}).C.is_zero(), "C(0, alpha) = 0");
    return rep;
}

}  // namespace polyrad
