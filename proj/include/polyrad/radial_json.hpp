#pragma once

// Stable JSON shape for symbolic radial expressions:
//   [{"coeff": ["<rational>", ...by degree], "r_power": int,
//     "sigma": {"a": int, "b": int}}, ...]
// Terms appear in canonical (sigma, r_power) order, so the output is
// byte-stable for equal expressions.

#include "json.hpp"

#include "alpha_poly.hpp"
#include "coefficients.hpp"
#include "radial_expr.hpp"

namespace polyrad {

inline nlohmann::json to_json(const AlphaPoly& p) { return p.to_strings(); }

inline AlphaPoly alpha_poly_from_json(const nlohmann::json& j) {
    return AlphaPoly::from_strings(j.get<std::vector<std::string>>());
}

inline nlohmann::json to_json(const RadialExpr& e) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& t : e.terms()) {
        out.push_back({{"coeff", to_json(t.coeff)},
                       {"r_power", t.r_power},
                       {"sigma", {{"a", t.sigma.alpha_multiplier}, {"b", t.sigma.constant_shift}}}});
    }
    return out;
}

inline RadialExpr radial_expr_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("radial expression JSON must be an array");
    std::vector<RadialTerm> terms;
    for (const auto& t : j) {
        const auto& s = t.at("sigma");
        terms.push_back({alpha_poly_from_json(t.at("coeff")), t.at("r_power").get<int>(),
                         ExponentAffine(s.at("a").get<int>(), s.at("b").get<long long>())});
    }
    return RadialExpr({}, std::move(terms));
}

/// The G table of one m: {"m", "P", "G": [{"i", "j", "coeff"}]} for 1 <= j <= m, 0 <= i <= j.
inline nlohmann::json coeff_table_json(const CoeffTable& t) {
    nlohmann::json g = nlohmann::json::array();
    for (int j = 1; j <= t.m; ++j)
        for (int i = 0; i <= j; ++i) g.push_back({{"i", i}, {"j", j}, {"coeff", to_json(t.g(i, j))}});
    return {{"m", t.m}, {"P", to_json(p_constant(t.m))}, {"G", std::move(g)}};
}

}  // namespace polyrad
