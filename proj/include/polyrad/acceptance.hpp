#pragma once

// The acceptance suite: one pass/fail record per criterion, with the
// tolerances pinned below. Shared by the acceptance binary and verify-all.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "coefficients.hpp"
#include "config.hpp"
#include "constants.hpp"
#include "functionals.hpp"
#include "iteration.hpp"
#include "ode.hpp"
#include "parallel.hpp"
#include "radial_json.hpp"
#include "report.hpp"

namespace polyrad::acceptance {

namespace tol {
inline constexpr double m1_consistency = 1e-12;
inline constexpr double s13_closed = 1e-12;
inline constexpr double s13_quadrature = 1e-10;
inline constexpr double quad_vs_gamma = 1e-10;
inline constexpr double attainment = 1e-6;
inline constexpr double dilation = 1e-8;
inline constexpr double minimality = 1e-6;
inline constexpr double classify_low = 1e-6;
inline constexpr double classify_high = 1e-5;
inline constexpr double fixed_point = 1e-3;
inline constexpr double non_solution = 1e-2;
inline constexpr double inverse_residual = 1e-4;
inline constexpr double golden_constants = 1e-12;
}  // namespace tol

namespace budget {
inline constexpr double identity_s = 10.0;
inline constexpr double recursion_s = 5.0;
inline constexpr double rayleigh_s = 60.0;
inline constexpr double classify_s = 30.0;
}  // namespace budget

struct Options {
    bool quick = false;
    unsigned long long seed = config::default_seed;
    std::optional<std::filesystem::path> golden_dir;
};

struct CriterionResult {
    std::string id;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct Summary {
    std::vector<CriterionResult> results;
    bool pass() const {
        for (const auto& r : results)
            if (!r.pass) return false;
        return !results.empty();
    }
};

inline std::string line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "  " << r.title << "  (" << report::format_number(r.seconds)
       << " s)  " << r.detail;
    return os.str();
}

inline nlohmann::json to_json(const Summary& s) {
    nlohmann::json j = report::document();
    j["pass"] = s.pass();
    j["criteria"] = nlohmann::json::array();
    for (const auto& r : s.results)
        j["criteria"].push_back({{"id", r.id},
                                 {"title", r.title},
                                 {"pass", r.pass},
                                 {"seconds", report::number(r.seconds)},
                                 {"detail", r.detail}});
    return j;
}

namespace detail {

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline std::string sci(double x) { return report::format_number(x); }

/// Time `body`, which fills pass/detail; exceptions turn into a failure.
inline CriterionResult timed(std::string id, std::string title, double budget_s,
                             const std::function<void(CriterionResult&)>& body) {
    CriterionResult r;
    r.id = std::move(id);
    r.title = std::move(title);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0.0 && r.seconds > budget_s) {
        r.pass = false;
        r.detail += "; over the " + sci(budget_s) + " s budget";
    }
    return r;
}

inline const std::vector<std::pair<int, double>>& rayleigh_pairs() {
    static const std::vector<std::pair<int, double>> p = {{1, 3.0}, {1, 5.0}, {2, 4.0}, {2, 6.0}, {3, 8.0}};
    return p;
}

}  // namespace detail

inline CriterionResult polyharmonic_identity() {
    return detail::timed("C1", "symbolic polyharmonic identity, m = 1..8", budget::identity_s, [](CriterionResult& r) {
        std::string bad;
        for (int m = 1; m <= 8; ++m)
            if (!verify_polyharmonic_identity(m)) bad += " m=" + std::to_string(m);
        r.pass = bad.empty();
        r.detail = r.pass ? "exact equality for every m" : "mismatch at" + bad;
    });
}

inline CriterionResult coefficient_recursion() {
    return detail::timed("C2", "coefficient recursion and case reductions, m <= 8", budget::recursion_s, [](CriterionResult& r) {
        int checked = 0;
        std::vector<std::string> failures;
        for (int m = 1; m <= 8; ++m) {
            const auto rep = verify_recursion(m);
            checked += rep.identities_checked;
            failures.insert(failures.end(), rep.failures.begin(), rep.failures.end());
            const auto exp = verify_expansion(m);
            ++checked;
            if (!exp.pass()) failures.push_back("expansion m=" + std::to_string(m));
        }
        r.pass = failures.empty();
        r.detail = std::to_string(checked) + " identities";
        if (!r.pass) r.detail += ", first failure: " + failures.front();
    });
}

inline CriterionResult vanishing_top_row() {
    return detail::timed("C3", "G(i,m) = 0 for i >= 1 and G(0,m) = P, m <= 8", 0.0, [](CriterionResult& r) {
        std::string bad;
        for (int m = 1; m <= 8; ++m) {
            if (g_coefficient(0, m, m) != p_constant(m)) bad += " G(0," + std::to_string(m) + ")";
            for (int i = 1; i <= m; ++i)
                if (!g_coefficient(i, m, m).is_zero()) bad += " G(" + std::to_string(i) + "," + std::to_string(m) + ")";
        }
        r.pass = bad.empty();
        r.detail = r.pass ? "exact" : "nonzero or wrong:" + bad;
    });
}

inline CriterionResult best_constant_m1(unsigned long long seed) {
    return detail::timed("C4", "best constant, m = 1 closed forms and quadrature", 0.0, [seed](CriterionResult& r) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(2.0, 50.0);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double a = dist(rng);
            worst = std::max(worst, detail::rel(best_constant(1, a).S_inv_sqrt, bliss_constant_m1_inv_sqrt(a)));
        }
        const double exact = 4.0 / std::sqrt(3.0);
        const double closed = detail::rel(best_constant(1, 3.0).S, exact);
        const double quad = detail::rel(best_constant_by_quadrature(1, 3.0).S, exact);
        r.pass = worst <= tol::m1_consistency && closed <= tol::s13_closed && quad <= tol::s13_quadrature;
        r.detail = "20 samples max rel " + detail::sci(worst) + "; S(1,3) closed " + detail::sci(closed) +
                   ", quadrature " + detail::sci(quad);
    });
}

inline CriterionResult quadrature_vs_gamma() {
    return detail::timed("C5", "quadrature against the Gamma closed form", 0.0, [](CriterionResult& r) {
        double worst = 0.0;
        for (double a : {1.5, 3.0, 4.0, 7.25}) {
            const auto q = improper_integral([a](double x) { return std::pow(x, a) * std::pow(1.0 + x * x, -(a + 1.0)); });
            worst = std::max(worst, detail::rel(q.value, std::exp(log_extremal_integral(a))));
        }
        const auto one = improper_integral([](double x) { return x / ((1.0 + x * x) * (1.0 + x * x)); });
        const double d1 = std::abs(one.value - 0.5);
        r.pass = worst <= tol::quad_vs_gamma && d1 <= tol::quad_vs_gamma * 0.5;
        r.detail = "max rel " + detail::sci(worst) + "; alpha = 1 abs " + detail::sci(d1);
    });
}

inline CriterionResult attainment_and_dilation() {
    return detail::timed("C6", "minimiser attains S, quotient independent of eps", budget::rayleigh_s, [](CriterionResult& r) {
        const auto& pairs = detail::rayleigh_pairs();
        const std::size_t ne = config::eps_list.size();
        const auto q = parallel_map(pairs.size() * ne, [&](std::size_t i) {
            const auto [m, a] = pairs[i / ne];
            return rayleigh_quotient(bliss_profile(m, a, config::eps_list[i % ne]), m, a);
        });
        double worst_s = 0.0, worst_eps = 0.0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const double S = best_constant(pairs[p].first, pairs[p].second).S;
            for (std::size_t e = 0; e < ne; ++e) {
                worst_s = std::max(worst_s, detail::rel(q[p * ne + e], S));
                for (std::size_t f = 0; f < e; ++f) worst_eps = std::max(worst_eps, detail::rel(q[p * ne + e], q[p * ne + f]));
            }
        }
        r.pass = worst_s <= tol::attainment && worst_eps <= tol::dilation;
        r.detail = "max rel to S " + detail::sci(worst_s) + ", eps spread " + detail::sci(worst_eps);
    });
}

inline CriterionResult minimality_probes() {
    return detail::timed("C7", "minimality probes, 10 directions", 0.0, [](CriterionResult& r) {
        const auto& pairs = detail::rayleigh_pairs();
        const std::size_t nd = perturbation_directions(1).size();
        const std::size_t na = config::probe_amplitudes.size();
        const std::size_t per = nd * na;
        const auto excess = parallel_map(pairs.size() * per, [&](std::size_t i) {
            const auto [m, a] = pairs[i / per];
            const int dir = static_cast<int>((i % per) / na);
            const double delta = config::probe_amplitudes[i % na];
            return rayleigh_quotient(perturbed_profile(m, a, dir, delta), m, a) - best_constant(m, a).S;
        });
        const double least = *std::min_element(excess.begin(), excess.end());
        r.pass = least >= -tol::minimality;
        r.detail = std::to_string(excess.size()) + " probes, least excess " + detail::sci(least);
    });
}

inline CriterionResult ode_classification() {
    return detail::timed("C8", "ODE classification against w_eps", budget::classify_s, [](CriterionResult& r) {
        struct Case {
            int m;
            double a, eps, bound;
        };
        const std::vector<Case> cases = {{2, 4.0, 1.0, tol::classify_low},
                                         {1, 3.0, 0.5, tol::classify_low},
                                         {3, 8.0, 1.0, tol::classify_high}};
        const auto dev = parallel_map(cases.size(), [&](std::size_t i) {
            return classification_check(cases[i].m, cases[i].a, cases[i].eps, config::ivp_r_max).max_rel_dev;
        });
        r.pass = true;
        for (std::size_t i = 0; i < cases.size(); ++i) {
            r.pass = r.pass && dev[i] <= cases[i].bound;
            r.detail += (i ? ", " : "") + std::string("(") + std::to_string(cases[i].m) + "," +
                        detail::sci(cases[i].a) + "," + detail::sci(cases[i].eps) + ") " + detail::sci(dev[i]);
        }
    });
}

inline CriterionResult regularity_fixed_point(bool quick) {
    return detail::timed("C9", "regularity fixed point u = w_m", 0.0, [quick](CriterionResult& r) {
        const int n = quick ? config::quick_grid_points : config::fixed_point_grid_points;
        const auto grid = RadialGrid::geometric(config::grid_r_min, config::grid_r_max, n);
        const auto w = bliss_profile(2, 4.0, 1.0);
        const double res = fixed_point_residual(w, 2, 4.0, grid);
        const double off = fixed_point_residual(w.scaled(1.1), 2, 4.0, grid);
        r.pass = res <= tol::fixed_point && off >= tol::non_solution;
        r.detail = std::to_string(n) + " nodes: w_1 " + detail::sci(res) + ", 1.1 w_1 " + detail::sci(off);
    });
}

inline IterationChain bliss_iteration(int m, double alpha, bool quick) {
    const auto grid = RadialGrid::geometric(config::grid_r_min, config::grid_r_max,
                                            quick ? config::quick_grid_points : config::grid_points);
    return iterate_chain(bliss_profile(m, alpha, 1.0), m, alpha, grid);
}

inline CriterionResult chain_structure(bool quick) {
    return detail::timed("C10", "chain structure: inverse residuals and decay", 0.0, [quick](CriterionResult& r) {
        const auto chain = bliss_iteration(2, 4.0, quick);
        double worst = 0.0;
        for (int k = 1; k <= 2; ++k) worst = std::max(worst, verify_inverse(chain, k, 1).sup_relative);
        worst = std::max(worst,
                         verify_inverse(chain, 2, 2, config::inverse_window_lo, config::inverse_window_hi).sup_relative);
        const auto decay = decay_report(chain);
        std::string slopes;
        for (const auto& e : decay.entries) slopes += (slopes.empty() ? "" : " ") + detail::sci(e.slope);
        r.pass = worst <= tol::inverse_residual && decay.bliss_ok() && decay.bounds_ok();
        r.detail = "max sup-relative residual " + detail::sci(worst) + "; slopes " + slopes +
                   (decay.bounds_ok() ? "; bounds hold" : "; bound violated");
    });
}

inline CriterionResult origin_behaviour(bool quick) {
    return detail::timed("C11", "behaviour at the origin", 0.0, [quick](CriterionResult& r) {
        double d1 = 0.0, d2 = 0.0, d3 = 0.0;
        bool ok = true;
        for (auto [m, a] : {std::pair{2, 4.0}, std::pair{1, 3.0}}) {
            const auto rep = origin_behavior(bliss_iteration(m, a, quick));
            ok = ok && rep.pass();
            for (const auto& e : rep.entries) {
                d1 = std::max(d1, e.d1_relative);
                d2 = std::max(d2, e.d2_relative);
                d3 = std::max(d3, e.d3_relative);
            }
        }
        r.pass = ok;
        r.detail = "|w'(0)|/w(0) " + detail::sci(d1) + ", w''(0) rel " + detail::sci(d2) + ", |w'''(0)|/|w''(0)| " +
                   detail::sci(d3);
    });
}

/// Compare the golden coefficient tables and best constants with fresh values.
inline CriterionResult golden_artifacts(const std::filesystem::path& dir) {
    return detail::timed("G", "golden artifacts", 0.0, [&dir](CriterionResult& r) {
        std::vector<std::string> bad;
        auto load = [&](const std::filesystem::path& p) -> std::optional<nlohmann::json> {
            std::ifstream in(p);
            if (!in) {
                bad.push_back(p.filename().string() + " (missing)");
                return std::nullopt;
            }
            try {
                return nlohmann::json::parse(in);
            } catch (const std::exception&) {
                bad.push_back(p.filename().string() + " (unreadable)");
                return std::nullopt;
            }
        };
        int files = 0;
        for (int m = 1; m <= 8; ++m) {
            const auto name = "coeff_table_m" + std::to_string(m) + ".json";
            ++files;
            const auto j = load(dir / name);
            if (!j) continue;
            nlohmann::json want = report::document();
            want.update(coeff_table_json(CoeffTable::build(m)));
            if (*j != want) bad.push_back(name);
        }
        ++files;
        if (const auto j = load(dir / "best_constants.json")) {
            try {
                for (const auto& e : j->at("entries")) {
                    const int m = e.at("m").get<int>();
                    const double a = std::stod(e.at("alpha").get<std::string>());
                    const auto bc = best_constant(m, a);
                    if (detail::rel(bc.S, std::stod(e.at("S").get<std::string>())) > tol::golden_constants ||
                        detail::rel(bc.S_inv_sqrt, std::stod(e.at("S_inv_sqrt").get<std::string>())) >
                            tol::golden_constants) {
                        bad.push_back("best_constants.json (m=" + std::to_string(m) + ", alpha=" +
                                      e.at("alpha").get<std::string>() + ")");
                        break;
                    }
                }
            } catch (const nlohmann::json::exception&) {
                bad.push_back("best_constants.json (malformed)");
            }
        }
        r.pass = bad.empty();
        r.detail = std::to_string(files) + " files in " + dir.string();
        if (!r.pass) {
            r.detail += "; mismatched:";
            for (const auto& b : bad) r.detail += " " + b;
        }
    });
}

inline Summary run(const Options& opts) {
    Summary s;
    s.results.push_back(polyharmonic_identity());
    s.results.push_back(coefficient_recursion());
    s.results.push_back(vanishing_top_row());
    s.results.push_back(best_constant_m1(opts.seed));
    s.results.push_back(quadrature_vs_gamma());
    s.results.push_back(attainment_and_dilation());
    s.results.push_back(minimality_probes());
    s.results.push_back(ode_classification());
    s.results.push_back(regularity_fixed_point(opts.quick));
    s.results.push_back(chain_structure(opts.quick));
    s.results.push_back(origin_behaviour(opts.quick));
    if (opts.golden_dir) s.results.push_back(golden_artifacts(*opts.golden_dir));
    return s;
}

}  // namespace polyrad::acceptance
