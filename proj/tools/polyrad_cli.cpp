// polyrad: command-line front end for the verification suites.
// Exit status: 0 all checks pass, 1 a verification failed, 2 invalid arguments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "polyrad/polyrad.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using polyrad::report::number;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

struct Output {
    std::string path;
    void write(const std::string& text) const {
        if (path.empty() || path == "-") {
            std::cout << text;
            std::cout.flush();
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file " + path);
        out << text;
    }
    void write(const json& doc) const { write(doc.dump(2) + "\n"); }
};

json command_doc(const std::string& name) {
    json j = polyrad::report::document();
    j["command"] = name;
    return j;
}

int verify_polyharmonic(int max_m, const Output& out) {
    if (max_m < 1) throw polyrad::domain_error("--max-m must be >= 1");
    json doc = command_doc("verify-polyharmonic");
    doc["results"] = json::array();
    bool all = true;
    for (int m = 1; m <= max_m; ++m) {
        const bool identity = polyrad::verify_polyharmonic_identity(m);
        const auto expansion = polyrad::verify_expansion(m);
        const auto recursion = polyrad::verify_recursion(m);
        const bool pass = identity && expansion.pass() && recursion.pass();
        all = all && pass;
        json row = {{"m", m},
                    {"identity", identity},
                    {"expansion", expansion.pass()},
                    {"recursion", recursion.pass()},
                    {"identities_checked", recursion.identities_checked},
                    {"pass", pass}};
        if (!recursion.failures.empty()) row["failures"] = recursion.failures;
        doc["results"].push_back(row);
    }
    doc["pass"] = all;
    out.write(doc);
    return all ? exit_ok : exit_failed;
}

int coeff_table(int m, const Output& out) {
    json doc = polyrad::report::document();
    doc.update(polyrad::coeff_table_json(polyrad::CoeffTable::build(m)));
    out.write(doc);
    return exit_ok;
}

json constant_json(const polyrad::BestConstantResult& r) {
    return {{"m", r.m},
            {"alpha", number(r.alpha)},
            {"S", number(r.S)},
            {"S_inv_sqrt", number(r.S_inv_sqrt)},
            {"route", polyrad::to_string(r.route)},
            {"err_estimate", number(r.err_estimate)}};
}

int best_constant(int m, double alpha, bool cross_check, const Output& out) {
    constexpr double agreement = 1e-10;
    const auto closed = polyrad::best_constant(m, alpha);
    json doc = command_doc("best-constant");
    doc.update(constant_json(closed));
    doc["critical_exponent"] = number(polyrad::critical_exponent(m, alpha));
    doc["nodal_gap_threshold"] = number(polyrad::nodal_gap_threshold(m, alpha));
    bool pass = true;
    if (cross_check) {
        const auto quad = polyrad::best_constant_by_quadrature(m, alpha);
        const double diff = std::abs(quad.S - closed.S) / closed.S;
        pass = diff <= agreement;
        doc["cross_check"] = constant_json(quad);
        doc["cross_check"]["rel_diff"] = number(diff);
        doc["cross_check"]["tolerance"] = agreement;
        doc["cross_check"]["agree"] = pass;
    }
    out.write(doc);
    return pass ? exit_ok : exit_failed;
}

int rayleigh(int m, double alpha, const std::vector<double>& eps_list, std::optional<int> perturb, double delta,
             const std::string& format, const Output& out) {
    constexpr double attainment = 1e-6;
    polyrad::require_sobolev(m, alpha);
    for (double e : eps_list)
        if (!(e > 0.0)) throw polyrad::domain_error("--eps-list entries must be positive");
    const double S = polyrad::best_constant(m, alpha).S;
    const auto base = perturb ? polyrad::perturbed_profile(m, alpha, *perturb, delta) : polyrad::bliss_profile(m, alpha, 1.0);
    const auto q = polyrad::parallel_map(eps_list.size(), [&](std::size_t i) {
        return polyrad::rayleigh_quotient(polyrad::dilated(base, m, alpha, eps_list[i]), m, alpha);
    });
    bool pass = true;
    std::vector<double> rel(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        rel[i] = (q[i] - S) / S;
        pass = pass && (perturb ? q[i] >= S - attainment : std::abs(rel[i]) <= attainment);
    }
    if (format == "csv") {
        std::ostringstream os;
        os << "epsilon,quotient,S_closed_form,rel_diff\n";
        for (std::size_t i = 0; i < q.size(); ++i)
            os << polyrad::report::format_number(eps_list[i]) << ',' << polyrad::report::format_number(q[i]) << ','
               << polyrad::report::format_number(S) << ',' << polyrad::report::format_number(rel[i]) << '\n';
        out.write(os.str());
    } else {
        json doc = command_doc("rayleigh");
        doc["m"] = m;
        doc["alpha"] = number(alpha);
        doc["S_closed_form"] = number(S);
        if (perturb) {
            doc["perturbation"] = {{"index", *perturb},
                                   {"name", polyrad::perturbation_directions(m).at(*perturb).name},
                                   {"delta", number(delta)}};
        }
        doc["rows"] = json::array();
        for (std::size_t i = 0; i < q.size(); ++i)
            doc["rows"].push_back({{"epsilon", number(eps_list[i])}, {"quotient", number(q[i])}, {"rel_diff", number(rel[i])}});
        doc["pass"] = pass;
        out.write(doc);
    }
    return pass ? exit_ok : exit_failed;
}

int iterate(int m, double alpha, double eps, int points, double r_min, double r_max, const std::string& csv_dir,
            const Output& out) {
    constexpr double fixed_point_tol = 1e-3;
    constexpr double inverse_tol = 1e-4;
    polyrad::require_sobolev(m, alpha);
    if (!(eps > 0.0)) throw polyrad::domain_error("--eps must be positive");
    const auto grid = polyrad::RadialGrid::geometric(r_min, r_max, points);
    const auto w = polyrad::bliss_profile(m, alpha, eps);
    const auto chain = polyrad::iterate_chain(w, m, alpha, grid);

    json doc = command_doc("iterate");
    doc["m"] = m;
    doc["alpha"] = number(alpha);
    doc["eps"] = number(eps);
    doc["grid"] = {{"points", points}, {"r_min", number(r_min)}, {"r_max", number(r_max)}};
    doc["q"] = json::array();
    for (double q : chain.q) doc["q"].push_back(number(q));

    bool pass = true;
    double fp = 0.0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i)
        fp = std::max(fp, std::abs(chain.w[m].values[i] - w(grid[i])) / std::max(std::abs(w(grid[i])), 1e-12));
    pass = pass && fp <= fixed_point_tol;
    doc["fixed_point_residual"] = number(fp);

    const polyrad::BlissChain bliss(m, alpha, eps);
    doc["closed_form_deviation"] = json::array();
    for (double d : polyrad::chain_vs_closed_form(chain, bliss)) doc["closed_form_deviation"].push_back(number(d));

    doc["inverse"] = json::array();
    for (int k = 1; k <= m; ++k) {
        const auto r1 = polyrad::verify_inverse(chain, k, 1);
        doc["inverse"].push_back({{"k", k}, {"j", 1}, {"sup_relative", number(r1.sup_relative)}});
        pass = pass && r1.sup_relative <= inverse_tol;
    }
    if (m >= 2) {
        const auto rm = polyrad::verify_inverse(chain, m, m, polyrad::config::inverse_window_lo * eps,
                                                polyrad::config::inverse_window_hi * eps);
        doc["inverse"].push_back({{"k", m},
                                  {"j", m},
                                  {"sup_relative", number(rm.sup_relative)},
                                  {"window", {number(rm.r_lo), number(rm.r_hi)}}});
        pass = pass && rm.sup_relative <= inverse_tol;
    }

    bool monotone = true;
    for (const auto& wk : chain.w) monotone = monotone && polyrad::strictly_decreasing(wk);
    doc["monotone"] = monotone;
    pass = pass && monotone;

    if (r_max >= 50.0) {
        const auto d = polyrad::decay_report(chain);
        json rows = json::array();
        for (const auto& e : d.entries)
            rows.push_back({{"k", e.k},
                            {"slope", number(e.slope)},
                            {"expected", number(e.bliss_slope)},
                            {"bound_exponent", number(e.bound_exponent)},
                            {"bound_ok", e.bound_ok},
                            {"slope_ok", e.bliss_ok}});
        doc["decay"] = rows;
        pass = pass && d.bliss_ok() && d.bounds_ok();
    } else {
        doc["decay"] = "skipped (r_max < 50)";
    }

    if (r_min <= 1e-3) {
        const auto o = polyrad::origin_behavior(chain);
        json rows = json::array();
        for (const auto& e : o.entries)
            rows.push_back({{"k", e.k},
                            {"w0", number(e.fit.value)},
                            {"d1_relative", number(e.d1_relative)},
                            {"d2_relative", number(e.d2_relative)},
                            {"d3_relative", number(e.d3_relative)},
                            {"pass", e.d1_ok && e.d2_ok && e.d3_ok}});
        doc["origin"] = rows;
        pass = pass && o.pass();
    } else {
        doc["origin"] = "skipped (r_min > 1e-3)";
    }

    if (!csv_dir.empty()) {
        fs::create_directories(csv_dir);
        for (int k = 0; k <= m; ++k) {
            const fs::path p = fs::path(csv_dir) / ("w_" + std::to_string(k) + ".csv");
            std::ofstream f(p, std::ios::binary);
            if (!f) throw std::runtime_error("cannot write " + p.string());
            f << "r,w_" << k << '\n';
            for (std::size_t i = 0; i < grid.size(); ++i)
                f << polyrad::report::format_number(grid[i]) << ','
                  << polyrad::report::format_number(chain.w[k].values[i]) << '\n';
        }
        doc["csv_dir"] = csv_dir;
    }
    doc["pass"] = pass;
    out.write(doc);
    return pass ? exit_ok : exit_failed;
}

int classify(int m, double alpha, double eps, double r_max, int perturb_index, double perturb_scale,
             const Output& out) {
    const double tolerance = m <= 2 ? 1e-6 : 1e-5;
    polyrad::require_sobolev(m, alpha);
    if (!(eps > 0.0)) throw polyrad::domain_error("--eps must be positive");
    if (!(r_max > 0.0)) throw polyrad::domain_error("--r-max must be positive");
    json doc = command_doc("classify");
    doc["m"] = m;
    doc["alpha"] = number(alpha);
    doc["eps"] = number(eps);
    doc["r_max"] = number(r_max);
    if (perturb_scale == 0.0) {
        const auto rep = polyrad::classification_check(m, alpha, eps, r_max);
        const bool pass = rep.max_rel_dev <= tolerance;
        doc["max_rel_dev"] = number(rep.max_rel_dev);
        doc["steps"] = rep.diagnostics.steps;
        doc["tolerance"] = tolerance;
        doc["verdict"] = pass ? "matches w_eps" : "deviates from w_eps";
        out.write(doc);
        return pass ? exit_ok : exit_failed;
    }
    if (perturb_index < 0 || perturb_index >= m) throw polyrad::domain_error("--perturb-index must lie in [0, m)");
    const auto rep = polyrad::departure_probe(m, alpha, eps, r_max, perturb_index, perturb_scale);
    doc["perturbation"] = {{"index", perturb_index}, {"scale", number(perturb_scale)}};
    doc["max_rel_dev"] = number(rep.min_distance);
    doc["steps"] = rep.diagnostics.steps;
    if (rep.blew_up) {
        doc["blow_up_radius"] = number(rep.blow_up_radius);
        doc["verdict"] = "not global: leaves the family";
    } else {
        doc["best_eps"] = number(rep.best_eps);
        doc["verdict"] = rep.min_distance >= polyrad::config::departure_threshold ? "departs from every w_eps"
                                                                                  : "within threshold of w_eps";
    }
    out.write(doc);
    return exit_ok;
}

int verify_all(bool quick, const std::string& golden_dir, unsigned long long seed, const Output& out) {
    polyrad::acceptance::Options opts;
    opts.quick = quick;
    opts.seed = seed;
    if (!golden_dir.empty()) opts.golden_dir = golden_dir;
    const auto summary = polyrad::acceptance::run(opts);
    for (const auto& r : summary.results) std::cerr << polyrad::acceptance::line(r) << '\n';
    json doc = command_doc("verify-all");
    doc.update(polyrad::acceptance::to_json(summary));
    doc["quick"] = quick;
    doc["seed"] = seed;
    out.write(doc);
    return summary.pass() ? exit_ok : exit_failed;
}

std::string default_golden_dir() {
#ifdef POLYRAD_GOLDEN_DIR
    if (fs::is_directory(POLYRAD_GOLDEN_DIR)) return POLYRAD_GOLDEN_DIR;
#endif
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted radial polyharmonic verification toolkit"};
    app.require_subcommand(1);
    Output out;
    app.add_option("-o,--output", out.path, "Write the report to this file instead of stdout");

    int max_m = 8;
    auto* vp = app.add_subcommand("verify-polyharmonic", "Exact polyharmonic identity and coefficient expansion");
    vp->add_option("--max-m", max_m, "Largest order checked")->capture_default_str();

    int m = 1;
    double alpha = 3.0;
    auto* ct = app.add_subcommand("coeff-table", "Exact G table as JSON");
    ct->add_option("--m", m, "Order")->required()->check(CLI::PositiveNumber);

    bool cross = false;
    auto* bc = app.add_subcommand("best-constant", "Best Sobolev constant");
    bc->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    bc->add_option("--alpha", alpha)->required();
    bc->add_flag("--cross-check", cross, "Add the quadrature route and compare");

    std::vector<double> eps_list(polyrad::config::eps_list.begin(), polyrad::config::eps_list.end());
    std::optional<int> perturb;
    double delta = 0.1;
    std::string format = "csv";
    auto* ra = app.add_subcommand("rayleigh", "Rayleigh quotients of the extremal family");
    ra->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    ra->add_option("--alpha", alpha)->required();
    ra->add_option("--eps-list", eps_list, "Dilation parameters")->delimiter(',')->capture_default_str();
    ra->add_option("--perturb", perturb, "Perturbation direction index (0-9)")->check(CLI::Range(0, 9));
    ra->add_option("--delta", delta, "Perturbation amplitude")->capture_default_str();
    ra->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    double eps = 1.0;
    int points = polyrad::config::grid_points;
    double r_min = polyrad::config::grid_r_min, r_max = polyrad::config::grid_r_max;
    std::string csv_dir;
    auto* it = app.add_subcommand("iterate", "Regularity chain of the extremal profile");
    it->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    it->add_option("--alpha", alpha)->required();
    it->add_option("--eps", eps)->capture_default_str();
    it->add_option("--grid-points", points)->capture_default_str()->check(CLI::Range(16, 1 << 22));
    it->add_option("--r-min", r_min)->capture_default_str();
    it->add_option("--r-max", r_max)->capture_default_str();
    it->add_option("--csv-dir", csv_dir, "Directory for per-k CSV files");

    double ode_r_max = polyrad::config::ivp_r_max;
    int perturb_index = polyrad::config::departure_index;
    double perturb_scale = 0.0;
    auto* cl = app.add_subcommand("classify", "Integrate the initial value problem and compare with w_eps");
    cl->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    cl->add_option("--alpha", alpha)->required();
    cl->add_option("--eps", eps)->capture_default_str();
    cl->add_option("--r-max", ode_r_max)->capture_default_str();
    cl->add_option("--perturb-index", perturb_index)->capture_default_str();
    cl->add_option("--perturb-scale", perturb_scale, "Relative change of u_index(0); 0 disables")->capture_default_str();

    bool quick = false;
    std::string golden_dir = default_golden_dir();
    unsigned long long seed = polyrad::config::default_seed;
    auto* va = app.add_subcommand("verify-all", "Run the acceptance suite");
    va->add_flag("--quick", quick, "Cap grids at 1024 nodes");
    va->add_option("--golden-dir", golden_dir, "Directory of golden artifacts")->capture_default_str();
    va->add_option("--seed", seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*vp) return verify_polyharmonic(max_m, out);
        if (*ct) return coeff_table(m, out);
        if (*bc) return best_constant(m, alpha, cross, out);
        if (*ra) return rayleigh(m, alpha, eps_list, perturb, delta, format, out);
        if (*it) return iterate(m, alpha, eps, points, r_min, r_max, csv_dir, out);
        if (*cl) return classify(m, alpha, eps, ode_r_max, perturb_index, perturb_scale, out);
        if (*va) return verify_all(quick, golden_dir, seed, out);
    } catch (const polyrad::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return exit_failed;
    }
    return exit_usage;
}
