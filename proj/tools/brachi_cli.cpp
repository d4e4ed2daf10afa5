#include "brachi/brachi.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;
namespace fs = std::filesystem;
using namespace brachi;

namespace {

// Exit codes.
constexpr int ok = 0;
constexpr int usage_error = 1;
constexpr int validation_failure = 2;

struct Global {
    std::string out = "out";
    std::vector<std::string> tol_overrides;
    bool degrees = false;
    Tolerances tol;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Tolerances parse_tolerances(const std::vector<std::string>& overrides) {
    Tolerances tol;
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--tol expects name=value, got " + kv);
        const std::string name = kv.substr(0, eq);
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(kv.substr(eq + 1), &used);
            if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
        } catch (const std::exception&) {
            throw UsageError("bad --tol value in " + kv);
        }
        if (!(value > 0.0)) throw UsageError("--tol values must be positive");
        if (name == "quadrature") tol.quadrature = value;
        else if (name == "shooting") tol.shooting = value;
        else throw UsageError("unknown tolerance " + name + " (known: quadrature, shooting)");
    }
    return tol;
}

json tolerances_json(const Tolerances& tol) { return {{"quadrature", tol.quadrature}, {"shooting", tol.shooting}}; }

double angle_in(const Global& g, double a) { return g.degrees ? a * pi / 180.0 : a; }

void write_file(const Global& g, const std::string& name, const std::string& body) {
    fs::create_directories(g.out);
    write_text((fs::path(g.out) / name).string(), body);
}

std::string csv(const SampledCurve& c) {
    std::ostringstream os;
    write_curve_csv(os, c);
    return os.str();
}

int emit(const Global& g, const std::string& command, json params, json results, int code = ok) {
    const json doc = {{"command", command},
                      {"params", std::move(params)},
                      {"results", std::move(results)},
                      {"tolerances", tolerances_json(g.tol)},
                      {"version", version}};
    const std::string text = doc.dump(2) + "\n";
    write_file(g, command + ".json", text);
    std::cout << text;
    return code;
}

// Time of the analytic minimizer to (r, theta), when one is available.
std::optional<double> analytic_time(double eps, PolarPoint target, const Tolerances& tol) {
    if (eps > 0.0) return solve_constrained(eps, target, default_piece_segments, tol).time().value;
    const double th = std::abs(normalize_angle(target.theta));
    if (th >= two_thirds_pi) return tof_weak({th, target.r}).value;
    if (std::abs(target.r - 1.0) < 1e-12) return tof_strong(shoot(th, tol), tol).value;
    return std::nullopt;
}

// ---- subcommands ----

struct SolveOpts {
    double theta_f = 0.0;
    double epsilon = 0.0;
    double terminal_r = 1.0;
    std::size_t samples = 801;
};

int run_solve(const Global& g, const SolveOpts& o) {
    const double th = angle_in(g, o.theta_f);
    json params = {{"theta_f", th}, {"epsilon", o.epsilon}, {"terminal_r", o.terminal_r}, {"samples", o.samples}};
    json res;
    SampledCurve c;
    if (o.epsilon == 0.0) {
        if (std::abs(th) >= two_thirds_pi) {
            const WeakSolution w{th, o.terminal_r};
            c = sample_weak(w, o.samples % 2 ? o.samples : o.samples + 1);
            res = {{"family", "weak"}, {"D", nullptr}, {"r_c", 0.0}, {"tof", tof_weak(w).value}, {"regime", "weak"}};
        } else {
            if (std::abs(o.terminal_r - 1.0) > 1e-12) throw UsageError("on the disk, strong targets must lie on the rim (--terminal-r 1)");
            const auto sol = shoot(th, g.tol);
            c = sample_strong(sol, o.samples, g.tol);
            res = {{"family", "strong"}, {"D", sol.D}, {"r_c", sol.r_c}, {"tof", tof_strong(sol, g.tol).value}, {"regime", "strong"}};
        }
    } else {
        const auto sol = solve_constrained(o.epsilon, {o.terminal_r, th}, std::max<std::size_t>(20, o.samples / 4), g.tol);
        c = sol.curve;
        const auto& s = sol.entry ? sol.entry : sol.exit;
        res = {{"family", std::string(to_string(detail::family_of(sol.regime)))},
               {"D", s ? json(s->D) : json(nullptr)},
               {"r_c", s ? json(s->r_c) : json(nullptr)},
               {"tof", sol.time().value},
               {"regime", std::string(to_string(sol.regime))}};
        if (sol.arc_span) res["arc"] = json{{"start", sol.arc_span->start}, {"end", sol.arc_span->end}};
    }
    res["curve_csv"] = "curve.csv";
    write_file(g, "curve.csv", csv(c));
    return emit(g, "solve", params, res);
}

struct FoliateOpts {
    double epsilon = 0.0;
    std::size_t count = 16;
};

int run_foliate(const Global& g, const FoliateOpts& o) {
    json params = {{"epsilon", o.epsilon}, {"count", o.count}};
    json index = json::array();
    SvgPlot plot;
    plot.boundary(o.epsilon);
    auto name = [](std::size_t k) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "curve_%03zu.csv", k);
        return std::string(buf);
    };
    if (o.epsilon == 0.0) {
        const auto angles = detail::leaf_angles(o.count);
        for (std::size_t k = 0; k < angles.size(); ++k) {
            const double th = angles[k];
            const auto c = disk_optimal_curve(th, 401, g.tol);
            json row = {{"file", name(k)}, {"theta_f", th}, {"tof", c.total_time()}};
            if (std::abs(th) < two_thirds_pi) {
                const auto sol = shoot(th, g.tol);
                row["D"] = sol.D;
                row["r_c"] = sol.r_c;
                row["tof"] = tof_strong(sol, g.tol).value;
                row["family"] = "strong";
            } else {
                row["D"] = nullptr;
                row["r_c"] = 0.0;
                row["tof"] = tof_weak({th, 1.0}).value;
                row["family"] = "weak";
            }
            write_file(g, name(k), csv(c));
            plot.curve(c, palette(k));
            index.push_back(row);
        }
    } else {
        std::size_t k = 0;
        for (const auto& sol : foliate_annulus(o.epsilon, o.count, default_piece_segments, g.tol)) {
            const auto& s = sol.entry ? sol.entry : sol.exit;
            index.push_back({{"file", name(k)},
                             {"theta_f", sol.terminal.theta},
                             {"terminal_r", sol.terminal.r},
                             {"D", s ? json(s->D) : json(nullptr)},
                             {"r_c", s ? json(s->r_c) : json(nullptr)},
                             {"tof", sol.time().value},
                             {"family", std::string(to_string(detail::family_of(sol.regime)))},
                             {"regime", std::string(to_string(sol.regime))}});
            write_file(g, name(k), csv(sol.curve));
            plot.curve(sol.curve, palette(k));
            ++k;
        }
    }
    write_file(g, "foliate.svg", plot.str());
    return emit(g, "foliate", params, {{"curves", index}, {"svg", "foliate.svg"}});
}

struct GridOpts {
    double epsilon = 0.0;
    int n_r = 200;
    int n_theta = 400;
    std::size_t curves = 256;
};

json field_report(const ValueGrid& v, const Tolerances& tol) {
    const auto eik = eikonal_residual(v);
    std::vector<SampledCurve> leaves;
    for (auto& leaf : foliation_leaves(v.epsilon, 48, 401, tol)) leaves.push_back(std::move(leaf.curve));
    const auto orth = orthogonality_check(v, leaves);
    return {{"eikonal_max_residual", eik.max_residual},
            {"eikonal_nodes", eik.nodes},
            {"orthogonality_max_deg", orth.max_deviation_deg},
            {"orthogonality_points", orth.points}};
}

int run_value(const Global& g, const GridOpts& o) {
    json params = {{"epsilon", o.epsilon}, {"nr", o.n_r}, {"ntheta", o.n_theta}, {"curves", o.curves}};
    const auto v = value_grid(o.epsilon, o.n_r, o.n_theta, o.curves, g.tol);
    std::ostringstream os;
    write_value_csv(os, v);
    write_file(g, "value.csv", os.str());
    SvgPlot plot;
    plot.contours(v);
    plot.boundary(o.epsilon);
    write_file(g, "value.svg", plot.str());
    json res = field_report(v, g.tol);
    res["csv"] = "value.csv";
    res["svg"] = "value.svg";
    return emit(g, "value", params, res);
}

struct OracleOpts {
    double epsilon = 0.0;
    double target_r = 1.0;
    double target_theta = 0.0;
    int n_r = 200;
    int n_theta = 400;
    std::string stencil = "reach";
};

int run_oracle(const Global& g, const OracleOpts& o) {
    const PolarPoint target{o.target_r, angle_in(g, o.target_theta)};
    json params = {{"epsilon", o.epsilon}, {"target_r", target.r}, {"target_theta", target.theta},
                   {"nr", o.n_r},          {"ntheta", o.n_theta},  {"stencil", o.stencil}};
    const Stencil st = o.stencil == "sixteen" ? Stencil::Sixteen : Stencil::PhysicalReach;
    const auto grid = make_grid(o.epsilon, o.n_r, o.n_theta, st);
    const double t = oracle_min_time(grid, target).value;
    const auto a = analytic_time(o.epsilon, target, g.tol);
    json res = {{"time", t},
                {"analytic", a ? json(*a) : json(nullptr)},
                {"gap_vs_analytic", a ? json((t - *a) / *a) : json(nullptr)},
                {"resolution", {{"nr", o.n_r}, {"ntheta", o.n_theta}, {"nodes", grid.node_count()}}}};
    return emit(g, "oracle", params, res);
}

struct ConvergeOpts {
    double theta_f = 3.0 * pi / 4.0;
    std::vector<double> eps = {0.4, 0.2, 0.1, 0.05};
};

int run_converge(const Global& g, const ConvergeOpts& o) {
    const double th = angle_in(g, o.theta_f);
    const auto rows = convergence_study(th, o.eps, default_piece_segments, g.tol);
    json table = json::array();
    std::string body = "epsilon,distance,theta_c\n";
    bool decreasing = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        table.push_back({{"epsilon", rows[k].epsilon}, {"distance", rows[k].distance}, {"theta_c", rows[k].theta_c}});
        body += fmt12(rows[k].epsilon) + "," + fmt12(rows[k].distance) + "," + fmt12(rows[k].theta_c) + "\n";
        if (k > 0 && !(rows[k].distance < rows[k - 1].distance)) decreasing = false;
    }
    write_file(g, "converge.csv", body);
    return emit(g, "converge", {{"theta_f", th}, {"eps", o.eps}}, {{"rows", table}, {"strictly_decreasing", decreasing}});
}

struct CheckOpts {
    bool stationarity = false;
    bool eikonal = false;
    bool oracle = false;
    double epsilon = 0.5;
    double theta_f = two_thirds_pi;
    int trials = 50;
    std::uint64_t seed = 1;
    int n_r = 400;
    int n_theta = 800;
    std::size_t curves = 512;
};

int run_check(const Global& g, CheckOpts o) {
    if (!o.stationarity && !o.eikonal && !o.oracle) o.stationarity = true;
    const double th = angle_in(g, o.theta_f);
    json params = {{"stationarity", o.stationarity}, {"eikonal", o.eikonal}, {"oracle", o.oracle}, {"epsilon", o.epsilon},
                   {"theta_f", th}, {"trials", o.trials}, {"seed", o.seed}, {"nr", o.n_r}, {"ntheta", o.n_theta}, {"curves", o.curves}};
    json res = json::object();
    bool pass = true;
    if (o.stationarity) {
        const SampledCurve c = o.epsilon > 0.0 ? solve_constrained(o.epsilon, {1.0, th}, default_piece_segments, g.tol).curve
                                               : disk_optimal_curve(th, 801, g.tol);
        const auto rep = stationarity_check(c, o.epsilon, o.trials, o.seed);
        const bool p = rep.worst_radial >= -1e-4 && rep.worst_angular <= 1e-4;
        res["stationarity"] = {{"worst_radial", rep.worst_radial}, {"worst_angular", rep.worst_angular}, {"trials", rep.trials},
                               {"threshold", 1e-4}, {"pass", p}};
        pass = pass && p;
    }
    if (o.eikonal) {
        json rep = field_report(value_grid(o.epsilon, o.n_r, o.n_theta, o.curves, g.tol), g.tol);
        const bool p = rep["eikonal_max_residual"].get<double>() < 0.05 && rep["orthogonality_max_deg"].get<double>() < 5.0;
        rep["pass"] = p;
        res["eikonal"] = rep;
        pass = pass && p;
    }
    if (o.oracle) {
        const PolarPoint target{1.0, th};
        const double t = oracle_min_time(make_grid(o.epsilon, o.n_r, o.n_theta), target).value;
        const double a = *analytic_time(o.epsilon, target, g.tol);
        const bool p = a <= t + 1e-9 && t <= 1.02 * a;
        res["oracle"] = {{"time", t}, {"analytic", a}, {"gap_vs_analytic", (t - a) / a}, {"pass", p}};
        pass = pass && p;
    }
    res["pass"] = pass;
    return emit(g, "check", params, res, pass ? ok : validation_failure);
}

int run_repro(const Global& g, const std::vector<std::string>& figures) {
    std::vector<std::string> names = figures;
    if (names.size() == 1 && names[0] == "all") names = figure_names();
    json out = json::array();
    for (const auto& f : names) {
        if (std::find(figure_names().begin(), figure_names().end(), f) == figure_names().end())
            throw UsageError("unknown figure " + f + " (expected fig2..fig6 or all)");
    }
    for (const auto& f : names) {
        const auto r = repro_figure(f, fs::path(g.out) / f, g.tol);
        out.push_back({{"figure", f}, {"dir", f}, {"files", r.files}});
    }
    return emit(g, "repro", {{"figures", names}}, {{"figures", out}});
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw UsageError("bad number in list: " + cell);
        }
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-optimal descent curves in an inverse-square field on the disk and annulus"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);
    app.fallthrough();

    Global g;
    app.add_option("--out", g.out, "output directory")->capture_default_str();
    app.add_option("--tol", g.tol_overrides, "tolerance override name=value (quadrature, shooting)");
    app.add_flag("--degrees", g.degrees, "angles on the command line are in degrees");

    SolveOpts solve;
    auto* s = app.add_subcommand("solve", "minimizer to one terminal point");
    s->add_option("--theta-f", solve.theta_f, "terminal angle")->required();
    s->add_option("--epsilon", solve.epsilon, "obstacle radius, 0 for the full disk")->check(CLI::Range(0.0, 0.999999));
    s->add_option("--terminal-r", solve.terminal_r, "terminal radius")->check(CLI::Range(0.0, 1.0));
    s->add_option("--samples", solve.samples, "curve samples")->check(CLI::Range(3, 1000000));

    FoliateOpts fol;
    auto* f = app.add_subcommand("foliate", "family of minimizers");
    f->add_option("--epsilon", fol.epsilon)->check(CLI::Range(0.0, 0.999999));
    f->add_option("--count", fol.count, "curves (per region on the annulus)")->check(CLI::Range(1, 4096));

    GridOpts val;
    auto* v = app.add_subcommand("value", "value function on a polar grid");
    v->add_option("--epsilon", val.epsilon)->check(CLI::Range(0.0, 0.999999));
    v->add_option("--nr", val.n_r)->capture_default_str();
    v->add_option("--ntheta", val.n_theta)->capture_default_str();
    v->add_option("--curves", val.curves)->capture_default_str();

    OracleOpts orc;
    auto* o = app.add_subcommand("oracle", "discrete shortest-time bound");
    o->add_option("--epsilon", orc.epsilon)->check(CLI::Range(0.0, 0.999999));
    o->add_option("--target-r", orc.target_r)->check(CLI::Range(0.0, 1.0));
    o->add_option("--target-theta", orc.target_theta)->required();
    o->add_option("--nr", orc.n_r)->capture_default_str();
    o->add_option("--ntheta", orc.n_theta)->capture_default_str();
    o->add_option("--stencil", orc.stencil)->check(CLI::IsMember({"reach", "sixteen"}))->capture_default_str();

    ConvergeOpts conv;
    std::string eps_list;
    auto* c = app.add_subcommand("converge", "annulus minimizers approaching the disk minimizer");
    c->add_option("--theta-f", conv.theta_f)->capture_default_str();
    c->add_option("--eps", eps_list, "comma-separated obstacle radii");

    CheckOpts chk;
    auto* k = app.add_subcommand("check", "validation checks; exit 2 on breach");
    k->add_flag("--stationarity", chk.stationarity, "random first variations of the minimizer");
    k->add_flag("--eikonal", chk.eikonal, "eikonal residual and orthogonality of the value grid");
    k->add_flag("--oracle", chk.oracle, "oracle bracketing of the analytic time");
    k->add_option("--epsilon", chk.epsilon)->check(CLI::Range(0.0, 0.999999))->capture_default_str();
    k->add_option("--theta-f", chk.theta_f)->capture_default_str();
    k->add_option("--trials", chk.trials)->check(CLI::Range(1, 100000));
    k->add_option("--seed", chk.seed);
    k->add_option("--nr", chk.n_r);
    k->add_option("--ntheta", chk.n_theta);
    k->add_option("--curves", chk.curves);

    std::vector<std::string> figures;
    auto* r = app.add_subcommand("repro", "figure data and SVG");
    r->add_option("figures", figures, "fig2 .. fig6, or all")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : usage_error;
    }

    try {
        g.tol = parse_tolerances(g.tol_overrides);
        if (s->parsed()) return run_solve(g, solve);
        if (f->parsed()) return run_foliate(g, fol);
        if (v->parsed()) return run_value(g, val);
        if (o->parsed()) return run_oracle(g, orc);
        if (c->parsed()) {
            if (!eps_list.empty()) conv.eps = parse_list(eps_list);
            return run_converge(g, conv);
        }
        if (k->parsed()) return run_check(g, chk);
        if (r->parsed()) return run_repro(g, figures);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
        return usage_error;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        const bool breach = e.code() == ErrorCode::InsufficientCoverage || e.code() == ErrorCode::GridTooCoarse;
        return breach ? validation_failure : usage_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage_error;
    }
    return usage_error;
}
