#pragma once

// Figure presets: each writes CSV curves, SVG plots and an index.json into a directory.

#include "brachi/annulus.hpp"
#include "brachi/field.hpp"
#include "brachi/io.hpp"
#include "brachi/strong.hpp"
#include "brachi/svg.hpp"
#include "brachi/weak.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace brachi {

inline const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names = {"fig2", "fig3", "fig4", "fig5", "fig6"};
    return names;
}

struct ReproResult {
    std::string figure;
    std::vector<std::string> files;  // relative to the output directory, in write order
    nlohmann::json index;
};

namespace detail {

class FigureWriter {
public:
    FigureWriter(std::filesystem::path dir, std::string figure) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
        res_.figure = std::move(figure);
    }

    void text(const std::string& name, const std::string& body) {
        write_text((dir_ / name).string(), body);
        res_.files.push_back(name);
    }

    void curve(const std::string& name, const SampledCurve& c) {
        std::ostringstream os;
        write_curve_csv(os, c);
        text(name, os.str());
    }

    void value(const std::string& name, const ValueGrid& v) {
        std::ostringstream os;
        write_value_csv(os, v);
        text(name, os.str());
    }

    ReproResult finish(nlohmann::json index) {
        res_.index = std::move(index);
        text("index.json", res_.index.dump(2) + "\n");
        return res_;
    }

private:
    std::filesystem::path dir_;
    ReproResult res_;
};

inline std::string numbered(const std::string& stem, std::size_t k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%02zu.csv", stem.c_str(), k);
    return buf;
}

inline std::string eps_tag(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "eps%03d", static_cast<int>(std::lround(eps * 100)));
    return buf;
}

// Sixteen strong curves, terminal angles at the midpoints of 16 equal cells of [-2pi/3, 2pi/3]
// (the ends themselves are the degenerate D -> 0 limit).
inline ReproResult fig2(const std::filesystem::path& dir, const Tolerances& tol) {
    FigureWriter w(dir, "fig2");
    SvgPlot plot;
    plot.boundary(0.0);
    nlohmann::json curves = nlohmann::json::array();
    for (std::size_t k = 0; k < 16; ++k) {
        const double th = -two_thirds_pi + 2.0 * two_thirds_pi * (static_cast<double>(k) + 0.5) / 16.0;
        const auto sol = shoot(th, tol);
        const auto c = sample_strong(sol, 401, tol);
        const std::string name = numbered("curve", k);
        w.curve(name, c);
        plot.curve(c, palette(k));
        plot.dot(to_cartesian({sol.r_c, th / 2.0}), "black");
        curves.push_back({{"file", name}, {"theta_f", th}, {"D", sol.D}, {"r_c", sol.r_c}, {"tof", tof_strong(sol, tol).value}});
    }
    w.text("fig2.svg", plot.str());
    return w.finish({{"figure", "fig2"}, {"curves", curves}});
}

// (a) weak curves with terminal angles across (-pi, pi]; (b) the optimal foliation of the
// disk over the contours of V.
inline ReproResult fig3(const std::filesystem::path& dir, const Tolerances& tol) {
    FigureWriter w(dir, "fig3");
    SvgPlot a;
    a.boundary(0.0);
    nlohmann::json weak = nlohmann::json::array();
    for (std::size_t k = 0; k < 16; ++k) {
        const double th = -pi + 2.0 * pi * (static_cast<double>(k) + 1.0) / 16.0;
        const auto c = sample_weak({th, 1.0}, 201);
        const std::string name = numbered("weak", k);
        w.curve(name, c);
        a.curve(c, palette(k));
        weak.push_back({{"file", name}, {"theta_f", th}, {"tof", tof_weak({th, 1.0}).value}});
    }
    w.text("fig3a.svg", a.str());

    const auto v = value_grid(0.0, 200, 400, 256, tol);
    w.value("value.csv", v);
    SvgPlot b;
    b.contours(v);
    b.boundary(0.0);
    nlohmann::json leaves = nlohmann::json::array();
    std::size_t k = 0;
    for (const auto& leaf : foliation_leaves(0.0, 32, 401, tol)) {
        const std::string name = numbered("leaf", k);
        w.curve(name, leaf.curve);
        b.curve(leaf.curve, leaf.family == Family::Weak ? "#d62728" : "#1f77b4");
        leaves.push_back({{"file", name}, {"family", std::string(to_string(leaf.family))}, {"tof", leaf.curve.total_time()}});
        ++k;
    }
    w.text("fig3b.svg", b.str());
    return w.finish({{"figure", "fig3"}, {"weak", weak}, {"leaves", leaves}, {"value_grid", {{"n_r", 200}, {"n_theta", 400}, {"curves", 256}}}});
}

// eps = 0.5 family members at D = 0.0204 (rides the obstacle), 0.2300 (misses it) and 0.1250
// (tangent).
inline ReproResult fig4(const std::filesystem::path& dir, const Tolerances& tol) {
    FigureWriter w(dir, "fig4");
    const double eps = 0.5;
    struct Panel {
        const char* tag;
        double D;
        double theta_f;
    };
    const Panel panels[] = {{"a", 0.0204, two_thirds_pi}, {"b", 0.2300, pi / 3.0}, {"c", 0.1250, two_thirds_pi}};
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : panels) {
        SampledCurve c;
        if (critical_radius(p.D) > eps) c = sample_strong(make_strong(p.D, 1, tol), 601, tol);
        else c = obstacle_family_member(eps, p.D, p.theta_f, default_piece_segments, tol);
        const std::string name = std::string("member_") + p.tag + ".csv";
        w.curve(name, c);
        SvgPlot plot;
        plot.boundary(eps);
        plot.curve(c, "#1f77b4", 2.0);
        w.text(std::string("fig4") + p.tag + ".svg", plot.str());
        out.push_back({{"file", name}, {"D", p.D}, {"theta_f", to_polar(c.back().point).theta}, {"r_c", critical_radius(p.D)},
                       {"tof", c.total_time()}});
    }
    return w.finish({{"figure", "fig4"}, {"epsilon", eps}, {"members", out}});
}

// eps = 0.5: leaves ending on R2 (rim), R3 (theta = pi) and R4 (obstacle).
inline ReproResult fig5(const std::filesystem::path& dir, const Tolerances& tol) {
    FigureWriter w(dir, "fig5");
    const double eps = 0.5;
    SvgPlot a, b;
    a.boundary(eps);
    b.boundary(eps);
    nlohmann::json out = nlohmann::json::array();
    std::size_t k = 0;
    for (const auto& sol : foliate_annulus(eps, 16, default_piece_segments, tol)) {
        const bool rim = std::abs(sol.terminal.r - 1.0) < 1e-12 && std::abs(sol.terminal.theta) < pi;
        const bool obstacle = std::abs(sol.terminal.r - eps) < 1e-12 && std::abs(sol.terminal.theta) < pi;
        const char* region = rim ? "R2" : (obstacle ? "R4" : "R3");
        const std::string name = numbered("leaf", k++);
        w.curve(name, sol.curve);
        (rim ? a : b).curve(sol.curve, rim ? "#1f77b4" : (obstacle ? "#2ca02c" : "#d62728"));
        out.push_back({{"file", name}, {"region", region}, {"regime", std::string(to_string(sol.regime))}, {"terminal_r", sol.terminal.r},
                       {"terminal_theta", sol.terminal.theta}, {"tof", sol.time().value}});
    }
    w.text("fig5a.svg", a.str());
    w.text("fig5b.svg", b.str());
    return w.finish({{"figure", "fig5"}, {"epsilon", eps}, {"leaves", out}});
}

// Foliations and value contours on four annuli.
inline ReproResult fig6(const std::filesystem::path& dir, const Tolerances& tol) {
    FigureWriter w(dir, "fig6");
    nlohmann::json panels = nlohmann::json::array();
    for (double eps : {0.75, 0.5, 0.25, 0.1}) {
        const std::string tag = eps_tag(eps);
        const auto v = value_grid(eps, 200, 400, 256, tol);
        w.value(tag + "_value.csv", v);
        SvgPlot plot;
        plot.contours(v);
        plot.boundary(eps);
        std::size_t k = 0;
        for (const auto& leaf : foliation_leaves(eps, 48, 401, tol)) {
            w.curve(numbered(tag + "_leaf", k++), leaf.curve);
            plot.curve(leaf.curve, leaf.family == Family::Constrained ? "#d62728" : "#1f77b4");
        }
        w.text("fig6_" + tag + ".svg", plot.str());
        panels.push_back({{"epsilon", eps}, {"leaves", k}, {"value_csv", tag + "_value.csv"}});
    }
    return w.finish({{"figure", "fig6"}, {"panels", panels}, {"value_grid", {{"n_r", 200}, {"n_theta", 400}, {"curves", 256}}}});
}

} // namespace detail

/// Writes one figure's artifacts into dir.
inline ReproResult repro_figure(const std::string& figure, const std::filesystem::path& dir, const Tolerances& tol = {}) {
    if (figure == "fig2") return detail::fig2(dir, tol);
    if (figure == "fig3") return detail::fig3(dir, tol);
    if (figure == "fig4") return detail::fig4(dir, tol);
    if (figure == "fig5") return detail::fig5(dir, tol);
    if (figure == "fig6") return detail::fig6(dir, tol);
    fail(ErrorCode::InvalidArgument, "unknown figure " + figure + " (expected fig2..fig6)");
}

} // namespace brachi
