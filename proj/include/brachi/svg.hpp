#pragma once

// Fixed-layout SVG plots: 800 x 800 viewport, unit disk spanning 760 px.

#include "brachi/curve.hpp"
#include "brachi/field.hpp"
#include "brachi/geometry.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace brachi {

using Segment = std::pair<CartPoint, CartPoint>;

/// Marching squares on the polar value grid, one level. Cells wrap in theta; saddles are
/// split by the cell-centre average.
inline std::vector<Segment> contour_segments(const ValueGrid& v, double level) {
    std::vector<Segment> out;
    auto to_xy = [&](double fi, double fj) {
        const double r = v.epsilon + (1.0 - v.epsilon) * fi / (v.n_r - 1);
        return to_cartesian({r, -pi + v.dtheta() * fj});
    };
    for (int i = 0; i + 1 < v.n_r; ++i) {
        for (int j = 0; j < v.n_theta; ++j) {
            const int jn = (j + 1) % v.n_theta;
            // corners counter-clockwise in index space: (i,j) (i+1,j) (i+1,j+1) (i,j+1)
            const std::array<double, 4> val = {v.at(i, j), v.at(i + 1, j), v.at(i + 1, jn), v.at(i, jn)};
            const std::array<std::pair<double, double>, 4> pos = {
                std::pair{double(i), double(j)}, {double(i + 1), double(j)}, {double(i + 1), double(j + 1)}, {double(i), double(j + 1)}};
            int mask = 0;
            for (int k = 0; k < 4; ++k) mask |= (val[k] > level ? 1 : 0) << k;
            if (mask == 0 || mask == 15) continue;
            auto cut = [&](int e) {
                const int a = e, b = (e + 1) % 4;
                const double w = (level - val[a]) / (val[b] - val[a]);
                return to_xy(pos[a].first + w * (pos[b].first - pos[a].first), pos[a].second + w * (pos[b].second - pos[a].second));
            };
            std::vector<int> edges;
            for (int e = 0; e < 4; ++e) {
                const bool above_a = (mask >> e) & 1, above_b = (mask >> ((e + 1) % 4)) & 1;
                if (above_a != above_b) edges.push_back(e);
            }
            if (edges.size() == 2) {
                out.push_back({cut(edges[0]), cut(edges[1])});
            } else if (edges.size() == 4) {
                const double centre = 0.25 * (val[0] + val[1] + val[2] + val[3]);
                const bool corner0_above = mask & 1;
                if ((centre > level) == corner0_above) {
                    out.push_back({cut(0), cut(1)});
                    out.push_back({cut(2), cut(3)});
                } else {
                    out.push_back({cut(3), cut(0)});
                    out.push_back({cut(1), cut(2)});
                }
            }
        }
    }
    return out;
}

/// Levels strictly between the grid's min and max, evenly spaced.
inline std::vector<double> contour_levels(const ValueGrid& v, int count = 12) {
    double lo = v.values.front(), hi = v.values.front();
    for (double x : v.values) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    std::vector<double> out;
    for (int k = 1; k <= count; ++k) out.push_back(lo + (hi - lo) * k / (count + 1));
    return out;
}

class SvgPlot {
public:
    static constexpr double size = 800.0;
    static constexpr double radius_px = 380.0;

    SvgPlot() {
        body_ += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n";
    }

    void boundary(double eps) {
        circle(1.0, "black", 1.5, "none");
        if (eps > 0.0) circle(eps, "black", 1.5, "#dddddd");
        else dot({0.0, 0.0}, "black", 2.5);
    }

    void circle(double r, const std::string& stroke, double width, const std::string& fill) {
        body_ += "<circle cx=\"400.00\" cy=\"400.00\" r=\"" + px(r * radius_px) + "\" fill=\"" + fill + "\" stroke=\"" + stroke +
                 "\" stroke-width=\"" + px(width) + "\"/>\n";
    }

    void curve(const SampledCurve& c, const std::string& stroke, double width = 1.2) {
        std::string pts;
        for (const auto& smp : c.samples) {
            const auto [x, y] = map(smp.point);
            pts += px(x) + "," + px(y) + " ";
        }
        if (!pts.empty()) pts.pop_back();
        body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + px(width) + "\" points=\"" + pts + "\"/>\n";
    }

    void dot(CartPoint p, const std::string& fill, double r_px = 3.0) {
        const auto [x, y] = map(p);
        body_ += "<circle cx=\"" + px(x) + "\" cy=\"" + px(y) + "\" r=\"" + px(r_px) + "\" fill=\"" + fill + "\"/>\n";
    }

    void contours(const ValueGrid& v, int count = 12) {
        for (double level : contour_levels(v, count)) {
            std::string d;
            for (const auto& [a, b] : contour_segments(v, level)) {
                const auto [xa, ya] = map(a);
                const auto [xb, yb] = map(b);
                d += "M" + px(xa) + " " + px(ya) + "L" + px(xb) + " " + px(yb);
            }
            body_ += "<path fill=\"none\" stroke=\"#7a7a7a\" stroke-width=\"0.8\" d=\"" + d + "\"/>\n";
        }
    }

    std::string str() const {
        return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
               "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n" +
               body_ + "</svg>\n";
    }

private:
    static std::pair<double, double> map(CartPoint p) { return {size / 2 + radius_px * p.x, size / 2 - radius_px * p.y}; }

    static std::string px(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return buf;
    }

    std::string body_;
};

/// A fixed palette cycled by index.
inline std::string palette(std::size_t k) {
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
    return colours[k % 8];
}

} // namespace brachi
