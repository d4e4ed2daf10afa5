#pragma once

// CSV and JSON serialization. Numbers are written with 12 significant digits so that
// repeated runs produce byte-identical files.

#include "brachi/curve.hpp"
#include "brachi/error.hpp"
#include "brachi/field.hpp"
#include "brachi/geometry.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace brachi {

inline std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline constexpr const char* curve_csv_header = "s,x,y,r,theta,t_cum";

inline void write_curve_csv(std::ostream& os, const SampledCurve& c) {
    os << curve_csv_header << '\n';
    for (const auto& smp : c.samples) {
        const auto p = to_polar(smp.point);
        os << fmt12(smp.s) << ',' << fmt12(smp.point.x) << ',' << fmt12(smp.point.y) << ',' << fmt12(p.r) << ','
           << fmt12(p.theta) << ',' << fmt12(smp.t_cum) << '\n';
    }
}

/// Parses the CSV written by write_curve_csv; r and theta columns are ignored.
inline SampledCurve read_curve_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind(curve_csv_header, 0) != 0) fail(ErrorCode::InvalidArgument, "missing curve CSV header");
    SampledCurve c;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                cols.push_back(std::stod(cell));
            } catch (const std::exception&) {
                fail(ErrorCode::InvalidArgument, "bad number in curve CSV: " + cell);
            }
        }
        if (cols.size() != 6) fail(ErrorCode::InvalidArgument, "curve CSV rows need 6 columns");
        c.samples.push_back({cols[0], {cols[1], cols[2]}, cols[5]});
    }
    if (c.empty()) fail(ErrorCode::EmptyCurve, "curve CSV has no samples");
    return c;
}

inline nlohmann::json curve_json(const SampledCurve& c, nlohmann::json params = nlohmann::json::object()) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& smp : c.samples) samples.push_back({{"s", smp.s}, {"x", smp.point.x}, {"y", smp.point.y}, {"t_cum", smp.t_cum}});
    return {{"params", std::move(params)}, {"samples", std::move(samples)}};
}

inline void write_value_csv(std::ostream& os, const ValueGrid& v) {
    os << "r,theta,V,family\n";
    for (int i = 0; i < v.n_r; ++i) {
        for (int j = 0; j < v.n_theta; ++j) {
            os << fmt12(v.radius(i)) << ',' << fmt12(v.angle(j)) << ',' << fmt12(v.at(i, j)) << ','
               << to_string(v.family[v.index(i, j)]) << '\n';
        }
    }
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::InvalidArgument, "cannot write " + path);
    f << text;
}

inline std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::InvalidArgument, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace brachi
