#include "brachi/brachi.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace brachi;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("brachi_io_" + name);
    std::filesystem::remove_all(p);
    return p;
}

} // namespace

TEST(CurveCsv, RoundTrip) {
    const auto c = sample_strong(shoot(1.0), 101);
    std::stringstream ss;
    write_curve_csv(ss, c);
    const auto back = read_curve_csv(ss);
    ASSERT_EQ(back.size(), c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        EXPECT_NEAR(back[k].point.x, c[k].point.x, 1e-11);
        EXPECT_NEAR(back[k].point.y, c[k].point.y, 1e-11);
        EXPECT_NEAR(back[k].t_cum, c[k].t_cum, 1e-11);
    }
}

TEST(CurveCsv, RejectsGarbage) {
    std::stringstream none("x,y\n1,2\n");
    EXPECT_THROW(read_curve_csv(none), Error);
    std::stringstream empty(std::string(curve_csv_header) + "\n");
    try {
        read_curve_csv(empty);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyCurve);
    }
    std::stringstream bad(std::string(curve_csv_header) + "\n0,1,2,3\n");
    EXPECT_THROW(read_curve_csv(bad), Error);
}

TEST(CurveJson, Shape) {
    const auto c = sample_weak({2.5, 1.0}, 21);
    const auto j = curve_json(c, {{"theta_f", 2.5}});
    EXPECT_EQ(j["samples"].size(), c.size());
    EXPECT_DOUBLE_EQ(j["params"]["theta_f"].get<double>(), 2.5);
    EXPECT_DOUBLE_EQ(j["samples"].back()["t_cum"].get<double>(), c.total_time());
}

TEST(Contours, SegmentsLieOnTheLevel) {
    const auto v = value_grid(0.0, 50, 100, 64);
    for (double level : contour_levels(v, 5)) {
        const auto segs = contour_segments(v, level);
        EXPECT_FALSE(segs.empty()) << level;
        for (const auto& [a, b] : segs) {
            EXPECT_LE(a.norm(), 1.0 + 1e-12);
            EXPECT_LE(b.norm(), 1.0 + 1e-12);
        }
    }
    EXPECT_TRUE(contour_segments(v, -1.0).empty());
}

TEST(Svg, Deterministic) {
    auto draw = [] {
        SvgPlot p;
        p.boundary(0.25);
        p.curve(solve_constrained(0.25, {1.0, 2.0}).curve, palette(3));
        p.dot({0.5, 0.5}, "red");
        return p.str();
    };
    const auto s = draw();
    EXPECT_EQ(s, draw());
    EXPECT_EQ(s.rfind("<?xml", 0), 0u);
    EXPECT_NE(s.find("<polyline"), std::string::npos);
    EXPECT_NE(s.find("</svg>"), std::string::npos);
}

TEST(Repro, Fig2WritesIndexedCurves) {
    const auto dir = scratch("fig2");
    const auto res = repro_figure("fig2", dir);
    ASSERT_EQ(res.index["curves"].size(), 16u);
    for (const auto& f : res.files) EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    for (const auto& c : res.index["curves"]) {
        EXPECT_LT(std::abs(c["theta_f"].get<double>()), two_thirds_pi);
        EXPECT_NEAR(c["r_c"].get<double>(), critical_radius(c["D"].get<double>()), 1e-12);
    }
    const auto dir2 = scratch("fig2b");
    const auto again = repro_figure("fig2", dir2);
    ASSERT_EQ(again.files, res.files);
    for (const auto& f : res.files) EXPECT_EQ(read_text((dir / f).string()), read_text((dir2 / f).string())) << f;
    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(dir2);
}

TEST(Repro, Fig4Panels) {
    const auto dir = scratch("fig4");
    const auto res = repro_figure("fig4", dir);
    const auto& m = res.index["members"];
    ASSERT_EQ(m.size(), 3u);
    EXPECT_LT(m[0]["r_c"].get<double>(), 0.5);
    EXPECT_GT(m[1]["r_c"].get<double>(), 0.5);
    EXPECT_NEAR(m[2]["r_c"].get<double>(), 0.5, 1e-9);
    EXPECT_NEAR(m[0]["theta_f"].get<double>(), two_thirds_pi, 1e-9);
    std::filesystem::remove_all(dir);
}

TEST(Repro, UnknownFigure) {
    try {
        repro_figure("fig9", scratch("none"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
}
