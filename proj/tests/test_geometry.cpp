#include "brachi/curve.hpp"
#include "support/random_curves.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace brachi;
using brachi::testing::polyline;

namespace {

SampledCurve radial_polyline(std::size_t n) {
    std::vector<CartPoint> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({1.0 - static_cast<double>(i) / (n - 1), 0.0});
    return polyline(pts);
}

// Brute-force oracle: fine midpoint rule along the chord (valid away from r = 1).
double brute_chord_time(CartPoint a, CartPoint b, int pieces = 200000) {
    double sum = 0.0;
    const double len = distance(a, b);
    for (int k = 0; k < pieces; ++k) {
        const double w = (k + 0.5) / pieces;
        const double r = (a + w * (b - a)).norm();
        sum += std::sqrt(r / (1.0 - r));
    }
    return sum * len / pieces;
}

SampledCurve rotated(const SampledCurve& c, double angle) {
    SampledCurve out = c;
    for (auto& smp : out.samples) {
        auto p = to_polar(smp.point);
        smp.point = to_cartesian({p.r, p.theta + angle});
    }
    return out;
}

// Leaves the rim radially, like every extremal; a non-radial start costs half an order.
SampledCurve spiral(std::size_t n) {
    std::vector<PolarPoint> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / (n - 1);
        pts.push_back({1.0 - 0.6 * s, 1.2 * s * s});
    }
    return make_curve(std::span<const PolarPoint>(pts));
}

} // namespace

TEST(ToCartesian, AxisOriginAndQuarterTurn) {
    auto a = to_cartesian({1.0, 0.0});
    EXPECT_DOUBLE_EQ(a.x, 1.0);
    EXPECT_DOUBLE_EQ(a.y, 0.0);
    auto o = to_cartesian({0.0, 2.1});
    EXPECT_EQ(o.x, 0.0);
    EXPECT_EQ(o.y, 0.0);
    auto q = to_cartesian({0.5, pi / 2});
    EXPECT_NEAR(q.x, 0.0, 1e-16);
    EXPECT_DOUBLE_EQ(q.y, 0.5);
}

TEST(NormalizeAngle, WrapsIntoPrincipalRange) {
    EXPECT_NEAR(normalize_angle(3 * pi / 2), -pi / 2, 1e-15);
    EXPECT_DOUBLE_EQ(normalize_angle(-pi), pi);
    EXPECT_NEAR(normalize_angle(7.0), 7.0 - 2 * pi, 1e-15);
}

TEST(RadialFallPrimitive, ClosedFormEndpoints) {
    EXPECT_DOUBLE_EQ(radial_fall_primitive(0.0), 0.0);
    EXPECT_DOUBLE_EQ(radial_fall_primitive(1.0), pi / 2);
    // derivative matches sqrt(r / (1 - r))
    const double r = 0.37, h = 1e-6;
    EXPECT_NEAR((radial_fall_primitive(r + h) - radial_fall_primitive(r - h)) / (2 * h), std::sqrt(r / (1 - r)), 1e-8);
}

TEST(ChordTime, MatchesBruteForceAwayFromRim) {
    const CartPoint cases[][2] = {
        {{0.9, 0.1}, {-0.3, 0.5}},   // passes the closest approach inside the chord
        {{0.2, -0.7}, {0.6, -0.1}},
        {{0.01, 0.0}, {-0.5, 0.02}}, // near the singular origin
    };
    for (const auto& c : cases) {
        EXPECT_NEAR(chord_time(c[0], c[1]), brute_chord_time(c[0], c[1]), 1e-8);
    }
}

TEST(ChordTime, RadialChordFromRimIsClosedForm) {
    const double t = chord_time({1.0, 0.0}, {0.3, 0.0});
    EXPECT_NEAR(t, pi / 2 - radial_fall_primitive(0.3), 1e-13);
    EXPECT_EQ(chord_time({0.4, 0.4}, {0.4, 0.4}), 0.0);
}

TEST(TofSampled, RadialDropIsHalfPi) {
    EXPECT_NEAR(tof_sampled(radial_polyline(10000)).value, pi / 2, 1e-4);
}

TEST(TofSampled, DiameterThroughOriginIsPi) {
    std::vector<CartPoint> pts;
    const std::size_t n = 20001;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({1.0 - 2.0 * static_cast<double>(i) / (n - 1), 0.0});
    pts[n / 2] = {0.0, 0.0};
    EXPECT_NEAR(tof_sampled(polyline(pts)).value, pi, 2e-4);
}

TEST(TofSampled, Errors) {
    try {
        tof_sampled(polyline({{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}));
        FAIL() << "expected EmptyCurve";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyCurve);
    }
    try {
        tof_sampled(polyline({{1.0, 0.0}}));
        FAIL() << "expected EmptyCurve";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyCurve);
    }
    try {
        tof_sampled(polyline({{1.0, 0.0}, {0.9, 0.5}}));
        FAIL() << "expected CurveNotAdmissible";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CurveNotAdmissible);
    }
}

TEST(TofSampled, CumulativeTimesAreMonotoneAndStartAtZero) {
    const auto c = with_time_of_flight(spiral(400));
    EXPECT_EQ(c.front().t_cum, 0.0);
    for (std::size_t i = 1; i < c.size(); ++i) EXPECT_GE(c[i].t_cum, c[i - 1].t_cum);
}

TEST(TofSampled, RotationAndReflectionInvariance) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int trial = 0; trial < 25; ++trial) {
        const auto c = brachi::testing::random_wiggly_curve(rng, 300, trial % 2 == 0);
        const double t = tof_sampled(c).value;
        EXPECT_NEAR(tof_sampled(rotated(c, angle(rng))).value, t, 1e-10);
        SampledCurve mirror = c;
        for (auto& smp : mirror.samples) smp.point.y = -smp.point.y;
        EXPECT_NEAR(tof_sampled(mirror).value, t, 1e-10);
    }
}

TEST(TofSampled, SecondOrderInSegmentLength) {
    // the rim contributes a higher-order h^(5/2) term, so stay well into the asymptotic range
    const double t1 = tof_sampled(spiral(801)).value;
    const double t2 = tof_sampled(spiral(1601)).value;
    const double t4 = tof_sampled(spiral(3201)).value;
    const double ratio = (t1 - t2) / (t2 - t4);
    EXPECT_GT(ratio, 3.5);
    EXPECT_LT(ratio, 4.5);
}

TEST(CurveDistance, IdentityAndOriginToCircle) {
    const auto c = spiral(200);
    EXPECT_EQ(curve_distance(c, c), 0.0);

    std::vector<CartPoint> circle;
    for (int k = 0; k <= 720; ++k) circle.push_back(to_cartesian({1.0, 2 * pi * k / 720}));
    const auto origin = polyline({{0.0, 0.0}});
    EXPECT_NEAR(curve_distance(origin, polyline(circle)), 1.0, 1e-4);
}

TEST(CurveDistance, ZeroExactlyWhenSamplesLieOnPolyline) {
    const auto b = polyline({{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.8}});
    const auto a = polyline({{0.5, 0.0}, {0.0, 0.0}, {0.0, 0.3}});
    EXPECT_NEAR(curve_distance(a, b), 0.0, 1e-15);
    EXPECT_GT(curve_distance(b, a), 0.4);  // one-sided: b reaches further than a
    EXPECT_THROW(curve_distance(SampledCurve{}, b), Error);
}

TEST(Resample, SegmentEndpointsAndTime) {
    const auto seg = polyline({{0.9, 0.1}, {0.1, 0.5}});
    const auto r = resample(seg, 5);
    ASSERT_EQ(r.size(), 5u);
    EXPECT_EQ(r.front().point, seg.front().point);
    EXPECT_EQ(r.back().point, seg.back().point);
    for (const auto& smp : r.samples) {
        EXPECT_NEAR(cross(smp.point - seg.front().point, seg.back().point - seg.front().point), 0.0, 1e-15);
    }
    EXPECT_THROW(resample(seg, 1), Error);
}

TEST(Resample, PreservesTimeWithinOnePercent) {
    const auto c = with_time_of_flight(spiral(3000));
    const auto r = resample(c, 700);
    EXPECT_EQ(r.front().point, c.front().point);
    EXPECT_EQ(r.back().point, c.back().point);
    EXPECT_NEAR(r.total_time(), c.total_time(), 0.01 * c.total_time());
}
