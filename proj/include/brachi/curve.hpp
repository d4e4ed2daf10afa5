#pragma once

#include "brachi/error.hpp"
#include "brachi/geometry.hpp"
#include "brachi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace brachi {

struct CurveSample {
    double s = 0.0;      // parameter in [0, 1]
    CartPoint point;
    double t_cum = 0.0;  // time of flight from s = 0
};

/// Ordered polyline with cumulative time of flight; every solver produces one of these.
struct SampledCurve {
    std::vector<CurveSample> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    const CurveSample& front() const { return samples.front(); }
    const CurveSample& back() const { return samples.back(); }
    const CurveSample& operator[](std::size_t i) const { return samples[i]; }

    std::vector<CartPoint> points() const {
        std::vector<CartPoint> out;
        out.reserve(samples.size());
        for (const auto& smp : samples) out.push_back(smp.point);
        return out;
    }

    double total_time() const { return samples.empty() ? 0.0 : samples.back().t_cum; }
};

/// Builds a curve with s uniform in [0, 1] and t_cum left at zero.
inline SampledCurve make_curve(std::span<const CartPoint> points) {
    SampledCurve c;
    c.samples.reserve(points.size());
    const double n = static_cast<double>(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double s = points.size() > 1 ? static_cast<double>(i) / (n - 1.0) : 0.0;
        c.samples.push_back({s, points[i], 0.0});
    }
    return c;
}

inline SampledCurve make_curve(std::span<const PolarPoint> points) {
    std::vector<CartPoint> cart;
    cart.reserve(points.size());
    for (auto p : points) cart.push_back(to_cartesian(p));
    return make_curve(std::span<const CartPoint>(cart));
}

namespace detail {

// Along a chord with perpendicular distance d from the origin, the substitution
// r = d + (1 - d) sin^2(phi) absorbs both the (1 - r)^(-1/2) release singularity and the
// (r - d)^(-1/2) factor from ds/dr, leaving the smooth integrand 2 r^(3/2) / sqrt(r + d).
struct ChordPiece {
    double d;
    double one_minus_d;

    double phi_of(double r) const {
        const double q = std::clamp((r - d) / one_minus_d, 0.0, 1.0);
        return std::asin(std::sqrt(q));
    }

    double integrand(double phi) const {
        const double sn = std::sin(phi);
        const double r = d + one_minus_d * sn * sn;
        if (r <= 0.0) return 0.0;
        return 2.0 * r * std::sqrt(r / (r + d));
    }

    double time(double r_from, double r_to) const {
        double a = phi_of(r_from);
        double b = phi_of(r_to);
        if (a > b) std::swap(a, b);
        if (b - a > 0.1) {
            return integrate([this](double p) { return integrand(p); }, a, b, 1e-12);
        }
        return integrate_fixed<10>([this](double p) { return integrand(p); }, a, b);
    }
};

inline double midpoint_chord_time(CartPoint a, CartPoint b) {
    const double len = distance(a, b);
    const double rm = (0.5 * (a + b)).norm();
    if (rm >= 1.0) return std::numeric_limits<double>::infinity();
    return len / speed(rm);
}

} // namespace detail

/// Travel time along the straight chord from a to b for a particle released at radius 1.
/// The chord is split at its closest approach to the origin so that r is monotone on each
/// piece; each piece is integrated exactly up to quadrature error.
inline double chord_time(CartPoint a, CartPoint b) {
    const CartPoint delta = b - a;
    const double len = delta.norm();
    if (len == 0.0) return 0.0;
    const CartPoint u = (1.0 / len) * delta;
    const double d = std::abs(cross(a, u));
    const double one_minus_d = 1.0 - d;
    if (one_minus_d < 1e-12) return detail::midpoint_chord_time(a, b);
    const detail::ChordPiece piece{d, one_minus_d};
    const double ra = std::min(a.norm(), 1.0);
    const double rb = std::min(b.norm(), 1.0);
    const double t_star = -dot(a, u);  // arclength of closest approach from a
    if (t_star > 0.0 && t_star < len) {
        return piece.time(ra, d) + piece.time(d, rb);
    }
    return piece.time(ra, rb);
}

inline void require_admissible(const SampledCurve& c) {
    for (const auto& smp : c.samples) {
        if (smp.point.norm() > 1.0 + admissible_slack) {
            fail(ErrorCode::CurveNotAdmissible, "sample lies outside the unit disk");
        }
    }
}

/// Returns a copy of the curve with t_cum filled by chord_time partial sums.
inline SampledCurve with_time_of_flight(SampledCurve c) {
    if (c.size() < 2) fail(ErrorCode::EmptyCurve, "time of flight needs at least two samples");
    require_admissible(c);
    double total = 0.0;
    double length = 0.0;
    c.samples[0].t_cum = 0.0;
    for (std::size_t i = 1; i < c.size(); ++i) {
        length += distance(c.samples[i - 1].point, c.samples[i].point);
        total += chord_time(c.samples[i - 1].point, c.samples[i].point);
        c.samples[i].t_cum = total;
    }
    if (length == 0.0) fail(ErrorCode::EmptyCurve, "curve is a single stationary point");
    return c;
}

/// Time of flight of a sampled curve.
inline TimeOfFlight tof_sampled(const SampledCurve& c) { return {with_time_of_flight(c).total_time()}; }

/// Position at parameter s, linear between samples.
inline CartPoint point_at(const SampledCurve& c, double s) {
    if (c.empty()) fail(ErrorCode::EmptyCurve, "point_at on empty curve");
    if (s <= c.front().s) return c.front().point;
    if (s >= c.back().s) return c.back().point;
    auto it = std::upper_bound(c.samples.begin(), c.samples.end(), s,
                               [](double v, const CurveSample& smp) { return v < smp.s; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (s - lo.s) / (hi.s - lo.s);
    return lo.point + w * (hi.point - lo.point);
}

inline double point_segment_distance(CartPoint p, CartPoint a, CartPoint b) {
    const CartPoint ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    const double w = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + w * ab);
}

/// Distance from p to the polyline through the samples of c.
inline double point_curve_distance(CartPoint p, const SampledCurve& c) {
    if (c.size() == 1) return distance(p, c.front().point);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < c.size(); ++i) {
        best = std::min(best, point_segment_distance(p, c[i - 1].point, c[i].point));
    }
    return best;
}

/// One-sided sup-inf distance: the largest distance from a sample of a to the polyline of b.
/// Not symmetric.
inline double curve_distance(const SampledCurve& a, const SampledCurve& b) {
    if (a.empty() || b.empty()) fail(ErrorCode::EmptyCurve, "curve_distance on empty curve");
    double worst = 0.0;
    for (const auto& smp : a.samples) worst = std::max(worst, point_curve_distance(smp.point, b));
    return worst;
}

/// Arc-length-uniform resampling to n samples. The new s is the arc-length fraction.
inline SampledCurve resample(const SampledCurve& c, std::size_t n) {
    if (n < 2 || c.size() < 2) fail(ErrorCode::EmptyCurve, "resample needs n >= 2 and a non-trivial curve");
    std::vector<double> cum(c.size(), 0.0);
    for (std::size_t i = 1; i < c.size(); ++i) cum[i] = cum[i - 1] + distance(c[i - 1].point, c[i].point);
    const double total = cum.back();
    if (total == 0.0) fail(ErrorCode::EmptyCurve, "cannot resample a zero-length curve");

    SampledCurve out;
    out.samples.reserve(n);
    std::size_t seg = 1;
    for (std::size_t k = 0; k < n; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(n - 1);
        CartPoint p;
        if (k == 0) {
            p = c.front().point;
        } else if (k == n - 1) {
            p = c.back().point;
        } else {
            const double target = frac * total;
            while (seg < c.size() - 1 && cum[seg] < target) ++seg;
            const double span = cum[seg] - cum[seg - 1];
            const double w = span > 0.0 ? (target - cum[seg - 1]) / span : 0.0;
            p = c[seg - 1].point + w * (c[seg].point - c[seg - 1].point);
        }
        out.samples.push_back({frac, p, 0.0});
    }
    return with_time_of_flight(std::move(out));
}

} // namespace brachi
