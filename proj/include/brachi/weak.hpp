#pragma once

// Through-origin solutions: fall radially to the singularity, leave radially along theta_f.
// The corner at the origin is admissible because the momentum-like quantity
// t / sqrt(1/r - 1) vanishes there.

#include "brachi/curve.hpp"
#include "brachi/error.hpp"
#include "brachi/geometry.hpp"

#include <cmath>

namespace brachi {

struct WeakSolution {
    double theta_f = pi;
    double r_f = 1.0;
};

/// pi/2 for the drop to the origin plus the climb back out to r_f.
inline TimeOfFlight tof_weak(const WeakSolution& w) {
    if (w.r_f < 0.0 || w.r_f > 1.0) fail(ErrorCode::OutOfRange, "tof_weak requires 0 <= r_f <= 1");
    return {pi / 2.0 + radial_fall_primitive(w.r_f)};
}

/// Polyline (1,0) -> origin at s = 1/2 -> (r_f cos theta_f, r_f sin theta_f). n must be odd.
inline SampledCurve sample_weak(const WeakSolution& w, std::size_t n) {
    if (n < 3 || n % 2 == 0) fail(ErrorCode::InvalidArgument, "sample_weak needs odd n >= 3");
    if (w.r_f < 0.0 || w.r_f > 1.0) fail(ErrorCode::OutOfRange, "sample_weak requires 0 <= r_f <= 1");
    const std::size_t mid = n / 2;
    SampledCurve c;
    c.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n - 1);
        if (i <= mid) {
            const double r = i == mid ? 0.0 : 1.0 - 2.0 * s;
            c.samples.push_back({s, {r, 0.0}, pi / 2.0 - radial_fall_primitive(r)});
        } else {
            const double r = i == n - 1 ? w.r_f : (2.0 * s - 1.0) * w.r_f;
            c.samples.push_back({s, to_cartesian({r, w.theta_f}), pi / 2.0 + radial_fall_primitive(r)});
        }
    }
    c.samples.front().point = {1.0, 0.0};
    c.samples[mid].point = {0.0, 0.0};
    return c;
}

namespace detail {

// t / sqrt(1/r - 1) with t the unit chord direction and r taken at the corner point.
inline CartPoint corner_momentum(CartPoint from, CartPoint to, double r_corner) {
    const CartPoint d = to - from;
    const double len = d.norm();
    if (len == 0.0) return {0.0, 0.0};
    return (std::sqrt(r_corner / (1.0 - r_corner)) / len) * d;
}

} // namespace detail

/// Magnitude of the jump in t / sqrt(1/r - 1) across s_corner. One-sided chords at offsets
/// h and h/2 are combined by Richardson extrapolation.
inline double corner_residual(const SampledCurve& c, double s_corner, double h = 0.0) {
    if (c.size() < 3) fail(ErrorCode::EmptyCurve, "corner_residual needs at least three samples");
    const double s0 = c.front().s;
    const double s1 = c.back().s;
    if (!(s_corner > s0 && s_corner < s1)) fail(ErrorCode::CornerAtEndpoint, "corner must be interior");
    if (h <= 0.0) h = 4.0 * (s1 - s0) / static_cast<double>(c.size() - 1);
    h = std::min({h, s_corner - s0, s1 - s_corner});

    const CartPoint p = point_at(c, s_corner);
    const double r = p.norm();
    if (r >= 1.0) fail(ErrorCode::CornerAtEndpoint, "corner on the release circle");

    auto left = [&](double off) { return detail::corner_momentum(point_at(c, s_corner - off), p, r); };
    auto right = [&](double off) { return detail::corner_momentum(p, point_at(c, s_corner + off), r); };
    const CartPoint lim_left = 2.0 * left(h / 2.0) - left(h);
    const CartPoint lim_right = 2.0 * right(h / 2.0) - right(h);
    return (lim_left - lim_right).norm();
}

} // namespace brachi
