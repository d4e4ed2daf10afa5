#pragma once

#include "brachi/curve.hpp"
#include "brachi/geometry.hpp"

#include <random>
#include <vector>

namespace brachi::testing {

/// Admissible test curve from (1, 0): radius piecewise linear through random knots,
/// angle a zig-zag of bounded variation. Terminal radius 1 when `return_to_rim` is set.
inline SampledCurve random_wiggly_curve(std::mt19937_64& rng, std::size_t n, bool return_to_rim) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int knots = 4 + static_cast<int>(unit(rng) * 4);
    std::vector<double> kr(knots + 1), kt(knots + 1);
    const double r_min = 0.1 + 0.7 * unit(rng);
    const double theta_f = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.2 + 2.6 * unit(rng));
    for (int k = 0; k <= knots; ++k) {
        const double f = static_cast<double>(k) / knots;
        // V-shaped radial profile (down to r_min and back) or monotone descent.
        const double base = return_to_rim ? 1.0 - (1.0 - r_min) * (1.0 - std::abs(2.0 * f - 1.0))
                                          : 1.0 - (1.0 - r_min) * f;
        kr[k] = (k == 0 || (return_to_rim && k == knots)) ? 1.0 : std::min(1.0, base * (0.9 + 0.1 * unit(rng)));
        kt[k] = theta_f * f + (k == 0 || k == knots ? 0.0 : 0.4 * (unit(rng) - 0.5));
    }
    std::vector<PolarPoint> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n - 1) * knots;
        const int k = std::min(static_cast<int>(s), knots - 1);
        const double w = s - k;
        pts.push_back({(1 - w) * kr[k] + w * kr[k + 1], (1 - w) * kt[k] + w * kt[k + 1]});
    }
    return with_time_of_flight(make_curve(std::span<const PolarPoint>(pts)));
}

inline SampledCurve polyline(std::vector<CartPoint> pts) {
    return make_curve(std::span<const CartPoint>(pts));
}

} // namespace brachi::testing
