#pragma once

#include <cmath>
#include <numbers>

namespace brachi {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_thirds_pi = 2.0 * std::numbers::pi / 3.0;

/// Slack allowed on |x| <= 1 before a point counts as outside the disk.
inline constexpr double admissible_slack = 1e-9;

/// Wraps an angle into [-pi, pi].
inline double normalize_angle(double theta) {
    double t = std::remainder(theta, 2.0 * pi);
    if (t == -pi) return pi;
    return t;
}

struct CartPoint {
    double x = 0.0;
    double y = 0.0;

    double norm() const { return std::hypot(x, y); }

    friend CartPoint operator+(CartPoint a, CartPoint b) { return {a.x + b.x, a.y + b.y}; }
    friend CartPoint operator-(CartPoint a, CartPoint b) { return {a.x - b.x, a.y - b.y}; }
    friend CartPoint operator*(double k, CartPoint a) { return {k * a.x, k * a.y}; }
    friend bool operator==(CartPoint, CartPoint) = default;
};

inline double dot(CartPoint a, CartPoint b) { return a.x * b.x + a.y * b.y; }
inline double cross(CartPoint a, CartPoint b) { return a.x * b.y - a.y * b.x; }
inline double distance(CartPoint a, CartPoint b) { return (a - b).norm(); }

/// Polar coordinates about the field centre. Radii are in units of the release radius.
struct PolarPoint {
    double r = 0.0;
    double theta = 0.0;
};

inline CartPoint to_cartesian(PolarPoint p) { return {p.r * std::cos(p.theta), p.r * std::sin(p.theta)}; }

inline PolarPoint to_polar(CartPoint p) {
    const double r = p.norm();
    return {r, r == 0.0 ? 0.0 : std::atan2(p.y, p.x)};
}

/// Speed of a particle released from rest at radius 1, evaluated at radius r.
inline double speed(double r) { return std::sqrt(1.0 / r - 1.0); }

/// Time to fall radially from radius 1 down to the origin, minus the time to fall from 1 to r:
/// the antiderivative of sqrt(r / (1 - r)). radial_fall_primitive(1) = pi/2, (0) = 0.
inline double radial_fall_primitive(double r) {
    if (r <= 0.0) return 0.0;
    if (r >= 1.0) return pi / 2.0;
    return std::asin(std::sqrt(r)) - std::sqrt(r * (1.0 - r));
}

/// Strong type for a travel time in units where the release radius and field constant are 1.
struct TimeOfFlight {
    double value = 0.0;

    friend auto operator<=>(const TimeOfFlight&, const TimeOfFlight&) = default;
};

} // namespace brachi
