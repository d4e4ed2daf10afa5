#pragma once

// Smooth extremals of the time-of-flight functional on the unit disk. With the integration
// constant D > 0, a curve leaves (1, 0) radially, descends to the critical radius r_c(D) where
// it runs tangent to the circle r = r_c, and climbs back to r = 1 as the mirror image of the
// descent. Angles along the descent are
//
//     A(r) = integral_r^1 sqrt(2 (1 - u) D / (u^5 - 2 u^2 D (1 - u))) du
//
// and the maximal angle reached at r = 1 is max_angle(D) = 2 A(r_c).

#include "brachi/curve.hpp"
#include "brachi/error.hpp"
#include "brachi/geometry.hpp"
#include "brachi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace brachi {

struct StrongSolution {
    double D = 0.0;
    double r_c = 0.0;
    int branch = 1;        // +1 sweeps counter-clockwise, -1 clockwise
    double theta_f = 0.0;  // terminal angle, branch * max_angle(D)
};

enum class Half { Descending, Ascending };

/// Unique root of r^3 + 2 D r - 2 D in (0, 1): bisection to 1e-14 followed by Newton polish.
inline double critical_radius(double D) {
    if (!(D > 0.0) || !std::isfinite(D)) fail(ErrorCode::NonPositiveD, "critical_radius requires D > 0");
    auto g = [D](double r) { return r * r * r + 2.0 * D * r - 2.0 * D; };
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const double step = g(r) / (3.0 * r * r + 2.0 * D);
        const double next = r - step;
        if (!(next > 0.0 && next < 1.0)) break;
        r = next;
    }
    return r;
}

/// Inverse of critical_radius: D = r_c^3 / (2 (1 - r_c)).
inline double d_from_rc(double r_c) {
    if (!(r_c > 0.0 && r_c < 1.0)) fail(ErrorCode::OutOfRange, "d_from_rc requires 0 < r_c < 1");
    return r_c * r_c * r_c / (2.0 * (1.0 - r_c));
}

namespace detail {

// Integrands after u = r_c + (1 - r_c) sin^2(phi). Using u^3 + 2Du - 2D = (u - r_c) P(u) with
// P(u) = u^2 + u r_c + r_c^2 + 2D, both endpoint singularities cancel against du/dphi.
struct StrongKernel {
    double D;
    double r_c;

    double u_of(double phi) const {
        const double sn = std::sin(phi);
        return r_c + (1.0 - r_c) * sn * sn;
    }
    double P(double u) const { return u * u + u * r_c + r_c * r_c + 2.0 * D; }

    double phi_of(double r) const {
        const double q = std::clamp((r - r_c) / (1.0 - r_c), 0.0, 1.0);
        return std::asin(std::sqrt(q));
    }

    /// dA/dphi
    double angle_density(double phi) const {
        const double u = u_of(phi);
        const double cs = std::cos(phi);
        return 2.0 * (1.0 - r_c) * cs * cs * std::sqrt(2.0 * D / P(u)) / u;
    }

    /// d(time)/dphi; the time integrand sqrt((1 + r^2 theta'^2) / (1/r - 1)) reduces to
    /// r^2 / sqrt(g(r) (1 - r)).
    double time_density(double phi) const {
        const double u = u_of(phi);
        return 2.0 * u * u / std::sqrt(P(u));
    }

    double angle_between(double phi_a, double phi_b, double tol) const {
        return integrate([this](double p) { return angle_density(p); }, phi_a, phi_b, tol);
    }
    double time_between(double phi_a, double phi_b, double tol) const {
        return integrate([this](double p) { return time_density(p); }, phi_a, phi_b, tol);
    }
};

inline StrongKernel kernel(double D) { return {D, critical_radius(D)}; }

} // namespace detail

/// Angle swept (unsigned) and time taken while descending from radius 1 to radius r.
struct DescentPoint {
    double angle = 0.0;
    double time = 0.0;
};

/// Descent angle/time at many radii at once. Radii may be in any order; values outside
/// [r_c, 1] are clamped. Integrals are accumulated between consecutive sorted radii.
inline std::vector<DescentPoint> descent_profile(double D, std::span<const double> radii,
                                                 const Tolerances& tol = {}) {
    const auto k = detail::kernel(D);
    std::vector<std::size_t> order(radii.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radii[a] > radii[b]; });

    std::vector<DescentPoint> out(radii.size());
    double phi_prev = pi / 2.0;
    DescentPoint acc;
    for (std::size_t idx : order) {
        const double phi = k.phi_of(radii[idx]);
        if (phi < phi_prev) {
            acc.angle += k.angle_between(phi, phi_prev, tol.quadrature);
            acc.time += k.time_between(phi, phi_prev, tol.quadrature);
            phi_prev = phi;
        }
        out[idx] = acc;
    }
    return out;
}

/// Unsigned descent angle A(r) for constant D.
inline double descent_angle(double D, double r, const Tolerances& tol = {}) {
    const auto k = detail::kernel(D);
    return k.angle_between(k.phi_of(r), pi / 2.0, tol.quadrature);
}

/// Time to descend from radius 1 to radius r along the curve with constant D.
inline double descent_time(double D, double r, const Tolerances& tol = {}) {
    const auto k = detail::kernel(D);
    return k.time_between(k.phi_of(r), pi / 2.0, tol.quadrature);
}

/// Maximal angle reached by the strong solution with constant D; lies in (0, 2 pi / 3).
inline double max_angle(double D, const Tolerances& tol = {}) {
    if (!(D > 0.0) || !std::isfinite(D)) fail(ErrorCode::NonPositiveD, "max_angle requires D > 0");
    const auto k = detail::kernel(D);
    return 2.0 * k.angle_between(0.0, pi / 2.0, tol.quadrature);
}

/// Builds the solution for a given D and branch, with theta_f = branch * max_angle(D).
inline StrongSolution make_strong(double D, int branch = 1, const Tolerances& tol = {}) {
    if (!(D > 0.0) || !std::isfinite(D)) fail(ErrorCode::NonPositiveD, "make_strong requires D > 0");
    const int b = branch < 0 ? -1 : 1;
    return {D, critical_radius(D), b, b * max_angle(D, tol)};
}

/// Signed angle at radius r on the requested half of the curve.
inline double theta_of_r(const StrongSolution& sol, double r, Half half, const Tolerances& tol = {}) {
    if (r < sol.r_c - 1e-12 || r > 1.0 + 1e-12) fail(ErrorCode::OutOfRange, "theta_of_r: r outside [r_c, 1]");
    const auto k = detail::StrongKernel{sol.D, sol.r_c};
    const double desc = k.angle_between(k.phi_of(r), pi / 2.0, tol.quadrature);
    if (half == Half::Descending) return sol.branch * desc;
    const double apex = k.angle_between(0.0, pi / 2.0, tol.quadrature);
    return sol.branch * (2.0 * apex - desc);
}

/// Finds D with max_angle(D) = |theta_f| by bisection on log D.
inline StrongSolution shoot(double theta_f, const Tolerances& tol = {}) {
    const double target = std::abs(theta_f);
    if (!(target > 0.0)) fail(ErrorCode::OutOfRange, "shoot requires theta_f != 0");
    if (target >= two_thirds_pi - 1e-9) fail(ErrorCode::OutOfSector, "|theta_f| >= 2 pi / 3 has no strong solution");

    auto miss = [&](double log_d) { return max_angle(std::exp(log_d), tol) - target; };
    double lo = std::log(1e-9);
    double hi = std::log(1e6);
    const double floor = std::log(1e-300);
    const double ceiling = std::log(1e300);
    while (miss(lo) < 0.0) {
        lo -= 10.0 * std::log(10.0);
        if (lo < floor) fail(ErrorCode::OutOfSector, "theta_f too close to 2 pi / 3 to resolve");
    }
    while (miss(hi) > 0.0) {
        hi += 10.0 * std::log(10.0);
        if (hi > ceiling) fail(ErrorCode::OutOfRange, "theta_f too small to resolve");
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
        mid = 0.5 * (lo + hi);
        const double m = miss(mid);
        if (std::abs(m) < tol.shooting || hi - lo < 1e-15) break;
        (m > 0.0 ? lo : hi) = mid;
    }
    const double D = std::exp(mid);
    return {D, critical_radius(D), theta_f < 0.0 ? -1 : 1, theta_f};
}

/// Total time of flight along the strong solution, 2 * integral_{r_c}^1 r^2 / sqrt(g(r)(1 - r)) dr.
inline TimeOfFlight tof_strong(const StrongSolution& sol, const Tolerances& tol = {}) {
    const auto k = detail::StrongKernel{sol.D, sol.r_c};
    return {2.0 * k.time_between(0.0, pi / 2.0, tol.quadrature)};
}

/// Radius at parameter s: affine from 1 to r_c on [0, 1/2] and back on [1/2, 1].
inline double strong_radius_at(double r_c, double s) {
    if (s <= 0.5) return 2.0 * (r_c - 1.0) * s + 1.0;
    return 2.0 * (1.0 - r_c) * (s - 1.0) + 1.0;
}

/// Samples the curve at s = i / (n - 1). t_cum comes from the analytic partial integrals.
inline SampledCurve sample_strong(const StrongSolution& sol, std::size_t n, const Tolerances& tol = {}) {
    if (n < 3) fail(ErrorCode::InvalidArgument, "sample_strong needs n >= 3");
    std::vector<double> s(n), radii(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = static_cast<double>(i) / static_cast<double>(n - 1);
        radii[i] = strong_radius_at(sol.r_c, s[i]);
    }
    const auto profile = descent_profile(sol.D, radii, tol);
    const auto k = detail::StrongKernel{sol.D, sol.r_c};
    const double apex_angle = k.angle_between(0.0, pi / 2.0, tol.quadrature);
    const double half_time = k.time_between(0.0, pi / 2.0, tol.quadrature);

    SampledCurve c;
    c.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool descending = s[i] <= 0.5;
        const double ang = descending ? profile[i].angle : 2.0 * apex_angle - profile[i].angle;
        const double t = descending ? profile[i].time : 2.0 * half_time - profile[i].time;
        c.samples.push_back({s[i], to_cartesian({radii[i], sol.branch * ang}), t});
    }
    c.samples.front().point = {1.0, 0.0};
    c.samples.back().point = to_cartesian({1.0, sol.theta_f});
    return c;
}

} // namespace brachi
