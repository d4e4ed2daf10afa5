#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace brachi {

/// Integration tolerances shared by the analytic solvers.
struct Tolerances {
    /// Target accuracy for angle and time integrals. The integrands are O(1) after the
    /// endpoint substitutions, so this is used as the relative error bound as well.
    double quadrature = 1e-10;
    /// Stopping rule for shooting: |max_angle(D) - |theta_f|| below this.
    double shooting = 1e-9;
};

namespace detail {

inline constexpr unsigned kronrod_max_depth = 15;
// Below this width a single 15-point Gauss-Legendre panel is already exact to rounding for the
// smooth integrands used here, and the adaptive error estimate stalls on roundoff.
inline constexpr double narrow_interval = 1e-3;

} // namespace detail

/// Adaptive 15-point Gauss-Kronrod over [a, b]. Integrands passed here are expected to be
/// smooth; endpoint singularities must be removed by substitution before the call.
template <class F>
double integrate(F&& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    if (std::abs(b - a) < detail::narrow_interval) {
        return boost::math::quadrature::gauss<double, 15>::integrate(f, a, b);
    }
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, detail::kronrod_max_depth, tol * 1e-2);
}

/// Fixed-order Gauss-Legendre, used where the result must be a smooth function of
/// the endpoints (no adaptive branching).
template <unsigned Points, class F>
double integrate_fixed(F&& f, double a, double b) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss<double, Points>::integrate(f, a, b);
}

} // namespace brachi
