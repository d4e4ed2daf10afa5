#pragma once

// Value function V(x) = minimal time from (1, 0), sampled from the optimal foliation, plus
// the eikonal and orthogonality checks against it.

#include "brachi/annulus.hpp"
#include "brachi/curve.hpp"
#include "brachi/error.hpp"
#include "brachi/geometry.hpp"
#include "brachi/strong.hpp"
#include "brachi/weak.hpp"

#include <boost/math/interpolators/makima.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace brachi {

enum class Family : std::uint8_t { Strong, Weak, Constrained };

inline std::string_view to_string(Family f) {
    switch (f) {
    case Family::Strong: return "strong";
    case Family::Weak: return "weak";
    case Family::Constrained: return "constrained";
    }
    return "?";
}

/// Node (i, j) sits at r_i = eps + (1 - eps) i / (n_r - 1), theta_j = -pi + 2 pi j / n_theta.
struct ValueGrid {
    double epsilon = 0.0;
    int n_r = 0;
    int n_theta = 0;
    std::vector<double> values;
    std::vector<Family> family;

    double dr() const { return (1.0 - epsilon) / (n_r - 1); }
    double dtheta() const { return 2.0 * pi / n_theta; }
    double radius(int i) const { return i == n_r - 1 ? 1.0 : epsilon + (1.0 - epsilon) * i / (n_r - 1); }
    double angle(int j) const { return -pi + dtheta() * j; }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_theta) + static_cast<std::size_t>(j);
    }
    double at(int i, int j) const { return values[index(i, j)]; }
};

/// A foliation leaf with the family it belongs to.
struct Leaf {
    SampledCurve curve;
    Family family = Family::Strong;
};

namespace detail {

struct Crossing {
    double theta;
    double t;
    Family family;
};

inline Family family_of(Regime r) {
    return r == Regime::SmoothInterior || r == Regime::RadialR1 ? Family::Strong : Family::Constrained;
}

// Terminal angles -pi + 2 pi (k + 1/2) / n: symmetric under theta -> -theta.
inline std::vector<double> leaf_angles(std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = -pi + 2.0 * pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    return out;
}

inline double midpoint(std::size_t k, std::size_t n) { return (static_cast<double>(k) + 0.5) / static_cast<double>(n); }

// Where the leaf with apex radius r_c meets radius r: the descending crossing (angle, time)
// and the remaining (angle, time) from there to the apex.
struct LeafCut {
    double a_down, t_down, a_rest, t_rest;
};

inline LeafCut leaf_cut(double r_c, double r, const Tolerances& tol) {
    const StrongKernel k{d_from_rc(r_c), r_c};
    const double phi = k.phi_of(r);
    return {k.angle_between(phi, pi / 2.0, tol.quadrature), k.time_between(phi, pi / 2.0, tol.quadrature),
            k.angle_between(0.0, phi, tol.quadrature), k.time_between(0.0, phi, tol.quadrature)};
}

// Exact crossings of optimal leaves with the ring of radius r, both mirror halves. Leaves are
// picked per ring: strong ones by apex depth u = sqrt((r - r_c) / (r - floor)), so crossings
// spread evenly in angle right up to the apex; weak legs and obstacle exits by angle.
inline std::vector<Crossing> ring_crossings(double eps, double r, std::size_t n_leaves, const Tolerances& tol) {
    std::vector<Crossing> out;
    auto both = [&](double th, double t, Family f) {
        out.push_back({th, t, f});
        if (th != 0.0) out.push_back({-th, t, f});
    };
    // radial trunk on the axis
    both(0.0, radial_fall_primitive(1.0) - radial_fall_primitive(r), eps == 0.0 ? Family::Weak : Family::Strong);

    const std::size_t n = std::max<std::size_t>(n_leaves / 2, 4);
    // strong leaves with eps <= r_c < r: both halves
    if (r > eps) {
        for (std::size_t k = 0; k < n; ++k) {
            const double u = midpoint(k, n);
            const double r_c = r - (r - eps) * u * u;
            if (r_c <= 0.0) continue;
            const auto c = leaf_cut(r_c, r, tol);
            both(c.a_down, c.t_down, Family::Strong);
            both(c.a_down + 2.0 * c.a_rest, c.t_down + 2.0 * c.t_rest, Family::Strong);
        }
    }
    if (eps == 0.0) {
        for (std::size_t k = 0; k < n; ++k) {
            const double th = two_thirds_pi + (pi - two_thirds_pi) * midpoint(k, n);
            both(th, pi / 2.0 + radial_fall_primitive(r), Family::Weak);
        }
        out.push_back({pi, pi / 2.0 + radial_fall_primitive(r), Family::Weak});
        return out;
    }
    // leaves aimed below the obstacle: their descending halves up to r = eps
    for (std::size_t k = 0; k < n; ++k) {
        const double w = midpoint(k, n);
        const auto c = leaf_cut(eps * (1.0 - w * w), r, tol);
        both(c.a_down, c.t_down, Family::Constrained);
    }
    // tangent descent, ride to psi, tangent exit: the exit is the tangent leaf's ascending half
    const auto tan = leaf_cut(eps, r, tol);
    const auto tp = tangent_params(eps, tol);
    const double half_time = tan.t_down + tan.t_rest;
    for (std::size_t k = 0; k <= n; ++k) {
        const double psi = tp.theta_c + (pi - tp.theta_c) * static_cast<double>(k) / static_cast<double>(n);
        const double th = psi + tan.a_rest;
        if (th > pi) break;
        both(th, half_time + arc_time(eps, psi - tp.theta_c).value + tan.t_rest, Family::Constrained);
    }
    // the exit landing on theta = pi, where the mirror families meet
    const double psi_seam = pi - tan.a_rest;
    if (psi_seam >= tp.theta_c) out.push_back({pi, half_time + arc_time(eps, psi_seam - tp.theta_c).value + tan.t_rest, Family::Constrained});
    return out;
}

// Mirror image of a curve in the x-axis.
inline SampledCurve mirrored(SampledCurve c) {
    for (auto& smp : c.samples) smp.point.y = -smp.point.y;
    return c;
}

// Sorts by angle and merges coincident crossings (including across the +-pi seam), keeping the
// earliest time.
inline void tidy(std::vector<Crossing>& xs) {
    std::sort(xs.begin(), xs.end(), [](const Crossing& a, const Crossing& b) {
        return a.theta < b.theta || (a.theta == b.theta && a.t < b.t);
    });
    std::vector<Crossing> out;
    for (const auto& x : xs) {
        if (!out.empty() && x.theta - out.back().theta < 1e-10) {
            if (x.t < out.back().t) out.back() = {out.back().theta, x.t, x.family};
            continue;
        }
        out.push_back(x);
    }
    while (out.size() > 1 && out.front().theta + 2.0 * pi - out.back().theta < 1e-10) {
        if (out.back().t < out.front().t) out.front().t = out.back().t;
        out.pop_back();
    }
    xs = std::move(out);
}

} // namespace detail

/// The leaves of the optimal foliation: for eps = 0, n_curves terminal angles on the rim
/// (strong below 2 pi / 3, weak beyond); for eps > 0, the constrained solutions to
/// n_curves / 6 terminals per boundary region, together with their mirror images.
inline std::vector<Leaf> foliation_leaves(double eps, std::size_t n_curves, std::size_t samples = 801,
                                          const Tolerances& tol = {}) {
    std::vector<Leaf> out;
    if (eps == 0.0) {
        for (double th : detail::leaf_angles(n_curves)) {
            out.push_back({disk_optimal_curve(th, samples, tol), std::abs(th) < two_thirds_pi ? Family::Strong : Family::Weak});
        }
        return out;
    }
    require_epsilon(eps);
    const std::size_t per_region = std::max<std::size_t>(1, n_curves / 6);
    const std::size_t m = std::max<std::size_t>(20, samples / 4);
    for (const auto& sol : foliate_annulus(eps, per_region, m, tol)) {
        const Family f = detail::family_of(sol.regime);
        out.push_back({sol.curve, f});
        out.push_back({detail::mirrored(sol.curve), f});
    }
    return out;
}

/// Samples V on the grid: on every ring, n_curves optimal leaves are cut exactly and the
/// crossing times are interpolated along the ring (makima, periodic in theta). Throws
/// InsufficientCoverage when a node has no crossing within three cells.
inline ValueGrid value_grid(double eps, int n_r, int n_theta, std::size_t n_curves, const Tolerances& tol = {}) {
    if (n_r < 16 || n_theta < 16) fail(ErrorCode::InvalidArgument, "resolutions must be at least 16");
    if (n_curves < 64) fail(ErrorCode::InvalidArgument, "need at least 64 curves");
    if (eps != 0.0) require_epsilon(eps);

    ValueGrid g;
    g.epsilon = eps;
    g.n_r = n_r;
    g.n_theta = n_theta;
    g.values.assign(static_cast<std::size_t>(n_r) * n_theta, 0.0);
    g.family.assign(g.values.size(), Family::Strong);

    std::vector<double> radii(n_r);
    for (int i = 0; i < n_r; ++i) radii[i] = g.radius(i);

    const double cell_r = g.dr();
    for (int i = 0; i < n_r; ++i) {
        const double r = radii[i];
        if (r == 0.0) {
            for (int j = 0; j < n_theta; ++j) {
                g.values[g.index(i, j)] = pi / 2.0;
                g.family[g.index(i, j)] = Family::Weak;
            }
            continue;
        }
        auto xs = detail::ring_crossings(eps, r, n_curves, tol);
        detail::tidy(xs);
        if (xs.empty()) fail(ErrorCode::InsufficientCoverage, "a ring has no foliation crossing");

        // periodic padding so the interpolant wraps through +-pi
        const std::size_t pad = std::min<std::size_t>(3, xs.size());
        std::vector<double> x, y;
        for (std::size_t k = xs.size() - pad; k < xs.size(); ++k) {
            x.push_back(xs[k].theta - 2.0 * pi);
            y.push_back(xs[k].t);
        }
        for (const auto& c : xs) {
            x.push_back(c.theta);
            y.push_back(c.t);
        }
        for (std::size_t k = 0; k < pad; ++k) {
            x.push_back(xs[k].theta + 2.0 * pi);
            y.push_back(xs[k].t);
        }
        const double reach = 3.0 * std::max(cell_r, r * g.dtheta());
        const bool near_origin = r <= 3.0 * cell_r;
        std::vector<double> xv = x, yv = y;
        auto spline = boost::math::interpolators::makima<std::vector<double>>(std::move(xv), std::move(yv));

        std::size_t cursor = 0;
        for (int j = 0; j < n_theta; ++j) {
            const double th = g.angle(j);
            while (cursor + 1 < x.size() && x[cursor + 1] <= th) ++cursor;
            // nearest crossing among the two neighbours in the padded list
            const std::size_t nb = cursor + 1 < x.size() && x[cursor + 1] - th < th - x[cursor] ? cursor + 1 : cursor;
            const double gap = std::abs(x[nb] - th);
            if (!near_origin && r * gap > reach) fail(ErrorCode::InsufficientCoverage, "foliation too sparse for the grid");
            const std::size_t src = (nb + xs.size() - pad) % xs.size();
            g.values[g.index(i, j)] = spline(th);
            g.family[g.index(i, j)] = xs[src].family;
        }
    }
    // the release point is the zero of V by definition
    g.values[g.index(n_r - 1, n_theta / 2)] = 0.0;
    return g;
}

/// Nodes kept by the residual and orthogonality checks.
inline bool outside_exclusion_bands(double r, double theta) {
    return r >= 0.1 && r <= 0.9 && std::abs(normalize_angle(theta)) <= pi - 0.2;
}

struct EikonalResidual {
    double max_residual = 0.0;
    std::vector<double> field;  // NaN at excluded nodes
    std::size_t nodes = 0;      // nodes that entered the maximum
};

/// Relative residual | |grad V|^2 - r / (1 - r) | (1 - r) / r with central differences.
inline EikonalResidual eikonal_residual(const ValueGrid& v) {
    EikonalResidual out;
    out.field.assign(v.values.size(), std::numeric_limits<double>::quiet_NaN());
    const double dr = v.dr(), dth = v.dtheta();
    for (int i = 1; i + 1 < v.n_r; ++i) {
        const double r = v.radius(i);
        for (int j = 0; j < v.n_theta; ++j) {
            const double th = v.angle(j);
            if (!outside_exclusion_bands(r, th)) continue;
            const int jp = (j + 1) % v.n_theta, jm = (j + v.n_theta - 1) % v.n_theta;
            const double vr = (v.at(i + 1, j) - v.at(i - 1, j)) / (2.0 * dr);
            const double vt = (v.at(i, jp) - v.at(i, jm)) / (2.0 * dth);
            const double grad2 = vr * vr + vt * vt / (r * r);
            const double res = std::abs(grad2 - r / (1.0 - r)) * (1.0 - r) / r;
            out.field[v.index(i, j)] = res;
            out.max_residual = std::max(out.max_residual, res);
            ++out.nodes;
        }
    }
    if (out.nodes < 100) fail(ErrorCode::GridTooCoarse, "fewer than 100 nodes outside the exclusion bands");
    return out;
}

struct OrthogonalityReport {
    double max_deviation_deg = 0.0;
    std::size_t points = 0;
};

/// Largest angle between a leaf's tangent and the interpolated gradient of V, at interior
/// samples outside the exclusion bands.
inline OrthogonalityReport orthogonality_check(const ValueGrid& v, std::span<const SampledCurve> curves) {
    const double dr = v.dr(), dth = v.dtheta();
    // Cartesian gradient at interior nodes
    std::vector<CartPoint> grad(v.values.size(), {std::numeric_limits<double>::quiet_NaN(), 0.0});
    for (int i = 1; i + 1 < v.n_r; ++i) {
        const double r = v.radius(i);
        for (int j = 0; j < v.n_theta; ++j) {
            const int jp = (j + 1) % v.n_theta, jm = (j + v.n_theta - 1) % v.n_theta;
            const double vr = (v.at(i + 1, j) - v.at(i - 1, j)) / (2.0 * dr);
            const double vt = (v.at(i, jp) - v.at(i, jm)) / (2.0 * dth) / r;
            const double th = v.angle(j);
            grad[v.index(i, j)] = {vr * std::cos(th) - vt * std::sin(th), vr * std::sin(th) + vt * std::cos(th)};
        }
    }
    auto gradient_at = [&](CartPoint p, CartPoint& out) {
        const double r = p.norm();
        const double x = (r - v.epsilon) / dr;
        double y = (std::atan2(p.y, p.x) + pi) / dth;
        const int i = static_cast<int>(std::floor(x));
        if (i < 1 || i + 2 >= v.n_r) return false;
        const int j = static_cast<int>(std::floor(y));
        const double fx = x - i, fy = y - j;
        CartPoint acc{0.0, 0.0};
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const CartPoint gn = grad[v.index(i + a, ((j + b) % v.n_theta + v.n_theta) % v.n_theta)];
                if (std::isnan(gn.x)) return false;
                acc = acc + ((a ? fx : 1.0 - fx) * (b ? fy : 1.0 - fy)) * gn;
            }
        }
        out = acc;
        return true;
    };

    OrthogonalityReport rep;
    for (const auto& c : curves) {
        for (std::size_t k = 2; k + 2 < c.size(); ++k) {
            const CartPoint p = c[k].point;
            if (!outside_exclusion_bands(p.norm(), std::atan2(p.y, p.x))) continue;
            const CartPoint tan = c[k + 1].point - c[k - 1].point;
            if (tan.norm() == 0.0) continue;
            CartPoint gp;
            if (!gradient_at(p, gp) || gp.norm() == 0.0) continue;
            const double ang = std::atan2(std::abs(cross(tan, gp)), dot(tan, gp)) * 180.0 / pi;
            rep.max_deviation_deg = std::max(rep.max_deviation_deg, ang);
            ++rep.points;
        }
    }
    return rep;
}

} // namespace brachi
