#pragma once

// Minimum-time curves on the annulus eps <= r <= 1. A strong curve that would dip below eps is
// replaced by the strong curve tangent to the obstacle (D = D_eps, apex exactly at r = eps),
// a ride along the obstacle, and a tangent exit. Terminal points on the boundary of the upper
// half-annulus fall into four regions:
//
//   R1  theta = 0            radial drop
//   R2  r = 1                strong curve, or tangent entry + arc + tangent exit
//   R3  theta = pi           tangent entry + arc + tangent exit ending at (r, pi)
//   R4  r = eps              direct strong descent, or tangent entry + arc ending on the obstacle
//
// Lower-half terminals are handled by reflection.

#include "brachi/curve.hpp"
#include "brachi/error.hpp"
#include "brachi/geometry.hpp"
#include "brachi/quadrature.hpp"
#include "brachi/strong.hpp"
#include "brachi/weak.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

namespace brachi {

enum class Regime { RadialR1, SmoothInterior, TangentArc, TangentExitR3, ObstacleTerminalR4 };

inline std::string_view to_string(Regime r) {
    switch (r) {
    case Regime::RadialR1: return "RadialR1";
    case Regime::SmoothInterior: return "SmoothInterior";
    case Regime::TangentArc: return "TangentArc";
    case Regime::TangentExitR3: return "TangentExitR3";
    case Regime::ObstacleTerminalR4: return "ObstacleTerminalR4";
    }
    return "?";
}

struct ArcSpan {
    double start = 0.0;
    double end = 0.0;
};

struct AnnulusSolution {
    double epsilon = 0.0;
    PolarPoint terminal;
    Regime regime = Regime::RadialR1;
    std::optional<StrongSolution> entry;
    std::optional<ArcSpan> arc_span;
    std::optional<StrongSolution> exit;  // the tangent curve, rotated so its apex sits at arc_span->end
    SampledCurve curve;

    TimeOfFlight time() const { return {curve.total_time()}; }
};

struct TangentParams {
    double D = 0.0;
    double theta_c = 0.0;
};

inline void require_epsilon(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) fail(ErrorCode::OutOfRange, "epsilon must lie in (0, 1)");
}

/// D_eps with r_c(D_eps) = eps, and the angle theta_c at which that curve touches r = eps.
inline TangentParams tangent_params(double eps, const Tolerances& tol = {}) {
    require_epsilon(eps);
    const double D = d_from_rc(eps);
    const detail::StrongKernel k{D, eps};
    return {D, k.angle_between(0.0, pi / 2.0, tol.quadrature)};
}

/// Time to ride the obstacle through angle dtheta: eps^(3/2) dtheta / sqrt(1 - eps).
inline TimeOfFlight arc_time(double eps, double dtheta) {
    require_epsilon(eps);
    if (dtheta < 0.0) fail(ErrorCode::NegativeSpan, "arc_time needs dtheta >= 0");
    return {eps * std::sqrt(eps) * dtheta / std::sqrt(1.0 - eps)};
}

namespace detail {

inline constexpr double boundary_tol = 1e-9;

struct Classified {
    Regime regime;
    double theta;  // |theta| in [0, pi]
    double sign;
};

inline Classified classify(double eps, PolarPoint terminal, const TangentParams& tp) {
    require_epsilon(eps);
    const double r = terminal.r;
    if (r < eps - boundary_tol || r > 1.0 + boundary_tol) fail(ErrorCode::NotOnBoundary, "terminal outside the annulus");
    const double th_signed = normalize_angle(terminal.theta);
    const double sign = th_signed < 0.0 ? -1.0 : 1.0;
    const double th = std::abs(th_signed);
    if (th < boundary_tol) return {Regime::RadialR1, 0.0, 1.0};
    if (std::abs(r - 1.0) < boundary_tol) {
        return {th / 2.0 <= tp.theta_c ? Regime::SmoothInterior : Regime::TangentArc, th, sign};
    }
    if (std::abs(th - pi) < boundary_tol) return {Regime::TangentExitR3, pi, 1.0};
    if (std::abs(r - eps) < boundary_tol) return {Regime::ObstacleTerminalR4, th, sign};
    fail(ErrorCode::NotOnBoundary, "terminal is not on the boundary of the half-annulus");
}

struct PolarSample {
    double r;
    double theta;
    double t;
};
using Piece = std::vector<PolarSample>;

// Points on the descent of the D-curve, uniform in phi over [phi_lo, phi_hi], where
// r = r_c + (1 - r_c) sin^2(phi). Angle and time are measured from r = 1; output runs from
// phi_hi down to phi_lo (decreasing r).
inline Piece descent_samples(double D, double r_c, double phi_lo, double phi_hi, std::size_t m, const Tolerances& tol) {
    const StrongKernel k{D, r_c};
    Piece out;
    out.reserve(m + 1);
    double angle = k.angle_between(phi_hi, pi / 2.0, tol.quadrature);
    double time = k.time_between(phi_hi, pi / 2.0, tol.quadrature);
    double phi_prev = phi_hi;
    for (std::size_t i = 0; i <= m; ++i) {
        const double phi = phi_hi - (phi_hi - phi_lo) * static_cast<double>(i) / static_cast<double>(m);
        angle += k.angle_between(phi, phi_prev, tol.quadrature);
        time += k.time_between(phi, phi_prev, tol.quadrature);
        phi_prev = phi;
        const double r = i == m && phi_lo == 0.0 ? r_c : k.u_of(phi);
        out.push_back({i == 0 && phi_hi == pi / 2.0 ? 1.0 : r, angle, time});
    }
    return out;
}

inline Piece arc_samples(double eps, double from, double to, double t0, std::size_t m) {
    Piece out;
    out.reserve(m + 1);
    const double rate = arc_time(eps, 1.0).value;
    for (std::size_t i = 0; i <= m; ++i) {
        const double th = from + (to - from) * static_cast<double>(i) / static_cast<double>(m);
        out.push_back({eps, th, t0 + rate * (th - from)});
    }
    return out;
}

// Tangent entry from (1, 0) down to the contact point (eps, theta_c).
inline Piece tangent_entry(double eps, const TangentParams& tp, std::size_t m, const Tolerances& tol) {
    Piece p = descent_samples(tp.D, eps, 0.0, pi / 2.0, m, tol);
    p.back().theta = tp.theta_c;
    return p;
}

// Tangent exit leaving the obstacle at angle depart and climbing to radius r_end.
inline Piece tangent_exit(double eps, const TangentParams& tp, double depart, double t_depart, double r_end,
                          std::size_t m, const Tolerances& tol) {
    const StrongKernel k{tp.D, eps};
    const double phi_end = k.phi_of(r_end);
    Piece desc = descent_samples(tp.D, eps, 0.0, phi_end, m, tol);
    const double t_contact = desc.back().t;
    Piece out;
    out.reserve(desc.size());
    for (auto it = desc.rbegin(); it != desc.rend(); ++it) {
        out.push_back({it->r, depart + (tp.theta_c - it->theta), t_depart + (t_contact - it->t)});
    }
    out.front().theta = depart;
    out.front().t = t_depart;
    if (r_end >= 1.0) out.back().r = 1.0;
    return out;
}

inline SampledCurve assemble(const std::vector<Piece>& pieces, double sign) {
    std::vector<const Piece*> live;
    for (const auto& p : pieces) {
        if (p.size() >= 2) live.push_back(&p);
    }
    SampledCurve c;
    const double k = static_cast<double>(live.size());
    for (std::size_t j = 0; j < live.size(); ++j) {
        const Piece& p = *live[j];
        const double m = static_cast<double>(p.size() - 1);
        for (std::size_t i = j == 0 ? 0 : 1; i < p.size(); ++i) {
            const double s = (static_cast<double>(j) + static_cast<double>(i) / m) / k;
            c.samples.push_back({s, to_cartesian({p[i].r, sign * p[i].theta}), p[i].t});
        }
    }
    c.samples.back().s = 1.0;
    return c;
}

inline SampledCurve flip(SampledCurve c) {
    for (auto& smp : c.samples) smp.point.y = -smp.point.y;
    return c;
}

// D < D_eps whose descent meets r = eps at angle theta, by bisection on log D.
inline double direct_descent_d(double eps, double theta, const TangentParams& tp, const Tolerances& tol) {
    double lo = std::log(tp.D) - 60.0;
    double hi = std::log(tp.D);
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double a = descent_angle(std::exp(mid), eps, tol);
        if (std::abs(a - theta) < tol.shooting) return std::exp(mid);
        (a < theta ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

} // namespace detail

/// Region of a boundary terminal point, refined by the tangency criterion within R2.
inline Regime classify_terminal(double eps, PolarPoint terminal, const Tolerances& tol = {}) {
    return detail::classify(eps, terminal, tangent_params(eps, tol)).regime;
}

inline constexpr std::size_t default_piece_segments = 200;

/// Builds the constrained minimizer for a boundary terminal point. Each piece (entry, arc, exit)
/// gets m segments and an equal share of s; t_cum is analytic.
inline AnnulusSolution solve_constrained(double eps, PolarPoint terminal, std::size_t m = default_piece_segments,
                                         const Tolerances& tol = {}) {
    if (m < 2) fail(ErrorCode::InvalidArgument, "need at least two segments per piece");
    const TangentParams tp = tangent_params(eps, tol);
    const auto cls = detail::classify(eps, terminal, tp);
    const double sign = cls.sign;
    const double th = cls.theta;

    AnnulusSolution sol;
    sol.epsilon = eps;
    sol.terminal = terminal;
    sol.regime = cls.regime;
    const StrongSolution tangent{tp.D, eps, sign < 0 ? -1 : 1, sign * 2.0 * tp.theta_c};

    std::vector<detail::Piece> pieces;
    switch (cls.regime) {
    case Regime::RadialR1: {
        if (terminal.r >= 1.0 - detail::boundary_tol) fail(ErrorCode::OutOfRange, "terminal coincides with the release point");
        detail::Piece p;
        const std::size_t n = 3 * m;
        for (std::size_t i = 0; i <= n; ++i) {
            const double r = 1.0 - (1.0 - terminal.r) * static_cast<double>(i) / static_cast<double>(n);
            p.push_back({r, 0.0, pi / 2.0 - radial_fall_primitive(r)});
        }
        pieces.push_back(std::move(p));
        break;
    }
    case Regime::SmoothInterior: {
        const StrongSolution s = shoot(sign * th, tol);
        if (s.r_c < eps - 1e-9) fail(ErrorCode::CurveNotAdmissible, "strong curve enters the obstacle");
        sol.entry = s;
        sol.curve = sample_strong(s, 3 * m + 1, tol);
        return sol;
    }
    case Regime::TangentArc: {
        sol.entry = tangent;
        sol.exit = tangent;
        sol.arc_span = ArcSpan{sign * tp.theta_c, sign * (th - tp.theta_c)};
        pieces.push_back(detail::tangent_entry(eps, tp, m, tol));
        const double t_contact = pieces.back().back().t;
        pieces.push_back(detail::arc_samples(eps, tp.theta_c, th - tp.theta_c, t_contact, m));
        const double t_depart = pieces.back().back().t;
        pieces.push_back(detail::tangent_exit(eps, tp, th - tp.theta_c, t_depart, 1.0, m, tol));
        pieces.back().back().theta = th;
        break;
    }
    case Regime::TangentExitR3: {
        const double r_end = std::clamp(terminal.r, eps, 1.0);
        const double rise = tp.theta_c - descent_angle(tp.D, r_end, tol);
        const double depart = pi - std::max(rise, 0.0);
        sol.entry = tangent;
        sol.arc_span = ArcSpan{tp.theta_c, depart};
        pieces.push_back(detail::tangent_entry(eps, tp, m, tol));
        const double t_contact = pieces.back().back().t;
        pieces.push_back(detail::arc_samples(eps, tp.theta_c, depart, t_contact, m));
        if (r_end > eps + detail::boundary_tol) {
            sol.exit = tangent;
            const double t_depart = pieces.back().back().t;
            pieces.push_back(detail::tangent_exit(eps, tp, depart, t_depart, r_end, m, tol));
            pieces.back().back().theta = pi;
            pieces.back().back().r = r_end;
        }
        break;
    }
    case Regime::ObstacleTerminalR4: {
        if (th < tp.theta_c) {
            const double D = detail::direct_descent_d(eps, th, tp, tol);
            const double r_c = critical_radius(D);
            sol.entry = StrongSolution{D, r_c, sign < 0 ? -1 : 1, sign * max_angle(D, tol)};
            const detail::StrongKernel k{D, r_c};
            pieces.push_back(detail::descent_samples(D, r_c, k.phi_of(eps), pi / 2.0, 3 * m, tol));
            pieces.back().back().r = eps;
            pieces.back().back().theta = th;
        } else {
            sol.entry = tangent;
            sol.arc_span = ArcSpan{sign * tp.theta_c, sign * th};
            pieces.push_back(detail::tangent_entry(eps, tp, m, tol));
            const double t_contact = pieces.back().back().t;
            pieces.push_back(detail::arc_samples(eps, tp.theta_c, th, t_contact, m));
        }
        break;
    }
    }
    sol.curve = detail::assemble(pieces, sign);
    return sol;
}

/// Member of the obstacle family for D <= D_eps: descend along the D-curve until it meets
/// r = eps at angle a (non-tangentially unless D = D_eps), ride to theta_f - a, and leave along
/// the mirror image. Only the tangent member is optimal.
inline SampledCurve obstacle_family_member(double eps, double D, double theta_f, std::size_t m = default_piece_segments,
                                           const Tolerances& tol = {}) {
    require_epsilon(eps);
    const double r_c = critical_radius(D);
    if (r_c > eps + 1e-12) fail(ErrorCode::OutOfRange, "curve does not reach the obstacle");
    const detail::StrongKernel k{D, r_c};
    const double phi_hit = k.phi_of(eps);
    const double a = k.angle_between(phi_hit, pi / 2.0, tol.quadrature);
    const double t_hit = k.time_between(phi_hit, pi / 2.0, tol.quadrature);
    const double sign = theta_f < 0.0 ? -1.0 : 1.0;
    const double th = std::abs(theta_f);
    if (2.0 * a > th) fail(ErrorCode::OutOfRange, "theta_f too small for this family member");

    std::vector<detail::Piece> pieces;
    pieces.push_back(detail::descent_samples(D, r_c, phi_hit, pi / 2.0, m, tol));
    pieces.back().back().r = eps;
    pieces.push_back(detail::arc_samples(eps, a, th - a, t_hit, m));
    const double t_depart = pieces.back().back().t;
    detail::Piece exit;
    const auto& entry = pieces.front();
    for (auto it = entry.rbegin(); it != entry.rend(); ++it) {
        exit.push_back({it->r, th - it->theta, t_depart + (t_hit - it->t)});
    }
    pieces.push_back(std::move(exit));
    return detail::assemble(pieces, sign);
}

/// Terminal points for the foliation: n on R2 (theta = pi k / n), n on R3
/// (r = eps + (1 - eps)(k - 1) / n) and n on R4 (theta = pi (k - 1/2) / n).
inline std::vector<PolarPoint> foliation_terminals(double eps, std::size_t n_per_region) {
    if (n_per_region < 1) fail(ErrorCode::InvalidArgument, "need at least one curve per region");
    std::vector<PolarPoint> out;
    const double n = static_cast<double>(n_per_region);
    for (std::size_t k = 1; k <= n_per_region; ++k) out.push_back({1.0, pi * static_cast<double>(k) / n});
    for (std::size_t k = 1; k <= n_per_region; ++k) out.push_back({eps + (1.0 - eps) * static_cast<double>(k - 1) / n, pi});
    for (std::size_t k = 1; k <= n_per_region; ++k) out.push_back({eps, pi * (static_cast<double>(k) - 0.5) / n});
    return out;
}

inline std::vector<AnnulusSolution> foliate_annulus(double eps, std::size_t n_per_region,
                                                    std::size_t m = default_piece_segments, const Tolerances& tol = {}) {
    std::vector<AnnulusSolution> out;
    for (auto t : foliation_terminals(eps, n_per_region)) out.push_back(solve_constrained(eps, t, m, tol));
    return out;
}

/// Number of proper crossings between the two polylines, counting only segments whose
/// endpoints lie strictly inside the open annulus. Shared (collinear) stretches do not count.
inline std::size_t proper_crossings(const SampledCurve& a, const SampledCurve& b, double eps) {
    auto inside = [eps](CartPoint p) {
        const double r = p.norm();
        return r > eps + 1e-9 && r < 1.0 - 1e-9;
    };
    auto orient = [](CartPoint p, CartPoint q, CartPoint x) {
        const double v = cross(q - p, x - p);
        const double scale = 1e-13 * (distance(p, q) * distance(p, x) + 1e-300);
        return v > scale ? 1 : (v < -scale ? -1 : 0);
    };
    std::size_t count = 0;
    for (std::size_t i = 1; i < a.size(); ++i) {
        const CartPoint p = a[i - 1].point, q = a[i].point;
        if (!inside(p) || !inside(q)) continue;
        const double lo_x = std::min(p.x, q.x), hi_x = std::max(p.x, q.x);
        const double lo_y = std::min(p.y, q.y), hi_y = std::max(p.y, q.y);
        for (std::size_t j = 1; j < b.size(); ++j) {
            const CartPoint u = b[j - 1].point, v = b[j].point;
            if (std::max(u.x, v.x) < lo_x || std::min(u.x, v.x) > hi_x) continue;
            if (std::max(u.y, v.y) < lo_y || std::min(u.y, v.y) > hi_y) continue;
            if (!inside(u) || !inside(v)) continue;
            const int o1 = orient(p, q, u), o2 = orient(p, q, v);
            const int o3 = orient(u, v, p), o4 = orient(u, v, q);
            if (o1 * o2 < 0 && o3 * o4 < 0) ++count;
        }
    }
    return count;
}

/// Minimum-time curve on the full disk: strong below 2 pi / 3, weak otherwise.
inline SampledCurve disk_optimal_curve(double theta_f, std::size_t n, const Tolerances& tol = {}) {
    if (std::abs(theta_f) < two_thirds_pi) return sample_strong(shoot(theta_f, tol), n, tol);
    return sample_weak({theta_f, 1.0}, n % 2 == 0 ? n + 1 : n);
}

struct ConvergenceRow {
    double epsilon;
    double distance;
    double theta_c;
};

/// d(alpha^eps, alpha) for each eps: sup over samples of the constrained curve of the distance to
/// the disk minimizer with terminal (1, theta_f).
inline std::vector<ConvergenceRow> convergence_study(double theta_f, std::span<const double> eps_list,
                                                     std::size_t m = default_piece_segments, const Tolerances& tol = {}) {
    if (!(std::abs(theta_f) > 0.0 && std::abs(theta_f) < pi)) fail(ErrorCode::OutOfRange, "theta_f must lie in (0, pi)");
    const SampledCurve limit = disk_optimal_curve(theta_f, 3 * m + 1, tol);
    std::vector<ConvergenceRow> rows;
    for (double eps : eps_list) {
        const auto sol = solve_constrained(eps, {1.0, theta_f}, m, tol);
        rows.push_back({eps, curve_distance(sol.curve, limit), tangent_params(eps, tol).theta_c});
    }
    return rows;
}

} // namespace brachi
