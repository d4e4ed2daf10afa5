#pragma once

// Constructions from the existence argument (running-sup monotonization, reflection about
// theta_f / 2) and numeric first variations of the time functional.

#include "brachi/curve.hpp"
#include "brachi/error.hpp"
#include "brachi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace brachi {

/// Polar coordinates of the samples with theta unwrapped along the curve. At the origin
/// the angle is undefined and the previous value is carried.
struct PolarTrack {
    std::vector<double> s;
    std::vector<double> r;
    std::vector<double> theta;
};

inline constexpr double origin_radius = 1e-12;

inline PolarTrack polar_track(const SampledCurve& c) {
    PolarTrack p;
    p.s.reserve(c.size());
    p.r.reserve(c.size());
    p.theta.reserve(c.size());
    double prev = 0.0;
    bool have_prev = false;
    for (const auto& smp : c.samples) {
        const double r = smp.point.norm();
        double th = prev;
        if (r > origin_radius) {
            th = std::atan2(smp.point.y, smp.point.x);
            if (have_prev) th = prev + normalize_angle(th - prev);
            have_prev = true;
        }
        p.s.push_back(smp.s);
        p.r.push_back(r);
        p.theta.push_back(th);
        prev = th;
    }
    return p;
}

/// Curve through the given polar samples, with t_cum filled.
inline SampledCurve from_polar(std::span<const double> s, std::span<const double> r, std::span<const double> theta) {
    SampledCurve c;
    c.samples.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) c.samples.push_back({s[i], to_cartesian({r[i], theta[i]}), 0.0});
    return with_time_of_flight(std::move(c));
}

inline SampledCurve from_polar(const PolarTrack& p) { return from_polar(p.s, p.r, p.theta); }

/// Replaces theta by min(theta_f, running sup of theta) on each piece between origin visits,
/// mirrored when the piece turns clockwise. Radii and s are untouched.
inline SampledCurve monotonize(const SampledCurve& c) {
    if (c.size() < 2) fail(ErrorCode::EmptyCurve, "monotonize needs at least two samples");
    PolarTrack p = polar_track(c);
    std::size_t begin = 0;
    while (begin < p.s.size()) {
        std::size_t end = begin;
        while (end < p.s.size() && p.r[end] > origin_radius) ++end;
        if (end > begin + 1) {
            const double start = p.theta[begin];
            const double final_angle = p.theta[end - 1];
            const double sign = final_angle >= start ? 1.0 : -1.0;
            double sup = -std::numeric_limits<double>::infinity();
            for (std::size_t i = begin; i < end; ++i) {
                sup = std::max(sup, sign * p.theta[i]);
                p.theta[i] = sign * std::min(sign * final_angle, sup);
            }
        }
        begin = end + 1;
    }
    return from_polar(p);
}

/// Both reflections about the ray theta = theta_f / 2: the first keeps the part before the
/// crossing and mirrors it, the second mirrors the part after it. Their times sum to twice
/// the input time. Needs terminal radius 1 and monotone theta.
inline std::pair<SampledCurve, SampledCurve> symmetrize(const SampledCurve& c) {
    if (c.size() < 2) fail(ErrorCode::EmptyCurve, "symmetrize needs at least two samples");
    if (std::abs(c.back().point.norm() - 1.0) > 1e-9) {
        fail(ErrorCode::InvalidArgument, "symmetrize needs terminal radius 1");
    }
    const PolarTrack p = polar_track(c);
    const double half = 0.5 * (p.theta.back() - p.theta.front()) + p.theta.front();
    const double sign = p.theta.back() >= p.theta.front() ? 1.0 : -1.0;

    std::size_t k = 0;
    while (k < p.s.size() && sign * (p.theta[k] - half) < 0.0) ++k;
    if (k == 0 || k == p.s.size() || p.theta.back() == p.theta.front()) {
        fail(ErrorCode::NoMidAngleCrossing, "curve never reaches theta_f / 2");
    }

    // Exact intersection of the chord (k-1, k) with the mid ray keeps every chord time intact.
    const CartPoint a = c[k - 1].point;
    const CartPoint b = c[k].point;
    const CartPoint dir{std::cos(half), std::sin(half)};
    const double ca = cross(dir, a);
    const double cb = cross(dir, b);
    const double w = ca == cb ? 0.0 : ca / (ca - cb);
    const CartPoint mid = a + w * (b - a);

    auto reflect = [&](CartPoint q) {
        const PolarPoint pp = to_polar(q);
        return to_cartesian({pp.r, 2.0 * half - pp.theta});
    };

    std::vector<CartPoint> first, second;
    for (std::size_t i = 0; i < k; ++i) first.push_back(c[i].point);
    if (distance(first.back(), mid) > 0.0) first.push_back(mid);
    const std::size_t nf = first.size();
    for (std::size_t i = nf - 1; i-- > 0;) first.push_back(reflect(first[i]));

    std::vector<CartPoint> tail;
    tail.push_back(mid);
    for (std::size_t i = k; i < c.size(); ++i) {
        if (i == k && distance(c[i].point, mid) == 0.0) continue;
        tail.push_back(c[i].point);
    }
    for (std::size_t i = tail.size(); i-- > 1;) second.push_back(reflect(tail[i]));
    second.insert(second.end(), tail.begin(), tail.end());

    auto finish = [](std::vector<CartPoint> pts) {
        SampledCurve out = make_curve(std::span<const CartPoint>(pts));
        return with_time_of_flight(std::move(out));
    };
    return {finish(std::move(first)), finish(std::move(second))};
}

namespace detail {

template <class Perturb>
double richardson_derivative(Perturb&& time_at, double lambda) {
    const double t0 = time_at(0.0);
    const double d1 = (time_at(lambda) - t0) / lambda;
    const double d2 = (time_at(0.5 * lambda) - t0) / (0.5 * lambda);
    return 2.0 * d2 - d1;
}

} // namespace detail

inline constexpr double variation_step = 1e-5;

/// One-sided directional derivative of T in the direction r -> r + lambda (q - r).
/// q must lie in [epsilon, 1] and agree with r at both endpoints.
inline double first_variation_radial(const SampledCurve& c, std::span<const double> q, double eps_obstacle,
                                     double lambda = variation_step) {
    if (q.size() != c.size()) fail(ErrorCode::InvalidArgument, "perturbation length differs from curve");
    const PolarTrack p = polar_track(c);
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < eps_obstacle - admissible_slack || q[i] > 1.0 + admissible_slack) {
            fail(ErrorCode::InadmissiblePerturbation, "radial perturbation leaves the annulus");
        }
    }
    if (std::abs(q.front() - p.r.front()) > 1e-12 || std::abs(q.back() - p.r.back()) > 1e-12) {
        fail(ErrorCode::InadmissiblePerturbation, "radial perturbation moves an endpoint");
    }
    std::vector<double> r(p.r.size());
    auto time_at = [&](double lam) {
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = p.r[i] + lam * (q[i] - p.r[i]);
        return from_polar(p.s, r, p.theta).total_time();
    };
    return detail::richardson_derivative(time_at, lambda);
}

/// Two-sided admissible directional derivative of T along theta -> theta + lambda xi.
inline double first_variation_angular(const SampledCurve& c, std::span<const double> xi,
                                      double lambda = variation_step) {
    if (xi.size() != c.size()) fail(ErrorCode::InvalidArgument, "perturbation length differs from curve");
    if (xi.front() != 0.0 || xi.back() != 0.0) {
        fail(ErrorCode::InadmissiblePerturbation, "angular perturbation moves an endpoint");
    }
    const PolarTrack p = polar_track(c);
    std::vector<double> th(p.theta.size());
    auto time_at = [&](double lam) {
        for (std::size_t i = 0; i < th.size(); ++i) th[i] = p.theta[i] + lam * xi[i];
        return from_polar(p.s, p.r, th).total_time();
    };
    return detail::richardson_derivative(time_at, lambda);
}

/// dL/dr on a stretch with r' = 0, L = |theta'| r^(3/2) (1 - r)^(-1/2):
/// |theta'| sqrt(r) (1 - r)^(-3/2) (3 - 2r) / 2. Positive, so pushing off the obstacle costs time.
inline double contact_radial_density(double r, double dtheta_ds) {
    return std::abs(dtheta_ds) * std::sqrt(r) * std::pow(1.0 - r, -1.5) * (3.0 - 2.0 * r) / 2.0;
}

struct StationarityReport {
    double worst_radial = std::numeric_limits<double>::infinity();  // smallest one-sided variation
    double worst_angular = 0.0;                                      // largest |two-sided variation|
    int trials = 0;
};

/// Random smooth bumps (cos^2 profile in s) applied radially toward the rim, clamped to
/// [eps, 1], and angularly. A minimizer has no radial descent direction and zero angular
/// variation.
inline StationarityReport stationarity_check(const SampledCurve& c, double eps, int trials, std::uint64_t seed) {
    const PolarTrack p = polar_track(c);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto bump = [](double s, double centre, double width) {
        const double x = (s - centre) / width;
        return std::abs(x) < 1.0 ? std::pow(std::cos(pi * x / 2.0), 2) : 0.0;
    };
    StationarityReport rep;
    std::vector<double> q(c.size()), xi(c.size());
    for (int trial = 0; trial < trials; ++trial) {
        const double centre = 0.1 + 0.8 * unit(rng), width = 0.03 + 0.1 * unit(rng);
        const double amp = 0.1 * (2.0 * unit(rng) - 1.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double b = bump(p.s[i], centre, width);
            q[i] = std::clamp(p.r[i] + amp * b * (1.0 - p.r[i]), eps, 1.0);
            xi[i] = amp * b;
        }
        q.front() = p.r.front();
        q.back() = p.r.back();
        xi.front() = xi.back() = 0.0;
        rep.worst_radial = std::min(rep.worst_radial, first_variation_radial(c, q, eps));
        rep.worst_angular = std::max(rep.worst_angular, std::abs(first_variation_angular(c, xi)));
        ++rep.trials;
    }
    return rep;
}

} // namespace brachi
