#pragma once

// Discrete shortest-time paths on a polar grid: Dijkstra over straight-chord edges whose
// weights are travel times. Grid paths are admissible curves, so the labels are upper
// bounds for the true minimal time.

#include "brachi/error.hpp"
#include "brachi/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>
#include <vector>

namespace brachi {

namespace detail {

// 5-point Gauss-Legendre on [-1, 1].
inline constexpr std::array<double, 5> gl5_x = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                                0.5384693101056831, 0.9061798459386640};
inline constexpr std::array<double, 5> gl5_w = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                                0.4786286704993665, 0.2369268850561891};

inline double slowness(double r) { return r <= 0.0 ? 0.0 : std::sqrt(r / std::max(1.0 - r, 0.0)); }

// 5-point Gauss on [a, b], bisected until the two halves agree with the whole.
template <class F>
double adaptive_gl5(const F& f, double a, double b, double whole, int depth) {
    auto panel = [&](double lo, double hi) {
        double sum = 0.0;
        for (std::size_t k = 0; k < 5; ++k) sum += gl5_w[k] * f(lo + 0.5 * (hi - lo) * (gl5_x[k] + 1.0));
        return 0.5 * (hi - lo) * sum;
    };
    const double mid = 0.5 * (a + b);
    const double left = panel(a, mid), right = panel(mid, b);
    if (depth <= 0 || std::abs(left + right - whole) <= 1e-11 * std::abs(left + right) + 1e-15) return left + right;
    return adaptive_gl5(f, a, mid, left, depth - 1) + adaptive_gl5(f, mid, b, right, depth - 1);
}

// Time along p + t u for t in [a, b]. When an end sits near the release circle,
// t = end -/+ (b - a) v^2 absorbs the inverse square root there.
inline double chord_piece_time(CartPoint p, CartPoint u, double a, double b) {
    if (b <= a) return 0.0;
    auto r_at = [&](double t) { return (p + t * u).norm(); };
    const double ra = r_at(a), rb = r_at(b);
    const double len = b - a;
    std::function<double(double)> f;
    if (std::max(ra, rb) >= 0.9) {
        const bool at_b = rb >= ra;
        f = [&, at_b](double v) {
            const double t = at_b ? b - len * v * v : a + len * v * v;
            const double r = std::min(r_at(t), 1.0);
            const double one_minus = 1.0 - r;
            return one_minus > 0.0 ? std::sqrt(r / one_minus) * 2.0 * len * v : 0.0;
        };
    } else {
        f = [&](double v) { return len * slowness(r_at(a + len * v)); };
    }
    double whole = 0.0;
    for (std::size_t k = 0; k < 5; ++k) whole += 0.5 * gl5_w[k] * f(0.5 * (gl5_x[k] + 1.0));
    return adaptive_gl5(f, 0.0, 1.0, whole, 30);
}

} // namespace detail

/// Straight-chord travel time with 5-point Gauss on each side of the closest approach.
inline double edge_time(CartPoint p, CartPoint q) {
    const double rp = p.norm(), rq = q.norm();
    if (rp > 1.0 + 1e-12 || rq > 1.0 + 1e-12) fail(ErrorCode::OutsideDomain, "edge endpoint outside the disk");
    const double len = distance(p, q);
    if (len == 0.0) return 0.0;
    if (rp >= 1.0 - 1e-12 && rq >= 1.0 - 1e-12) fail(ErrorCode::OutsideDomain, "edge runs along the release circle");
    const CartPoint u = (1.0 / len) * (q - p);
    const double t_star = std::clamp(-dot(p, u), 0.0, len);
    return detail::chord_piece_time(p, u, 0.0, t_star) + detail::chord_piece_time(p, u, t_star, len);
}

/// Closest approach of the chord pq to the origin.
inline double chord_clearance(CartPoint p, CartPoint q) {
    const CartPoint d = q - p;
    const double len2 = dot(d, d);
    if (len2 == 0.0) return p.norm();
    const double w = std::clamp(-dot(p, d) / len2, 0.0, 1.0);
    return (p + w * d).norm();
}

enum class Stencil {
    PhysicalReach,  // coprime offsets with chord length <= reach_factor sqrt(n_r / 100) max(dr, r dtheta)
    Sixteen,        // 8-neighbourhood plus knight moves, in index space
};

struct GridGraph {
    struct Offset {
        int di;
        int dj;
        double time;
    };

    int n_r = 0;
    int n_theta = 0;
    double epsilon = 0.0;
    double r_min = 0.0;  // for epsilon = 0: nodes below this collapse into the origin node
    Stencil stencil = Stencil::PhysicalReach;
    double reach_factor = 4.0;
    double reach_scale = 4.0;  // reach_factor grown with resolution so the direction set refines too
    double dr = 0.0;
    double dtheta = 0.0;
    int first_ring = 0;
    std::vector<double> radii;
    std::vector<std::vector<Offset>> ring_edges;  // rotation-invariant out-edges per ring
    std::vector<std::pair<int, double>> origin_links;  // (ring, radial time) for the origin node

    bool has_origin() const { return epsilon == 0.0; }
    std::size_t node_count() const { return static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_theta); }
    std::size_t id(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_theta) + static_cast<std::size_t>(j);
    }
    double theta(int j) const { return dtheta * j; }
    CartPoint point(int i, int j) const { return to_cartesian({radii[i], theta(j)}); }
    double reach(double r) const { return reach_scale * std::max(dr, r * dtheta); }
};

namespace detail {

inline bool edge_admissible(const GridGraph& g, CartPoint p, CartPoint q) {
    return g.epsilon == 0.0 || chord_clearance(p, q) >= g.epsilon - 1e-12;
}

inline std::vector<std::pair<int, int>> index_offsets(const GridGraph& g, int i) {
    std::vector<std::pair<int, int>> out;
    if (g.stencil == Stencil::Sixteen) {
        for (int di = -2; di <= 2; ++di) {
            for (int dj = -2; dj <= 2; ++dj) {
                if (di == 0 && dj == 0) continue;
                if (std::abs(di) == 2 && std::abs(dj) != 1) continue;
                if (std::abs(dj) == 2 && std::abs(di) != 1) continue;
                out.emplace_back(di, dj);
            }
        }
        return out;
    }
    const double r_hi = std::min(1.0, g.radii[i] + g.reach(1.0));
    const double reach = g.reach(r_hi);
    const int max_di = static_cast<int>(reach / g.dr) + 1;
    for (int di = -max_di; di <= max_di; ++di) {
        const int k = i + di;
        if (k < g.first_ring || k >= g.n_r) continue;
        const double r_max = std::max(g.radii[i], g.radii[k]);
        const double lim = g.reach(r_max);
        const double r_small = std::max(std::min(g.radii[i], g.radii[k]), 1e-12);
        const int max_dj = std::min(g.n_theta / 2, static_cast<int>(lim / (r_small * g.dtheta)) + 1);
        for (int dj = -max_dj; dj <= max_dj; ++dj) {
            if (di == 0 && dj == 0) continue;
            if (std::gcd(std::abs(di), std::abs(dj)) != 1) continue;
            out.emplace_back(di, dj);
        }
    }
    return out;
}

} // namespace detail

/// Builds the grid graph. Rings: eps + i h with h = (1 - eps) / (n_r - 1/2), so the outermost
/// ring sits half a step below the release circle; angles 2 pi j / n_theta.
inline GridGraph make_grid(double eps, int n_r, int n_theta, Stencil stencil = Stencil::PhysicalReach,
                           double reach_factor = 4.0) {
    if (!(eps >= 0.0 && eps < 1.0)) fail(ErrorCode::OutOfRange, "epsilon must lie in [0, 1)");
    if (n_r < 4 || n_theta < 8) fail(ErrorCode::InvalidArgument, "grid too small");
    GridGraph g;
    g.n_r = n_r;
    g.n_theta = n_theta;
    g.epsilon = eps;
    g.stencil = stencil;
    g.reach_factor = reach_factor;
    g.reach_scale = stencil == Stencil::PhysicalReach ? reach_factor * std::sqrt(n_r / 100.0) : 3.0;
    g.dr = (1.0 - eps) / (n_r - 0.5);
    g.dtheta = 2.0 * pi / n_theta;
    g.radii.resize(n_r);
    for (int i = 0; i < n_r; ++i) g.radii[i] = eps + i * g.dr;
    if (eps == 0.0) {
        g.r_min = std::max(0.01, 2.0 / n_r);
        while (g.first_ring < n_r && g.radii[g.first_ring] < g.r_min) ++g.first_ring;
        for (int i = g.first_ring; i < n_r && g.radii[i] <= g.r_min + 2.0 * g.dr; ++i) {
            g.origin_links.emplace_back(i, radial_fall_primitive(g.radii[i]));
        }
    }
    g.ring_edges.resize(n_r);
    for (int i = g.first_ring; i < n_r; ++i) {
        const CartPoint p = g.point(i, 0);
        for (auto [di, dj] : detail::index_offsets(g, i)) {
            const int k = i + di;
            if (k < g.first_ring || k >= n_r) continue;
            const CartPoint q = g.point(k, dj);
            if (stencil == Stencil::PhysicalReach && distance(p, q) > g.reach(std::max(g.radii[i], g.radii[k]))) continue;
            if (!detail::edge_admissible(g, p, q)) continue;
            g.ring_edges[i].push_back({di, dj, 0.0});
        }
        // time depends on |dj| only; compute once per pair so mirrored edges are bit-identical
        for (auto& e : g.ring_edges[i]) e.time = edge_time(p, g.point(i + e.di, std::abs(e.dj)));
    }
    return g;
}

/// Labels of a single-source shortest-time search from (1, 0).
struct OracleField {
    const GridGraph* grid = nullptr;
    std::vector<double> label;
    double origin_label = std::numeric_limits<double>::infinity();
};

namespace detail {

// Grid nodes within the stencil reach of an off-grid point, with admissible edge times.
inline void for_each_link(const GridGraph& g, CartPoint x, const std::function<void(int, int, double)>& fn) {
    const double rx = x.norm();
    const double reach = g.reach(std::min(1.0, rx + g.reach(1.0)));
    const int i_lo = std::max(g.first_ring, static_cast<int>(std::floor((rx - reach - g.epsilon) / g.dr)));
    const int i_hi = std::min(g.n_r - 1, static_cast<int>(std::ceil((rx + reach - g.epsilon) / g.dr)));
    const double th = std::atan2(x.y, x.x);
    for (int i = i_lo; i <= i_hi; ++i) {
        const double ri = g.radii[i];
        if (ri <= 0.0) continue;
        const double span = std::min(pi, reach / std::max(std::min(ri, rx), 1e-12) + g.dtheta);
        const int j_lo = static_cast<int>(std::floor((th - span) / g.dtheta));
        const int j_hi = static_cast<int>(std::ceil((th + span) / g.dtheta));
        for (int jj = j_lo; jj <= j_hi && jj - j_lo < g.n_theta; ++jj) {
            const int j = ((jj % g.n_theta) + g.n_theta) % g.n_theta;
            const CartPoint q = g.point(i, j);
            if (distance(x, q) > reach) continue;
            if (!edge_admissible(g, x, q)) continue;
            fn(i, j, edge_time(x, q));
        }
    }
}

} // namespace detail

/// Dijkstra from the release point over the whole grid. The field keeps a pointer to g.
inline OracleField solve_oracle(const GridGraph& g) {
    OracleField f;
    f.grid = &g;
    const std::size_t n = g.node_count();
    const std::size_t origin = n;
    f.label.assign(n, std::numeric_limits<double>::infinity());
    std::vector<double> dist(n + 1, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

    detail::for_each_link(g, {1.0, 0.0}, [&](int i, int j, double t) {
        const std::size_t v = g.id(i, j);
        if (t < dist[v]) {
            dist[v] = t;
            heap.emplace(t, v);
        }
    });

    // reverse lookup for origin links
    std::vector<double> origin_time(g.n_r, -1.0);
    for (auto [ring, t] : g.origin_links) origin_time[ring] = t;

    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        if (v == origin) {
            for (auto [ring, t] : g.origin_links) {
                for (int j = 0; j < g.n_theta; ++j) {
                    const std::size_t w = g.id(ring, j);
                    if (d + t < dist[w]) {
                        dist[w] = d + t;
                        heap.emplace(dist[w], w);
                    }
                }
            }
            continue;
        }
        const int i = static_cast<int>(v / g.n_theta);
        const int j = static_cast<int>(v % g.n_theta);
        for (const auto& e : g.ring_edges[i]) {
            int jj = j + e.dj;
            if (jj < 0) jj += g.n_theta;
            else if (jj >= g.n_theta) jj -= g.n_theta;
            const std::size_t w = g.id(i + e.di, jj);
            const double nd = d + e.time;
            if (nd < dist[w]) {
                dist[w] = nd;
                heap.emplace(nd, w);
            }
        }
        if (origin_time[i] >= 0.0 && d + origin_time[i] < dist[origin]) {
            dist[origin] = d + origin_time[i];
            heap.emplace(dist[origin], origin);
        }
    }
    std::copy(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(n), f.label.begin());
    f.origin_label = dist[origin];
    return f;
}

/// Minimal time to an arbitrary point: the target is joined to every grid node within reach
/// (no snapping, so the value stays an upper bound).
OracleField solve_oracle(GridGraph&&) = delete;

inline TimeOfFlight query(const OracleField& f, PolarPoint target) {
    const GridGraph& g = *f.grid;
    if (target.r > 1.0 + 1e-12 || target.r < g.epsilon - 1e-12) fail(ErrorCode::OutsideDomain, "target outside the domain");
    const CartPoint x = to_cartesian(target);
    if (distance(x, {1.0, 0.0}) == 0.0) return {0.0};
    if (g.has_origin() && target.r < g.r_min) {
        return {f.origin_label + radial_fall_primitive(target.r)};
    }
    double best = std::numeric_limits<double>::infinity();
    detail::for_each_link(g, x, [&](int i, int j, double t) { best = std::min(best, f.label[g.id(i, j)] + t); });
    if (!std::isfinite(best)) fail(ErrorCode::Unreachable, "no grid node reaches the target");
    return {best};
}

inline TimeOfFlight oracle_min_time(const GridGraph& g, PolarPoint target) { return query(solve_oracle(g), target); }

} // namespace brachi
