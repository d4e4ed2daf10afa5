#include "brachi/field.hpp"
#include "brachi/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace brachi;

namespace {

const ValueGrid& disk_coarse() {
    static const ValueGrid v = value_grid(0.0, 100, 200, 128);
    return v;
}

const ValueGrid& annulus_coarse() {
    static const ValueGrid v = value_grid(0.5, 100, 200, 128);
    return v;
}

template <class F>
void expect_error(ErrorCode code, F&& f) {
    try {
        f();
        FAIL() << "no error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code);
    }
}

} // namespace

TEST(ValueGrid, SpecialNodes) {
    const auto& v = disk_coarse();
    EXPECT_EQ(v.at(v.n_r - 1, v.n_theta / 2), 0.0);
    EXPECT_NEAR(v.at(0, 17), pi / 2, 1e-12);
    EXPECT_NEAR(v.at(1, 17), pi / 2, 1e-2);
    EXPECT_NEAR(v.at(v.n_r - 1, 0), pi, 1e-12);
}

TEST(ValueGrid, NonNegativeAndMirrorSymmetric) {
    for (const auto* v : {&disk_coarse(), &annulus_coarse()}) {
        for (int i = 0; i < v->n_r; ++i) {
            for (int j = 1; j < v->n_theta; ++j) {
                ASSERT_GE(v->at(i, j), 0.0);
                ASSERT_NEAR(v->at(i, j), v->at(i, v->n_theta - j), 1e-6);
            }
        }
    }
}

TEST(ValueGrid, WeakSectorIsClosedForm) {
    const auto& v = disk_coarse();
    for (int i = 0; i < v.n_r; ++i) {
        for (int j = 0; j < v.n_theta; ++j) {
            if (std::abs(v.angle(j)) < 2.2) continue;
            ASSERT_NEAR(v.at(i, j), pi / 2 + radial_fall_primitive(v.radius(i)), 1e-9);
            ASSERT_EQ(v.family[v.index(i, j)], Family::Weak);
        }
    }
}

TEST(ValueGrid, RimMatchesTheSolvers) {
    const auto& d = disk_coarse();
    const auto& a = annulus_coarse();
    for (int j : {120, 140, 160}) {
        const double th = d.angle(j);
        EXPECT_NEAR(d.at(d.n_r - 1, j), tof_strong(shoot(th)).value, 1e-5) << th;
        EXPECT_NEAR(a.at(a.n_r - 1, j), solve_constrained(0.5, {1.0, th}).time().value, 1e-5) << th;
    }
    EXPECT_NEAR(a.at(a.n_r - 1, 0), solve_constrained(0.5, {1.0, pi}).time().value, 1e-9);
    // obstacle ring
    EXPECT_NEAR(a.at(0, 10), solve_constrained(0.5, {0.5, a.angle(10)}).time().value, 1e-4);
}

TEST(ValueGrid, Families) {
    const auto& d = disk_coarse();
    const auto& a = annulus_coarse();
    auto fam = [](const ValueGrid& v, double r, double th) {
        const int i = static_cast<int>(std::lround((r - v.epsilon) / v.dr()));
        const int j = static_cast<int>(std::lround((th + pi) / v.dtheta()));
        return v.family[v.index(i, j)];
    };
    EXPECT_EQ(fam(d, 0.5, 2.6), Family::Weak);
    EXPECT_EQ(fam(d, 0.8, 0.8), Family::Strong);
    EXPECT_EQ(fam(a, 0.6, 2.6), Family::Constrained);
    EXPECT_EQ(fam(a, 0.9, 0.5), Family::Strong);
}

TEST(ValueGrid, LeavesAccumulateTimeMonotonically) {
    for (double eps : {0.0, 0.5}) {
        for (const auto& leaf : foliation_leaves(eps, 64, 201)) {
            for (std::size_t k = 1; k < leaf.curve.size(); ++k) ASSERT_GE(leaf.curve[k].t_cum, leaf.curve[k - 1].t_cum);
        }
    }
}

TEST(ValueGrid, AgreesWithTheOracle) {
    for (const auto* v : {&disk_coarse(), &annulus_coarse()}) {
        const auto g = make_grid(v->epsilon, 200, 400);
        const auto f = solve_oracle(g);
        for (int a = 0; a < 10; ++a) {
            for (int b = 0; b < 10; ++b) {
                const int i = 1 + (v->n_r - 2) * a / 10, j = v->n_theta * b / 10;
                const double o = query(f, {v->radius(i), v->angle(j)}).value;
                EXPECT_LE(std::abs(v->at(i, j) - o), 0.05 * o) << i << " " << j;
            }
        }
    }
}

TEST(ValueGrid, Errors) {
    expect_error(ErrorCode::InvalidArgument, [] { value_grid(0.0, 8, 100, 64); });
    expect_error(ErrorCode::InvalidArgument, [] { value_grid(0.0, 100, 100, 32); });
    expect_error(ErrorCode::OutOfRange, [] { value_grid(1.2, 100, 100, 64); });
    expect_error(ErrorCode::InsufficientCoverage, [] { value_grid(0.0, 400, 4000, 64); });
}

TEST(Eikonal, ResidualOnTheDisk) {
    const auto v = value_grid(0.0, 400, 800, 512);
    const auto res = eikonal_residual(v);
    EXPECT_LT(res.max_residual, 0.05);
    for (int i = 0; i < v.n_r; ++i) {
        const double r = v.radius(i);
        if (r > 0.2 && r < 0.8) EXPECT_LT(res.field[v.index(i, v.n_theta / 2)], 0.02) << r;
    }
    EXPECT_TRUE(std::isnan(res.field[v.index(5, 100)]));  // r < 0.1 is excluded
}

TEST(Eikonal, MoreCurvesDoNotHurt) {
    double prev = INFINITY;
    for (std::size_t n : {64, 128, 256}) {
        const double m = eikonal_residual(value_grid(0.0, 100, 200, n)).max_residual;
        EXPECT_LE(m, prev + 1e-3) << n;
        prev = m;
    }
}

TEST(Eikonal, GridTooCoarse) {
    expect_error(ErrorCode::GridTooCoarse, [] { eikonal_residual(value_grid(0.85, 16, 16, 64)); });
}

TEST(Orthogonality, StrongCurve) {
    const auto c = sample_strong(shoot(pi / 3), 401);
    const auto rep = orthogonality_check(disk_coarse(), std::span<const SampledCurve>(&c, 1));
    EXPECT_GT(rep.points, 100u);
    EXPECT_LT(rep.max_deviation_deg, 5.0);
}

TEST(Orthogonality, RadialCurve) {
    const auto c = solve_constrained(0.5, {0.5, 0.0}).curve;
    ASSERT_EQ(classify_terminal(0.5, {0.5, 0.0}), Regime::RadialR1);
    const auto rep = orthogonality_check(annulus_coarse(), std::span<const SampledCurve>(&c, 1));
    EXPECT_GT(rep.points, 10u);
    EXPECT_LT(rep.max_deviation_deg, 1.0);
}

TEST(Orthogonality, AnnulusFoliation) {
    std::vector<SampledCurve> curves;
    for (auto& leaf : foliation_leaves(0.5, 48, 401)) curves.push_back(std::move(leaf.curve));
    const auto rep = orthogonality_check(annulus_coarse(), curves);
    EXPECT_GT(rep.points, 1000u);
    EXPECT_LT(rep.max_deviation_deg, 5.0);
}
