#include "brachi/strong.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace brachi;

// Reference values from tests/reference/strong_reference.py (30-digit raw-integrand quadrature).
struct StrongRef {
    double D, r_c, max_angle, tof;
};

static const StrongRef kRefs[] = {
    {0.23, 0.5786966010190483, 1.0517174726117102, 2.8836553229019188},
    {0.125, 0.5, 1.2107342759382043, 2.9768633336785854},
    {0.0204, 0.30494801884415268, 1.5768223868680088, 3.1011680686659943},
    {1e-3, 0.12070400939272903, 1.8956797844178541, 3.1380784596365794},
    {10.0, 0.95627600995885809, 0.13310509594309618, 1.2590508040123708},
};

TEST(CriticalRadius, ReferenceValues) {
    for (const auto& ref : kRefs) EXPECT_NEAR(critical_radius(ref.D), ref.r_c, 1e-13) << ref.D;
}

TEST(CriticalRadius, IsRootAndRoundTrips) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> logd(std::log(1e-8), std::log(1e4));
    for (int i = 0; i < 200; ++i) {
        const double D = std::exp(logd(rng));
        const double r = critical_radius(D);
        ASSERT_GT(r, 0.0);
        ASSERT_LT(r, 1.0);
        EXPECT_NEAR(r * r * r + 2 * D * r - 2 * D, 0.0, 1e-13 * (1 + D));
        EXPECT_NEAR(d_from_rc(r), D, 1e-9 * D);
    }
}

TEST(CriticalRadius, RejectsNonPositiveD) {
    for (double D : {0.0, -1.0, std::nan("")}) {
        try {
            critical_radius(D);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::NonPositiveD);
        }
    }
    EXPECT_THROW(max_angle(0.0), Error);
    EXPECT_THROW(d_from_rc(1.0), Error);
}

TEST(MaxAngle, ReferenceValues) {
    for (const auto& ref : kRefs) EXPECT_NEAR(max_angle(ref.D), ref.max_angle, 1e-9) << ref.D;
}

TEST(MaxAngle, StrictlyDecreasingAndInsideSector) {
    double prev = two_thirds_pi;
    for (double logd = -8.0; logd <= 3.0; logd += 0.25) {
        const double a = max_angle(std::pow(10.0, logd));
        EXPECT_LT(a, prev);
        EXPECT_GT(a, 0.0);
        prev = a;
    }
    EXPECT_GT(max_angle(1e-8), two_thirds_pi - 5e-3);
    EXPECT_LT(max_angle(1e3), 2e-3);
}

TEST(Tof, ReferenceValues) {
    for (const auto& ref : kRefs) {
        EXPECT_NEAR(tof_strong(make_strong(ref.D)).value, ref.tof, 1e-9) << ref.D;
    }
}

TEST(Descent, PartialIntegralsMatchReference) {
    EXPECT_NEAR(descent_angle(0.0204, 0.5), 0.14000112936283364, 1e-10);
    EXPECT_NEAR(descent_angle(0.23, 0.8), 0.059511706642753802, 1e-10);
    EXPECT_NEAR(descent_time(0.23, 0.8), 0.88435307868077946, 1e-10);
}

TEST(Descent, ProfileAgreesWithPointwiseCalls) {
    const double D = 0.07;
    const double rc = critical_radius(D);
    std::vector<double> radii = {0.95, rc, 0.6, 1.0, 0.75, rc + 1e-4};
    const auto prof = descent_profile(D, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        EXPECT_NEAR(prof[i].angle, descent_angle(D, radii[i]), 1e-10);
        EXPECT_NEAR(prof[i].time, descent_time(D, radii[i]), 1e-10);
    }
    EXPECT_EQ(prof[3].angle, 0.0);
}

TEST(ThetaOfR, HalvesAreMirrorImages) {
    const auto sol = make_strong(0.23);
    EXPECT_NEAR(theta_of_r(sol, 1.0, Half::Descending), 0.0, 1e-14);
    EXPECT_NEAR(theta_of_r(sol, 1.0, Half::Ascending), sol.theta_f, 1e-9);
    const double apex = theta_of_r(sol, sol.r_c, Half::Descending);
    EXPECT_NEAR(apex, sol.theta_f / 2, 1e-10);
    for (double r : {0.6, 0.7, 0.9}) {
        EXPECT_NEAR(theta_of_r(sol, r, Half::Descending) + theta_of_r(sol, r, Half::Ascending), sol.theta_f, 1e-10);
    }
    const auto neg = make_strong(0.23, -1);
    EXPECT_NEAR(theta_of_r(neg, 0.7, Half::Descending), -theta_of_r(sol, 0.7, Half::Descending), 1e-15);
    try {
        theta_of_r(sol, sol.r_c - 1e-3, Half::Descending);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
    }
}

TEST(Shoot, SixtyDegrees) {
    const auto sol = shoot(pi / 3);
    EXPECT_NEAR(sol.D, 0.23382113390263894, 1e-8);
    EXPECT_NEAR(sol.r_c, 0.58087782630720894, 1e-8);
    EXPECT_NEAR(tof_strong(sol).value, 2.8805770953904598, 1e-8);
    EXPECT_EQ(sol.branch, 1);
    EXPECT_DOUBLE_EQ(sol.theta_f, pi / 3);
}

TEST(Shoot, RoundTripAndBranches) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> th(0.05, two_thirds_pi - 0.01);
    for (int i = 0; i < 20; ++i) {
        const double t = th(rng);
        const auto sol = shoot(i % 2 ? -t : t);
        EXPECT_NEAR(max_angle(sol.D), t, 1e-8);
        EXPECT_EQ(sol.branch, i % 2 ? -1 : 1);
    }
}

TEST(Shoot, NearSectorBoundaryAndOutside) {
    const auto sol = shoot(two_thirds_pi - 1e-3);
    EXPECT_LT(sol.D, 1e-8);
    EXPECT_NEAR(max_angle(sol.D), two_thirds_pi - 1e-3, 1e-8);
    for (double t : {two_thirds_pi, 2.5, -3.0}) {
        try {
            shoot(t);
            FAIL() << t;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::OutOfSector);
        }
    }
}

TEST(Sample, EndpointsRadiiAndTimes) {
    const auto sol = shoot(pi / 3);
    const auto c = sample_strong(sol, 401);
    ASSERT_EQ(c.size(), 401u);
    EXPECT_EQ(c.front().point, (CartPoint{1.0, 0.0}));
    EXPECT_NEAR(c.back().point.x, 0.5, 1e-15);
    EXPECT_NEAR(c.back().point.y, std::sqrt(3.0) / 2, 1e-15);
    EXPECT_NEAR(c[200].point.norm(), sol.r_c, 1e-14);
    EXPECT_NEAR(c.total_time(), tof_strong(sol).value, 1e-12);
    for (std::size_t i = 1; i < c.size(); ++i) EXPECT_GT(c[i].t_cum, c[i - 1].t_cum);
    // polyline time converges to the analytic time
    EXPECT_NEAR(tof_sampled(c).value, c.total_time(), 1e-4);
    EXPECT_THROW(sample_strong(sol, 2), Error);
}

TEST(Sample, PolylineTimeConvergesFromAbove) {
    const auto sol = shoot(1.0);
    const double exact = tof_strong(sol).value;
    const double e1 = tof_sampled(sample_strong(sol, 201)).value - exact;
    const double e2 = tof_sampled(sample_strong(sol, 401)).value - exact;
    EXPECT_GT(e1, 0.0);  // no polyline beats the optimum
    EXPECT_GT(e2, 0.0);
    // samples uniform in r crowd out the apex, where theta ~ sqrt(r - r_c): order 3/2
    EXPECT_GT(e1 / e2, 2.5);
}

TEST(Tof, LimitsAndSampledAgreement) {
    EXPECT_NEAR(tof_strong(make_strong(1e-8)).value, pi, 1e-2);
    const auto sol = make_strong(0.23);
    EXPECT_NEAR(tof_sampled(sample_strong(sol, 10000)).value, tof_strong(sol).value, 1e-3);
    EXPECT_EQ(tof_strong(make_strong(0.23, -1)).value, tof_strong(sol).value);
}

TEST(CriticalRadius, SpecExamples) {
    EXPECT_NEAR(critical_radius(0.125), 0.5, 1e-14);
    EXPECT_NEAR(critical_radius(0.23), 0.5787, 1e-4);
    EXPECT_LT(critical_radius(1e-12), 1e-3);
    EXPECT_GT(d_from_rc(1 - 1e-7), 1e6);
    EXPECT_NEAR(critical_radius(d_from_rc(0.3)), 0.3, 1e-10);
}

TEST(Sample, NeverEntersSector) {
    for (double logd = -8.0; logd <= 2.0; logd += 0.5) {
        for (int branch : {1, -1}) {
            const auto c = sample_strong(make_strong(std::pow(10.0, logd), branch), 301);
            for (const auto& smp : c.samples) {
                EXPECT_LE(std::abs(std::atan2(smp.point.y, smp.point.x)), two_thirds_pi + 1e-6);
            }
        }
    }
}

TEST(ThetaOfR, SlopeBlowsUpAtApex) {
    for (double D : {1e-3, 0.0204, 0.23, 10.0}) {
        const auto sol = make_strong(D);
        const double r = sol.r_c + 1e-6;
        const double h = 1e-8;
        const double slope = (theta_of_r(sol, r + h, Half::Descending) - theta_of_r(sol, r - h, Half::Descending)) / (2 * h);
        EXPECT_GT(std::abs(slope), 1e2) << D;
    }
}
