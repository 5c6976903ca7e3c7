#include <cmath>

#include <gtest/gtest.h>

#include "enclosure/grid.hpp"

using namespace enclosure;

TEST(Grid, UnitCubeCounts) {
    const Grid g = build_grid(DomainSpec::box(3, Vec3::Zero(), Vec3::Ones()), 16);
    EXPECT_EQ(g.size(), 16u * 16u * 16u);
    EXPECT_EQ(g.boundary_count(), 16u * 16u * 16u - 14u * 14u * 14u);
    EXPECT_EQ(g.dof_count(), g.size());
}

TEST(Grid, BallSurfaceWeights) {
    const Grid g = build_grid(DomainSpec::ball(3, Vec3::Zero(), 1.0), 64);
    double area = 0.0;
    for (std::size_t b = 0; b < g.boundary_count(); ++b) area += g.surface_weight(b);
    EXPECT_NEAR(area, 4.0 * kPi, 0.02 * 4.0 * kPi);
}

TEST(Grid, SquarePerimeter) {
    const Grid g = build_grid(DomainSpec::box(2, Vec3::Zero(), Vec3(1, 1, 0)), 32);
    double len = 0.0;
    for (std::size_t b = 0; b < g.boundary_count(); ++b) len += g.surface_weight(b);
    EXPECT_NEAR(len, 4.0, 0.04);
}

TEST(Grid, VolumeWeightsSumToVolume) {
    const DomainSpec d = DomainSpec::box(3, Vec3(-1, -1, -1), Vec3(1, 1, 1));
    const Grid g = build_grid(d, 12);
    double vol = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) vol += g.volume_weight(n);
    EXPECT_NEAR(vol, d.volume(), 1e-12);
}

TEST(Grid, NormalsPointOutward) {
    const Grid g = build_grid(DomainSpec::box(2, Vec3(-1, -1, 0), Vec3(1, 1, 0)), 9);
    for (std::size_t b = 0; b < g.boundary_count(); ++b) {
        const Vec3 x = g.point(g.boundary_nodes()[b]);
        EXPECT_GT(g.normal(b).dot(x), 0.0);
        EXPECT_NEAR(g.normal(b).norm(), 1.0, 1e-12);
    }
}

TEST(Shape, ChiBall) {
    const Vec3 c(0.1, -0.2, 0.3);
    const double rho = 0.4;
    const ObstacleShape s = ObstacleShape::ball(c, rho);
    const Vec3 x0(3.0, 0.0, 0.0);
    EXPECT_EQ(chi_D(c, s), 1);
    EXPECT_EQ(chi_D(c + Vec3(2 * rho, 0, 0), s), 0);
    EXPECT_EQ(chi_D(c + (x0 - c).normalized() * rho * (1 - 1e-9), s), 1);
    EXPECT_EQ(chi_D(c, ObstacleShape::empty()), 0);
}

TEST(Shape, EllipsoidContainment) {
    const ObstacleShape e = ObstacleShape::ellipsoid(Vec3::Zero(), Vec3(0.5, 0.2, 0.1));
    EXPECT_TRUE(e.contains(Vec3(0.49, 0, 0)));
    EXPECT_FALSE(e.contains(Vec3(0, 0.21, 0)));
    EXPECT_NEAR(e.measure(3), 4.0 / 3.0 * kPi * 0.5 * 0.2 * 0.1, 1e-14);
}

// brute-force minimum over a dense sampling of the sphere
double brute_log_distance(const Vec3& c, double rho, const Vec3& x0) {
    double best = 1e300;
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
        const double th = kPi * i / n;
        for (int j = 0; j < 2 * n; ++j) {
            const double ph = kPi * j / n;
            const Vec3 x = c + rho * Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
            best = std::min(best, (x - x0).norm());
        }
    }
    return std::log(best);
}

TEST(Shape, SupportLogDistanceBall) {
    const DomainSpec d = DomainSpec::box(3, Vec3(-1, -1, -1), Vec3(1, 1, 1));
    const Vec3 c(0.2, -0.1, 0.05), x0(1.7, 1.1, -0.6);
    const double rho = 0.3;
    const double got = support_log_distance(ObstacleShape::ball(c, rho), x0, d);
    EXPECT_NEAR(got, std::log((c - x0).norm() - rho), 1e-12);
    EXPECT_NEAR(got, brute_log_distance(c, rho, x0), 1e-4);
}

TEST(Shape, SupportLogDistanceUnionAndPointLimit) {
    const DomainSpec d = DomainSpec::box(3, Vec3(-1, -1, -1), Vec3(1, 1, 1));
    const Vec3 x0(2.0, 0.5, 0.0);
    const Ball a{Vec3(0.5, 0, 0), 0.2}, b{Vec3(-0.5, 0.3, 0), 0.3};
    const double ua = support_log_distance(ObstacleShape::ball(a.center, a.radius), x0, d);
    const double ub = support_log_distance(ObstacleShape::ball(b.center, b.radius), x0, d);
    EXPECT_DOUBLE_EQ(support_log_distance(ObstacleShape::union_of_balls({a, b}), x0, d), std::min(ua, ub));
    EXPECT_NEAR(support_log_distance(ObstacleShape::ball(a.center, 1e-12), x0, d), std::log((a.center - x0).norm()),
                1e-10);
}

TEST(Shape, ProbeInsideHullRejected) {
    const DomainSpec d = DomainSpec::box(3, Vec3(-1, -1, -1), Vec3(1, 1, 1));
    EXPECT_THROW(support_log_distance(ObstacleShape::ball(Vec3::Zero(), 0.2), Vec3(0.9, 0, 0), d), ValidationError);
}

TEST(Shape, ObstacleTouchingBoundaryRejected) {
    const Grid g = build_grid(DomainSpec::box(2, Vec3(-1, -1, 0), Vec3(1, 1, 0)), 33);
    EXPECT_THROW(validate_obstacle(ObstacleShape::ball(Vec3(0.8, 0, 0), 0.3), g), ValidationError);
    EXPECT_NO_THROW(validate_obstacle(ObstacleShape::ball(Vec3::Zero(), 0.5), g));
}
