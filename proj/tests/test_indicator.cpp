#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace enclosure;
using enclosure::testing::BallSetup;

namespace {

struct Case {
    BallSetup s;
    ProbeSetup p;
    AmplitudeSet amps;
    double hD;
    explicit Case(int dim, int res, const Vec3& x0) : s(dim, res), p(s.probe(x0)), amps(s.amplitudes(p)), hD(s.h_D(x0)) {}
    IndicatorSample at(double h, double dt, IndicatorRoute r = IndicatorRoute::Reflected) const {
        return sample_indicator(*s.background, *s.medium_op, amps, p, h, hD + dt, r);
    }
};

Case& case2d() {
    static Case c(2, 48, Vec3(2.5, 0, 0));
    return c;
}

} // namespace

TEST(PairDtn, ZeroTrace) {
    const Grid g = build_grid(DomainSpec::box(2, Vec3(-1, -1, 0), Vec3(1, 1, 0)), 9);
    const std::size_t nb = g.boundary_count();
    const DtNTrace z{CVector::Zero(nb), CVector::Zero(nb)};
    const NavierData f{CVector::Ones(nb), CVector::Ones(nb)};
    EXPECT_EQ(pair_dtn(z, f, g), cplx(0.0));
}

TEST(PairDtn, LinearFieldAgainstOwnTraces) {
    auto g = std::make_shared<const Grid>(build_grid(DomainSpec::box(2, Vec3(-1, -1, 0), Vec3(1, 1, 0)), 17));
    NavierData f{CVector(g->boundary_count()), CVector::Zero(g->boundary_count())};
    for (std::size_t b = 0; b < g->boundary_count(); ++b) f.f1[b] = g->point(g->boundary_nodes()[b])[0];
    const NavierSolution u = solve_navier(g, MediumSpec::background(0.0), f);
    EXPECT_NEAR(std::abs(pair_dtn(extract_dtn(*g, u), f, *g)), 0.0, 1e-8);
}

TEST(PairDtn, ConjugateLinearInData) {
    const Grid g = build_grid(DomainSpec::box(2, Vec3(-1, -1, 0), Vec3(1, 1, 0)), 9);
    const std::size_t nb = g.boundary_count();
    const DtNTrace t{CVector::Random(nb), CVector::Random(nb)};
    const NavierData f{CVector::Random(nb), CVector::Random(nb)};
    const cplx c(0.3, -2.0);
    const NavierData cf{c * f.f1, c * f.f2};
    EXPECT_NEAR(std::abs(pair_dtn(t, cf, g) - std::conj(c) * pair_dtn(t, f, g)), 0.0, 1e-12);
}

TEST(Indicator, EmptyObstacleIsZero) {
    BallSetup s(2, 32);
    const NavierOperator empty(s.grid, MediumSpec::background(2.0));
    const ProbeSetup p = s.probe(Vec3(2.5, 0, 0));
    const AmplitudeSet a = s.amplitudes(p);
    for (auto route : {IndicatorRoute::Reflected, IndicatorRoute::Direct}) {
        const IndicatorSample r = sample_indicator(*s.background, empty, a, p, 0.1, 0.5, route);
        EXPECT_LE(std::abs(r.value), 1e-10 * std::exp(2 * (0.5 - std::log(1.5)) / 0.1));
        EXPECT_EQ(r.value_volume_oracle, cplx(0.0));
    }
}

TEST(Indicator, TShiftExact) {
    const Case& c = case2d();
    for (double h : {0.2, 0.08}) {
        const cplx a = c.at(h, 0.1).value, b = c.at(h, -0.05).value;
        EXPECT_LE(std::abs(a - std::exp(2 * 0.15 / h) * b), 1e-10 * std::abs(a));
    }
}

TEST(Indicator, BoundaryMatchesVolume) {
    const Case& c = case2d();
    for (double h : {0.2, 0.1, 0.05}) {
        const IndicatorSample r = c.at(h, 0.0);
        EXPECT_LE(std::abs(r.value - r.value_volume_oracle), 0.01 * std::abs(r.value));
    }
}

TEST(Indicator, RoutesAgree) {
    const Case& c = case2d();
    const cplx a = c.at(0.1, 0.0).value, b = c.at(0.1, 0.0, IndicatorRoute::Direct).value;
    EXPECT_LE(std::abs(a - b), 1e-8 * std::abs(a));
}

TEST(Indicator, BoundaryMatchesVolume3D) {
    const Case c(3, 16, Vec3(2.5, 0, 0));
    const IndicatorSample r = c.at(0.15, 0.0);
    EXPECT_LE(std::abs(r.value - r.value_volume_oracle), 0.01 * std::abs(r.value));
    EXPECT_GT(r.iterations, 0);
}

TEST(Indicator, FirstOrderTermInOracle) {
    BallSetup s(2, 40);
    MediumSpec m = s.medium;
    m.A_D = {cplx(0.4, 0.2), cplx(-0.3, 0.0), cplx(0.0)};
    const NavierOperator with_A(s.grid, m);
    const ProbeSetup p = s.probe(Vec3(2.5, 0, 0));
    const AmplitudeSet a = s.amplitudes(p);
    const IndicatorSample r = sample_indicator(*s.background, with_A, a, p, 0.1, s.h_D(p.x0));
    const IndicatorSample r0 = sample_indicator(*s.background, *s.medium_op, a, p, 0.1, s.h_D(p.x0));
    EXPECT_LE(std::abs(r.value - r.value_volume_oracle), 1e-8 * std::abs(r.value));
    EXPECT_GT(std::abs(r.value - r0.value), 1e-6 * std::abs(r0.value));
}

TEST(Indicator, DecaysBelowSupport) {
    const Case& c = case2d();
    std::vector<double> x, y;
    for (double h : {0.2, 0.15, 0.1, 0.075}) {
        x.push_back(1.0 / h);
        y.push_back(std::log(std::abs(c.at(h, -0.2).value)));
    }
    EXPECT_LT(enclosure::testing::fit_slope(x, y), -0.2);
}

// |∇v|² = 2|v|²/(h²|x − x0|²) for the leading term; the gradient norm grows
// like 1/h² against the shrinking volume factor.
TEST(NormDiagnostics, ScalingWithH) {
    const Case& c = case2d();
    double prev = 1e300;
    const double dmin = std::exp(c.hD), dmax = 3.5;
    for (double h : {0.2, 0.1, 0.05}) {
        PhaseSpec spec;
        spec.dim = 2;
        spec.x0 = c.p.x0;
        spec.w = c.p.w;
        spec.h = h;
        spec.t = c.hD;
        const CGOAnsatz an = build_probe(*c.s.background, spec, c.amps, 0);
        const NormDiagnostics d = cgo_norm_diagnostics(*c.s.grid, an, c.amps, c.s.medium.shape);
        EXPECT_LT(d.v_l2, prev);
        prev = d.v_l2;
        const double q = h * h * d.grad_l2 / d.v_l2;
        EXPECT_GT(q, 0.8 * 2.0 / (dmax * dmax));
        EXPECT_LT(q, 1.2 * 2.0 / (dmin * dmin));
        EXPECT_EQ(d.lap_vapp_l2, 0.0); // z^{-1/h} is harmonic
    }
}

TEST(IndicatorTable, NormalizeSortsAndRejectsDuplicates) {
    IndicatorTable t;
    IndicatorSample a, b;
    a.h = 0.1;
    b.h = 0.2;
    t.samples = {a, b};
    t.normalize();
    EXPECT_EQ(t.samples.front().h, 0.2);
    t.samples.push_back(a);
    EXPECT_THROW(t.normalize(), ValidationError);
}
