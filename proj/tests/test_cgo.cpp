#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "enclosure/cgo.hpp"

using namespace enclosure;

namespace {

const DomainSpec kCube = DomainSpec::box(3, Vec3(-1, -1, -1), Vec3(1, 1, 1));
const DomainSpec kSquare = DomainSpec::box(2, Vec3(-1, -1, 0), Vec3(1, 1, 0));

PhaseSpec spec_for(const DomainSpec& d, const Vec3& x0) {
    PhaseSpec s;
    s.dim = d.dim;
    s.x0 = x0;
    s.w = default_direction(x0, d);
    return s;
}

ZGrid square_zgrid(int n, double half) {
    ZGrid g;
    g.ns = g.nr = n;
    g.ds = g.dr = 2.0 * half / n;
    g.s0 = g.r0 = -half + 0.5 * g.ds;
    return g;
}

} // namespace

TEST(Phase, Examples) {
    PhaseSpec s;
    s.x0 = Vec3(0.3, -0.2, 0.1);
    s.w = Vec3(0, 1, 0);
    const PhaseEval on_axis = eval_phase(s.x0 + s.w, s);
    EXPECT_NEAR(on_axis.phi, 0.0, 1e-15);
    EXPECT_NEAR(on_axis.psi, 0.0, 1e-7);
    EXPECT_NEAR(eval_phase(s.x0 + Vec3(0, 0, 2.5), s).psi, kPi / 2, 1e-15);
    EXPECT_NEAR(eval_phase(s.x0 + std::exp(1.0) * Vec3(1, 0, 0), s).phi, 1.0, 1e-15);
}

TEST(Phase, GradientsMatchDifferences) {
    PhaseSpec s;
    s.x0 = Vec3(2.0, 0.5, -0.3);
    s.w = Vec3(0.2, 0.9, 0.1).normalized();
    const Vec3 x(0.1, -0.4, 0.3);
    const PhaseEval e = eval_phase(x, s);
    const double d = 1e-5;
    double lap_phi = 0.0, lap_psi = 0.0;
    for (int a = 0; a < 3; ++a) {
        Vec3 dx = Vec3::Zero();
        dx[a] = d;
        const PhaseEval p = eval_phase(x + dx, s), m = eval_phase(x - dx, s);
        EXPECT_NEAR(e.grad_phi[a], (p.phi - m.phi) / (2 * d), 1e-8);
        EXPECT_NEAR(e.grad_psi[a], (p.psi - m.psi) / (2 * d), 1e-8);
        lap_phi += (p.phi - 2 * e.phi + m.phi) / (d * d);
        lap_psi += (p.psi - 2 * e.psi + m.psi) / (d * d);
    }
    EXPECT_NEAR(e.lap_phi, lap_phi, 1e-4);
    EXPECT_NEAR(e.lap_psi, lap_psi, 1e-4);
}

TEST(Phase, EikonalHoldsOnGrid) {
    for (const DomainSpec* d : {&kCube, &kSquare}) {
        const Grid g = build_grid(*d, 17);
        const EikonalReport r = verify_eikonal(spec_for(*d, Vec3(2.2, 0.7, d->dim == 3 ? 0.4 : 0.0)), g);
        EXPECT_LE(r.modulus_residual, 1e-10);
        EXPECT_LE(r.orthogonality_residual, 1e-10);
        EXPECT_FALSE(r.flagged);
    }
}

TEST(Phase, NonUnitDirectionFlagged) {
    const Grid g = build_grid(kCube, 13);
    PhaseSpec s = spec_for(kCube, Vec3(2.5, 0, 0));
    s.w *= 1.1;
    const EikonalReport r = verify_eikonal(s, g);
    EXPECT_GT(std::max(r.modulus_residual, r.orthogonality_residual), 1e-3);
    EXPECT_TRUE(r.flagged);
    EXPECT_THROW(validate_phase(s, g), ValidationError);
}

TEST(Phase, ValidationRejectsBadSpecs) {
    const Grid g = build_grid(kCube, 9);
    EXPECT_THROW(validate_phase(spec_for(kCube, Vec3(0.5, 0, 0)), g), ValidationError);
    PhaseSpec through = spec_for(kCube, Vec3(3, 0, 0));
    through.w = Vec3(-1, 0, 0); // axis passes through Ω
    EXPECT_THROW(validate_phase(through, g), ValidationError);
    EXPECT_NO_THROW(validate_phase(spec_for(kCube, Vec3(3, 0, 0)), g));
}

TEST(Cylindrical, Examples) {
    PhaseSpec s;
    s.x0 = Vec3::Zero();
    s.w = Vec3::UnitX();
    EXPECT_THROW(cylindrical_coords(Vec3(2, 0, 0), s, 1e-6), ValidationError);
    const Cylindrical c = cylindrical_coords(Vec3(1, 1, 0), s, 1e-6);
    EXPECT_NEAR(std::abs(c.z - cplx(1, 1)), 0.0, 1e-15);
    const PhaseEval e = eval_phase(Vec3(1, 1, 0), s);
    EXPECT_NEAR(e.phi, 0.5 * std::log(2.0), 1e-15);
    EXPECT_NEAR(e.psi, kPi / 4, 1e-15);
}

TEST(Cylindrical, LogMatchesPhaseOnGrid) {
    const Grid g = build_grid(kCube, 11);
    const PhaseSpec s = spec_for(kCube, Vec3(1.8, -1.4, 0.6));
    double worst = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) {
        const Cylindrical c = cylindrical_coords(g.point(n), s, 1e-9);
        const PhaseEval e = eval_phase(g.point(n), s);
        const cplx lz = std::log(c.z);
        worst = std::max({worst, std::abs(lz.real() - e.phi), std::abs(lz.imag() - e.psi)});
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(DefaultDirection, OrthogonalToCentroidDirection) {
    for (const DomainSpec* d : {&kCube, &kSquare}) {
        const Vec3 x0(1.9, -0.8, d->dim == 3 ? 1.1 : 0.0);
        const Vec3 w = default_direction(x0, *d);
        EXPECT_NEAR(w.norm(), 1.0, 1e-14);
        EXPECT_NEAR(w.dot(d->centroid() - x0), 0.0, 1e-13);
        if (d->dim == 2) EXPECT_EQ(w[2], 0.0);
    }
}

TEST(Dbar, CellIntegralMatchesQuadrature) {
    const double a1 = 0.3, a2 = 0.7, b1 = -0.4, b2 = 0.2;
    cplx q = 0.0;
    const int n = 800;
    const double da = (a2 - a1) / n, db = (b2 - b1) / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q += da * db / cplx(a1 + (i + 0.5) * da, b1 + (j + 0.5) * db);
    EXPECT_NEAR(std::abs(cell_integral(a1, a2, b1, b2) - q), 0.0, 1e-6);
}

TEST(Dbar, ZeroDensity) {
    const ZGrid g = square_zgrid(24, 1.5);
    EXPECT_EQ(solve_dbar(g, CVector::Zero(g.size())).cwiseAbs().maxCoeff(), 0.0);
}

// (1/π)∬_{|ζ|<1} dA/(z − ζ) = conj(z) inside the unit disk
TEST(Dbar, DiskIndicator) {
    const ZGrid g = square_zgrid(100, 1.25);
    CVector f(g.size());
    for (int j = 0; j < g.nr; ++j)
        for (int i = 0; i < g.ns; ++i) f[g.index(i, j)] = std::abs(g.node(i, j)) < 1.0 ? 1.0 : 0.0;
    const CVector u = solve_dbar(g, f);
    double worst = 0.0;
    for (int j = 0; j < g.nr; ++j)
        for (int i = 0; i < g.ns; ++i) {
            const cplx z = g.node(i, j);
            if (std::abs(z) < 0.8) worst = std::max(worst, std::abs(u[g.index(i, j)] - std::conj(z)));
        }
    EXPECT_LE(worst, 0.01);
}

// f = ∂̄(z z̄) = z: u − z z̄ is holomorphic away from the rectangle edge.
TEST(Dbar, PolynomialRightSide) {
    double prev = 0.0;
    for (int n : {32, 64}) {
        const ZGrid g = square_zgrid(n, 1.0);
        CVector f(g.size());
        for (int j = 0; j < g.nr; ++j)
            for (int i = 0; i < g.ns; ++i) f[g.index(i, j)] = g.node(i, j);
        const CVector u = solve_dbar(g, f);
        auto diff = [&](int i, int j) {
            const cplx z = g.node(i, j);
            return u[g.index(i, j)] - z * std::conj(z);
        };
        double worst = 0.0;
        for (int j = n / 4; j < 3 * n / 4; ++j)
            for (int i = n / 4; i < 3 * n / 4; ++i) {
                const cplx ds = (diff(i + 1, j) - diff(i - 1, j)) / (2 * g.ds);
                const cplx dr = (diff(i, j + 1) - diff(i, j - 1)) / (2 * g.dr);
                worst = std::max(worst, std::abs(0.5 * (ds + cplx(0, 1) * dr)));
            }
        EXPECT_LE(worst, 2.0 * g.ds);
        if (prev > 0.0) EXPECT_LT(worst, prev);
        prev = worst;
    }
}

TEST(Amplitudes, LeadingAmplitudeClosedForm3D) {
    const Grid g = build_grid(kCube, 9);
    AmplitudeOptions o;
    o.resolution = 64;
    const AmplitudeSet a = build_amplitudes(spec_for(kCube, Vec3(2.5, 0, 0)), g, 2.0, HolomorphicSeed::One, 0, o);
    const ZGrid& zg = a.zgrid;
    CVector exact(zg.size());
    double worst = 0.0;
    for (int j = 0; j < zg.nr; ++j)
        for (int i = 0; i < zg.ns; ++i) {
            const std::size_t n = zg.index(i, j);
            exact[n] = std::pow(cplx(0.0, 2.0 * zg.node(i, j).imag()), -0.5);
            if (a.valid(i, j)) worst = std::max(worst, std::abs(a.a[0][n] - exact[n]) / std::abs(exact[n]));
        }
    EXPECT_LE(worst, 1e-12);
    const TransportOperators T{&zg, 3};
    const CVector t2 = T.transport(T.transport(exact));
    double res = 0.0;
    for (int j = a.j_lo + 2; j <= a.j_hi - 2; ++j)
        for (int i = a.i_lo + 2; i <= a.i_hi - 2; ++i) res = std::max(res, std::abs(t2[zg.index(i, j)]));
    EXPECT_LE(res, std::max(zg.ds, zg.dr));
}

TEST(Amplitudes, TwoDimensionalLeadingIsSeed) {
    const Grid g = build_grid(kSquare, 9);
    AmplitudeOptions o;
    o.resolution = 32;
    const AmplitudeSet a = build_amplitudes(spec_for(kSquare, Vec3(2.5, 0, 0)), g, 2.0, HolomorphicSeed::One, 0, o);
    for (Eigen::Index n = 0; n < a.a[0].size(); ++n) EXPECT_EQ(a.a[0][n], cplx(1.0));
}

TEST(Amplitudes, BadOptionsRejected) {
    const Grid g = build_grid(kCube, 9);
    const PhaseSpec s = spec_for(kCube, Vec3(2.5, 0, 0));
    EXPECT_THROW(build_amplitudes(s, g, 1.0, HolomorphicSeed::One, 3), ValidationError);
    AmplitudeOptions o;
    o.resolution = 8;
    EXPECT_THROW(build_amplitudes(s, g, 1.0, HolomorphicSeed::One, 0, o), ValidationError);
}

class WkbOrder : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        const Grid g = build_grid(kCube, 9);
        amps_ = new AmplitudeSet(build_amplitudes(spec_for(kCube, Vec3(1.9, 0.3, 0.2)), g, 2.0,
                                                  HolomorphicSeed::One, 2));
    }
    static void TearDownTestSuite() { delete amps_; }
    static AmplitudeSet* amps_;
};
AmplitudeSet* WkbOrder::amps_ = nullptr;

TEST_F(WkbOrder, LeadingOrders) {
    const std::vector<double> hs{0.4, 0.2, 0.1, 0.05};
    EXPECT_NEAR(loglog_slope(hs, wkb_residual(*amps_, 0, hs)), 3.0, 0.5);
    EXPECT_NEAR(loglog_slope(hs, wkb_residual(*amps_, 1, hs)), 4.0, 0.5);
}

TEST_F(WkbOrder, SecondOrderCorrection) {
    const std::vector<double> hs{0.4, 0.2, 0.1};
    EXPECT_GE(loglog_slope(hs, wkb_residual(*amps_, 2, hs)), 4.5);
}

TEST(Probe, TShiftScalesExactly) {
    const auto g = std::make_shared<const Grid>(build_grid(kSquare, 25));
    const NavierOperator bg(g, MediumSpec::background(2.0));
    PhaseSpec s = spec_for(kSquare, Vec3(2.5, 0.3, 0));
    const AmplitudeSet a = build_amplitudes(s, *g, 2.0, HolomorphicSeed::One, 1);
    s.h = 0.1;
    s.t = 0.4;
    const CGOAnsatz p = build_probe(bg, s, a, 1);
    s.t = 0.1;
    const CGOAnsatz q = build_probe(bg, s, a, 1);
    const cplx factor = std::exp(0.3 / 0.1);
    EXPECT_LE((p.vapp.values - factor * q.vapp.values).norm(), 1e-13 * p.vapp.values.norm());
    EXPECT_LE((p.data.f1 - factor * q.data.f1).norm(), 1e-13 * p.data.f1.norm());
}

TEST(Probe, LargestWhereLogDistanceSmallest) {
    const auto g = std::make_shared<const Grid>(build_grid(kSquare, 25));
    const NavierOperator bg(g, MediumSpec::background(2.0));
    PhaseSpec s = spec_for(kSquare, Vec3(2.2, 0.4, 0));
    const AmplitudeSet a = build_amplitudes(s, *g, 2.0, HolomorphicSeed::One, 0);
    std::size_t nearest = 0;
    double best = 1e300;
    for (std::size_t n = 0; n < g->size(); ++n)
        if ((g->point(n) - s.x0).norm() < best) best = (g->point(n) - s.x0).norm(), nearest = n;
    s.h = 0.15;
    s.t = std::log(best);
    const CGOAnsatz p = build_probe(bg, s, a, 0);
    Eigen::Index arg = 0;
    p.vapp.values.cwiseAbs().maxCoeff(&arg);
    EXPECT_EQ(static_cast<std::size_t>(arg), nearest);
    EXPECT_NEAR(p.max_exponent, 0.0, 1e-12);
}

TEST(Probe, OverflowRejected) {
    const auto g = std::make_shared<const Grid>(build_grid(kSquare, 9));
    const NavierOperator bg(g, MediumSpec::background(2.0));
    PhaseSpec s = spec_for(kSquare, Vec3(2.5, 0, 0));
    const AmplitudeSet a = build_amplitudes(s, *g, 2.0, HolomorphicSeed::One, 0);
    s.h = 1e-3;
    s.t = 2.0;
    EXPECT_THROW(build_probe(bg, s, a, 0), ValidationError);
}

TEST(Probe, ClosedFormLaplacianMatchesDifferences) {
    const PhaseSpec base = spec_for(kCube, Vec3(2.0, 0.5, 0.3));
    const Grid g = build_grid(kCube, 9);
    const AmplitudeSet a = build_amplitudes(base, g, 2.0, HolomorphicSeed::One, 1);
    PhaseSpec s = base;
    s.h = 0.3;
    const Vec3 x(0.2, -0.1, 0.3);
    const AnsatzPoint p = evaluate_ansatz(x, s, a, 1);
    const double d = 1e-3;
    cplx lap = 0.0;
    for (int k = 0; k < 3; ++k) {
        Vec3 dx = Vec3::Zero();
        dx[k] = d;
        const cplx vp = evaluate_ansatz(x + dx, s, a, 1).v, vm = evaluate_ansatz(x - dx, s, a, 1).v;
        lap += (vp - 2.0 * p.v + vm) / (d * d);
        EXPECT_NEAR(std::abs(p.grad[k] - (vp - vm) / (2 * d)), 0.0, 1e-3 * std::abs(p.v) / s.h);
    }
    EXPECT_NEAR(std::abs(p.lap - lap), 0.0, 1e-2 * std::abs(p.v) / (s.h * s.h));
}

TEST(LogLog, PowerLawSlope) {
    const std::vector<double> x{0.1, 0.2, 0.4}, y{2e-3, 1.6e-2, 1.28e-1};
    EXPECT_NEAR(loglog_slope(x, y), 3.0, 1e-12);
}
