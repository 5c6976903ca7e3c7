#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "enclosure/forward.hpp"
#include "enclosure/indicator.hpp"

using namespace enclosure;

namespace {

std::shared_ptr<const Grid> box_grid(int dim, int n, double lo = -1.0, double hi = 1.0) {
    const Vec3 a(lo, lo, dim == 3 ? lo : 0.0), b(hi, hi, dim == 3 ? hi : 0.0);
    return std::make_shared<const Grid>(build_grid(DomainSpec::box(dim, a, b), n));
}

template <class F1, class F2>
NavierData traces(const Grid& g, F1 f1, F2 f2) {
    NavierData d{CVector(g.boundary_count()), CVector(g.boundary_count())};
    for (std::size_t b = 0; b < g.boundary_count(); ++b) {
        const Vec3 x = g.point(g.boundary_nodes()[b]);
        d.f1[b] = f1(x);
        d.f2[b] = f2(x);
    }
    return d;
}

MediumSpec inclusion(double kappa, bool with_A = false) {
    MediumSpec m = MediumSpec::background(kappa);
    m.gamma_D = 0.5;
    m.q_D = 1.0;
    if (with_A) m.A_D = {cplx(0.3, 0.1), cplx(-0.2, 0.0), cplx(0.0)};
    m.shape = ObstacleShape::ball(Vec3(0.1, -0.05, 0.0), 0.45);
    return m;
}

double max_abs(const CVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// axis-aligned normal, i.e. not an edge or corner node
bool face_node(const Grid& g, std::size_t b) { return std::abs(g.normal(b).cwiseAbs().maxCoeff() - 1.0) < 1e-12; }

} // namespace

TEST(Assembly, SystemDimension) {
    const auto g = box_grid(3, 16);
    const SparseSystem s = assemble_split_system(*g, MediumSpec::background(1.0), nullptr, nullptr);
    EXPECT_EQ(s.matrix.rows(), static_cast<Eigen::Index>(2 * g->dof_count()));
    EXPECT_EQ(g->dof_count(), 16u * 16u * 16u);
}

TEST(Assembly, BackgroundCouplingBlocks) {
    const double kappa = 1.7;
    const auto g = box_grid(2, 12);
    const SparseSystem s = assemble_split_system(*g, MediumSpec::background(kappa), nullptr, nullptr);
    for (Eigen::Index col = 0; col < s.matrix.outerSize(); ++col)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(s.matrix, col); it; ++it) {
            const Eigen::Index r = it.row(), c = it.col();
            if (r % 2 == c % 2) continue;
            ASSERT_EQ(r / 2, c / 2) << "coupling between different nodes";
            if (r % 2 == 0) EXPECT_EQ(it.value(), cplx(-1.0));
            else EXPECT_NEAR(std::abs(it.value() - kappa * kappa), 0.0, 1e-14);
        }
}

TEST(Assembly, FirstOrderEntriesOnlyInObstacle) {
    const auto g = box_grid(2, 24);
    const MediumSpec m = inclusion(1.0, true);
    const SparseSystem s = assemble_split_system(*g, m, nullptr, nullptr);
    for (Eigen::Index col = 0; col < s.matrix.outerSize(); ++col)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(s.matrix, col); it; ++it) {
            // m row, u column of a different node: only Ã·Du produces these
            if (it.row() % 2 == 1 && it.col() % 2 == 0 && it.row() / 2 != it.col() / 2) {
                const std::size_t n = g->dof_node(static_cast<std::size_t>(it.row() / 2));
                EXPECT_TRUE(m.shape.contains(g->point(n)));
            }
        }
}

TEST(Forward, LinearPolynomialExact) {
    for (int dim : {2, 3}) {
        const auto g = box_grid(dim, dim == 2 ? 33 : 12);
        const NavierData d = traces(*g, [](const Vec3& x) { return cplx(x[0]); }, [](const Vec3&) { return cplx(0); });
        const NavierSolution s = solve_navier(g, MediumSpec::background(0.0), d);
        for (std::size_t n = 0; n < g->size(); ++n)
            if (g->active(n)) EXPECT_NEAR(std::abs(s.u.values[n] - g->point(n)[0]), 0.0, 1e-8);
        const DtNTrace t = extract_dtn(*g, s);
        for (std::size_t b = 0; b < g->boundary_count(); ++b) {
            if (!face_node(*g, b)) continue;
            EXPECT_NEAR(std::abs(t.du_dnu[b] - g->normal(b)[0]), 0.0, 1e-7);
            EXPECT_NEAR(std::abs(t.dlap_dnu[b]), 0.0, 1e-7);
        }
    }
}

TEST(Forward, QuadraticPolynomialExact) {
    for (int dim : {2, 3}) {
        const auto g = box_grid(dim, dim == 2 ? 33 : 12);
        const NavierData d = traces(
            *g, [](const Vec3& x) { return cplx(x.squaredNorm()); }, [dim](const Vec3&) { return cplx(2.0 * dim); });
        const NavierSolution s = solve_navier(g, MediumSpec::background(0.0), d);
        for (std::size_t n = 0; n < g->size(); ++n)
            if (g->active(n)) EXPECT_NEAR(std::abs(s.u.values[n] - g->point(n).squaredNorm()), 0.0, 1e-8);
        const DtNTrace t = extract_dtn(*g, s);
        for (std::size_t b = 0; b < g->boundary_count(); ++b) {
            if (!face_node(*g, b)) continue;
            const Vec3 x = g->point(g->boundary_nodes()[b]);
            EXPECT_NEAR(std::abs(t.du_dnu[b] - 2.0 * x.dot(g->normal(b))), 0.0, 1e-7);
            EXPECT_NEAR(std::abs(t.dlap_dnu[b]), 0.0, 1e-7);
        }
    }
}

// u* = sin(πx) sin(πy) on the unit square; Δ²u* = 4π⁴u*, Δu* = −2π²u*
TEST(Forward, ManufacturedSolution2D) {
    const double pi = kPi, kappa = 1.0;
    auto exact = [&](const Vec3& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); };
    auto grad = [&](const Vec3& x) {
        return Vec3(pi * std::cos(pi * x[0]) * std::sin(pi * x[1]), pi * std::sin(pi * x[0]) * std::cos(pi * x[1]), 0);
    };
    std::vector<double> hs, eu, etrace;
    for (int n : {21, 41, 81}) {
        const auto g = box_grid(2, n, 0.0, 1.0);
        SourceTerms src{CVector::Zero(g->size()), CVector::Zero(g->size())};
        for (std::size_t i = 0; i < g->size(); ++i) src.s2[i] = (4 * pi * pi * pi * pi + kappa * kappa) * exact(g->point(i));
        const NavierData d = traces(*g, [&](const Vec3& x) { return cplx(exact(x)); },
                                    [&](const Vec3& x) { return cplx(-2 * pi * pi * exact(x)); });
        const NavierSolution s = solve_navier(g, MediumSpec::background(kappa), d, &src);
        double e2 = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i)
            e2 += g->volume_weight(i) * std::norm(s.u.values[i] - exact(g->point(i)));
        const DtNTrace t = extract_dtn(*g, s);
        double et = 0.0;
        for (std::size_t b = 0; b < g->boundary_count(); ++b) {
            if (!face_node(*g, b)) continue;
            const double dn = grad(g->point(g->boundary_nodes()[b])).dot(g->normal(b));
            et = std::max({et, std::abs(t.du_dnu[b] - dn), std::abs(t.dlap_dnu[b] + 2 * pi * pi * dn) / (2 * pi * pi)});
        }
        hs.push_back(g->spacing()[0]);
        eu.push_back(std::sqrt(e2));
        etrace.push_back(et);
    }
    const double order_u = std::log(eu[1] / eu[2]) / std::log(hs[1] / hs[2]);
    const double order_t = std::log(etrace[1] / etrace[2]) / std::log(hs[1] / hs[2]);
    EXPECT_NEAR(order_u, 2.0, 0.3);
    EXPECT_GE(order_t, 1.5);
}

TEST(Forward, Linearity) {
    const auto g = box_grid(2, 25);
    const NavierOperator op(g, inclusion(2.0, true));
    const NavierData a = traces(*g, [](const Vec3& x) { return cplx(x[0] * x[1], 1.0); },
                                [](const Vec3& x) { return cplx(x[1]); });
    const NavierData b = traces(*g, [](const Vec3& x) { return cplx(std::exp(x[0])); },
                                [](const Vec3& x) { return cplx(0.0, x[0]); });
    const cplx alpha(0.7, -1.2), beta(-2.0, 0.3);
    const NavierData c{alpha * a.f1 + beta * b.f1, alpha * a.f2 + beta * b.f2};
    const CVector lhs = op.solve(c).u.values;
    const CVector rhs = alpha * op.solve(a).u.values + beta * op.solve(b).u.values;
    EXPECT_LE((lhs - rhs).norm(), 1e-9 * rhs.norm());
}

TEST(Forward, KrylovMatchesDirect) {
    const auto g = box_grid(2, 21);
    SolverOptions krylov;
    krylov.method = SolverOptions::Method::Krylov;
    const NavierData d = traces(*g, [](const Vec3& x) { return cplx(std::cos(x[0]) * x[1]); },
                                [](const Vec3& x) { return cplx(x[0]); });
    const CVector a = solve_navier(g, inclusion(2.0), d).u.values;
    const CVector b = solve_navier(g, inclusion(2.0), d, nullptr, krylov).u.values;
    EXPECT_LE((a - b).norm(), 1e-7 * a.norm());
}

TEST(Forward, SolverErrorCarriesHistory) {
    const auto g = box_grid(2, 21);
    SolverOptions o;
    o.method = SolverOptions::Method::Krylov;
    o.max_iterations = 1;
    o.tolerance = 1e-14;
    o.ilut_drop = 0.5;
    o.ilut_fill = 1;
    const NavierData d = traces(*g, [](const Vec3& x) { return cplx(x[0]); }, [](const Vec3&) { return cplx(1.0); });
    try {
        solve_navier(g, inclusion(2.0), d, nullptr, o);
        FAIL() << "expected SolverError";
    } catch (const SolverError& e) {
        EXPECT_FALSE(e.residual_history().empty());
    }
}

TEST(Forward, MisalignedDataRejected) {
    const auto g = box_grid(2, 9);
    NavierData d{CVector::Zero(3), CVector::Zero(3)};
    EXPECT_THROW(solve_navier(g, MediumSpec::background(1.0), d), ValidationError);
}

TEST(Reflected, EmptyObstacleGivesZero) {
    const auto g = box_grid(2, 25);
    const NavierOperator bg(g, MediumSpec::background(2.0));
    const NavierData d = traces(*g, [](const Vec3& x) { return cplx(x[0] + x[1] * x[1]); },
                                [](const Vec3&) { return cplx(1.0); });
    const NavierSolution w = solve_reflected(bg, bg.solve(d));
    EXPECT_LE(max_abs(w.u.values), 1e-12);
}

TEST(Reflected, MatchesDifferenceOfSolutions) {
    for (int dim : {2, 3}) {
        const auto g = box_grid(dim, dim == 2 ? 33 : 14);
        SolverOptions o;
        o.tolerance = 1e-12;
        const NavierOperator bg(g, MediumSpec::background(2.0), o), med(g, inclusion(2.0, true), o);
        const NavierData d = traces(*g, [](const Vec3& x) { return cplx(std::exp(x[0]) * std::cos(x[1]), x[2]); },
                                    [](const Vec3& x) { return cplx(x[0] * x[1]); });
        const NavierSolution v = bg.solve(d), u = med.solve(d), w = solve_reflected(med, v);
        const CVector diff = u.u.values - v.u.values;
        EXPECT_LE((w.u.values - diff).norm(), 1e-8 * diff.norm()) << "dim " << dim;
        for (std::size_t n : g->boundary_nodes()) {
            EXPECT_LE(std::abs(w.u.values[n]), 1e-10);
            EXPECT_LE(std::abs(w.m.values[n]), 1e-10);
        }
    }
}

// Two background solutions with real coefficients: ⟨Λv₁, f₂⟩ = conj⟨Λv₂, f₁⟩.
TEST(Forward, DiscreteReciprocity) {
    const auto g = box_grid(2, 31);
    const NavierOperator bg(g, MediumSpec::background(1.5));
    const NavierData a = traces(*g, [](const Vec3& x) { return cplx(std::sin(2 * x[0]) + x[1], 0.5 * x[0]); },
                                [](const Vec3& x) { return cplx(x[1] * x[1], -x[0]); });
    const NavierData b = traces(*g, [](const Vec3& x) { return cplx(std::exp(x[1]), x[0] * x[1]); },
                                [](const Vec3& x) { return cplx(1.0 + x[0], 0.0); });
    const cplx pab = pair_dtn(extract_dtn(*g, bg.solve(a)), b, *g);
    const cplx pba = pair_dtn(extract_dtn(*g, bg.solve(b)), a, *g);
    EXPECT_LE(std::abs(pab - std::conj(pba)), 1e-9 * std::abs(pab));
}
