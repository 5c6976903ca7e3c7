#include "enclosure/forward.hpp"

#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "enclosure/krylov.hpp"

namespace enclosure {

namespace {

const cplx kI(0.0, 1.0);

double dirichlet_scale(const Grid& g) {
    double s = 0.0;
    for (int a = 0; a < g.dim(); ++a) s += 2.0 / (g.spacing()[a] * g.spacing()[a]);
    return s;
}

CVector build_rhs(const Grid& g, double scale, const NavierData* data, const SourceTerms* source) {
    CVector rhs = CVector::Zero(2 * static_cast<Eigen::Index>(g.dof_count()));
    if (data) {
        if (data->f1.size() != static_cast<Eigen::Index>(g.boundary_count()) ||
            data->f2.size() != static_cast<Eigen::Index>(g.boundary_count()))
            throw ValidationError("Navier data is not aligned with the boundary nodes");
    }
    for (std::size_t d = 0; d < g.dof_count(); ++d) {
        const std::size_t n = g.dof_node(d);
        if (g.kind(n) == NodeKind::Boundary) {
            if (data) {
                const std::size_t b = g.boundary_ordinal(n);
                rhs[2 * d] = scale * data->f1[b];
                rhs[2 * d + 1] = scale * data->f2[b];
            }
        } else if (source) {
            if (source->s1.size()) rhs[2 * d] = source->s1[n];
            if (source->s2.size()) rhs[2 * d + 1] = source->s2[n];
        }
    }
    return rhs;
}

Eigen::SparseMatrix<cplx> build_matrix(const Grid& g, const CoefficientField& c) {
    using Triplet = Eigen::Triplet<cplx>;
    const std::size_t nd = g.dof_count();
    const int dim = g.dim();
    const double scale = dirichlet_scale(g);
    std::vector<Triplet> trip;
    trip.reserve(nd * (4 * dim + 6));
    for (std::size_t d = 0; d < nd; ++d) {
        const std::size_t n = g.dof_node(d);
        const Eigen::Index ru = 2 * d, rm = 2 * d + 1;
        if (g.kind(n) == NodeKind::Boundary) {
            trip.emplace_back(ru, ru, scale);
            trip.emplace_back(rm, rm, scale);
            continue;
        }
        if (c.gamma[n] == 0.0) throw ValidationError("gamma vanishes at a grid node");
        double diag = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double inv2 = 1.0 / (g.spacing()[a] * g.spacing()[a]);
            diag -= 2.0 * inv2;
            for (int s : {-1, 1}) {
                const std::size_t m = g.neighbor(n, a, s);
                const Eigen::Index dm = static_cast<Eigen::Index>(g.dof(m));
                trip.emplace_back(ru, 2 * dm, inv2);
                trip.emplace_back(rm, 2 * dm + 1, inv2);
                if (c.has_A && c.A[n][a] != 0.0) {
                    // Ã·Du with D = −i∇, centered.
                    trip.emplace_back(rm, 2 * dm, -kI * c.A[n][a] * (0.5 * s / g.spacing()[a]));
                }
            }
        }
        trip.emplace_back(ru, ru, diag);
        trip.emplace_back(ru, rm, -1.0 / c.gamma[n]);
        trip.emplace_back(rm, rm, diag);
        const cplx mass = c.kappa * c.kappa * c.n[n];
        if (mass != 0.0) trip.emplace_back(rm, ru, mass);
    }
    Eigen::SparseMatrix<cplx> A(2 * nd, 2 * nd);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    return A;
}

bool use_direct(const Grid& g, const SolverOptions& o) {
    if (o.method == SolverOptions::Method::Direct) return true;
    if (o.method == SolverOptions::Method::Krylov) return false;
    return g.dim() == 2;
}

} // namespace

CoefficientField sample_coefficients(const Grid& grid, const MediumSpec& medium) {
    CoefficientField c;
    c.kappa = medium.kappa;
    c.gamma.assign(grid.size(), 1.0);
    c.n.assign(grid.size(), 1.0);
    c.A.assign(grid.size(), std::array<cplx, 3>{});
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (!grid.active(n)) continue;
        const Coefficients k = evaluate_coefficients(medium, grid.point(n));
        c.gamma[n] = k.gamma;
        c.n[n] = k.n;
        c.A[n] = k.A;
        for (int a = 0; a < grid.dim(); ++a) c.has_A = c.has_A || k.A[a] != 0.0;
    }
    return c;
}

SparseSystem assemble_split_system(const Grid& grid, const MediumSpec& medium, const NavierData* data,
                                   const SourceTerms* source) {
    medium.validate();
    SparseSystem sys;
    sys.matrix = build_matrix(grid, sample_coefficients(grid, medium));
    sys.rhs = build_rhs(grid, dirichlet_scale(grid), data, source);
    return sys;
}

struct NavierOperator::Impl {
    Eigen::SparseMatrix<cplx> A;
    double scale = 1.0;
    bool direct = true;
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
    Eigen::IncompleteLUT<cplx> ilu;
};

NavierOperator::NavierOperator(std::shared_ptr<const Grid> grid, const MediumSpec& medium, SolverOptions options)
    : grid_(std::move(grid)), medium_(medium), options_(options), impl_(std::make_unique<Impl>()) {
    medium_.validate();
    coeff_ = sample_coefficients(*grid_, medium_);
    impl_->A = build_matrix(*grid_, coeff_);
    impl_->scale = dirichlet_scale(*grid_);
    impl_->direct = use_direct(*grid_, options_);
    if (impl_->direct) {
        impl_->lu.analyzePattern(impl_->A);
        impl_->lu.factorize(impl_->A);
        if (impl_->lu.info() != Eigen::Success)
            throw SolverError("sparse LU factorization failed: " + impl_->lu.lastErrorMessage(), {});
    } else {
        impl_->ilu.setDroptol(options_.ilut_drop);
        impl_->ilu.setFillfactor(options_.ilut_fill);
        impl_->ilu.compute(impl_->A);
        if (impl_->ilu.info() != Eigen::Success) throw SolverError("incomplete LU preconditioner failed", {});
    }
}

NavierOperator::~NavierOperator() = default;

const Eigen::SparseMatrix<cplx>& NavierOperator::matrix() const { return impl_->A; }

NavierSolution NavierOperator::solve(const NavierData& data, const SourceTerms* source) const {
    const Grid& g = *grid_;
    const CVector b = build_rhs(g, impl_->scale, &data, source);
    const double bnorm = b.norm();
    CVector x;
    SolveStats stats;
    if (bnorm == 0.0) {
        x = CVector::Zero(b.size());
        stats.method = impl_->direct ? "sparse-lu" : "bicgstab-ilut";
    } else if (impl_->direct) {
        stats.method = "sparse-lu";
        x = impl_->lu.solve(b);
        double rel = (b - impl_->A * x).norm() / bnorm;
        stats.history.push_back(rel);
        for (int refine = 0; refine < 3 && rel > 0.01 * options_.tolerance; ++refine) {
            x += impl_->lu.solve(CVector(b - impl_->A * x));
            rel = (b - impl_->A * x).norm() / bnorm;
            stats.history.push_back(rel);
        }
        stats.iterations = static_cast<int>(stats.history.size());
        stats.residual = rel;
        if (!(rel <= options_.tolerance))
            throw SolverError("direct solve residual above tolerance", stats.history);
    } else {
        stats.method = "bicgstab-ilut";
        auto pre = [this](const CVector& r) -> CVector { return impl_->ilu.solve(r); };
        KrylovResult kr = bicgstab(impl_->A, b, pre, options_.tolerance, options_.max_iterations);
        stats.iterations = kr.iterations;
        stats.residual = kr.residual;
        stats.history = std::move(kr.history);
        if (!kr.converged) throw SolverError("BiCGSTAB did not converge within the iteration cap", stats.history);
        x = std::move(kr.x);
    }

    NavierSolution sol;
    sol.u.role = FieldRole::U;
    sol.m.role = FieldRole::WSplit;
    sol.u.values = CVector::Zero(g.size());
    sol.m.values = CVector::Zero(g.size());
    for (std::size_t d = 0; d < g.dof_count(); ++d) {
        const std::size_t n = g.dof_node(d);
        sol.u.values[n] = x[2 * d];
        sol.m.values[n] = x[2 * d + 1];
    }
    const std::size_t nb = g.boundary_count();
    sol.lap_u_boundary = CVector::Zero(nb);
    sol.lap_m_boundary = CVector::Zero(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t n = g.boundary_nodes()[b];
        cplx s1 = 0.0, s2 = 0.0;
        if (source && source->s1.size()) s1 = source->s1[n];
        if (source && source->s2.size()) s2 = source->s2[n];
        sol.lap_u_boundary[b] = sol.m.values[n] / coeff_.gamma[n] + s1;
        sol.lap_m_boundary[b] = s2 - coeff_.kappa * coeff_.kappa * coeff_.n[n] * sol.u.values[n];
    }
    sol.stats = std::move(stats);
    return sol;
}

NavierSolution solve_navier(std::shared_ptr<const Grid> grid, const MediumSpec& medium, const NavierData& data,
                            const SourceTerms* source, SolverOptions options) {
    NavierOperator op(std::move(grid), medium, options);
    return op.solve(data, source);
}

namespace {

// Box domains: per-axis outward flux with the second normal derivative taken
// from the known boundary Laplacian minus tangential second differences.
// Paired with the trapezoid volume weights this satisfies the discrete Green
// identity exactly.
cplx box_trace(const Grid& g, const CVector& phi, cplx lap_b, std::size_t node, std::size_t b) {
    const auto c = g.ijk(node);
    const int dim = g.dim();
    int normal_axes[3];
    int sides[3];
    int ns = 0;
    cplx rem = lap_b;
    for (int k = 0; k < dim; ++k) {
        const bool lo = c[k] == 0, hi = c[k] == g.counts()[k] - 1;
        if (lo || hi) {
            normal_axes[ns] = k;
            sides[ns] = hi ? 1 : -1;
            ++ns;
            continue;
        }
        const double h = g.spacing()[k];
        rem -= (phi[g.neighbor(node, k, 1)] - 2.0 * phi[node] + phi[g.neighbor(node, k, -1)]) / (h * h);
    }
    cplx X[3];
    if (ns == 1) {
        X[0] = rem;
    } else {
        cplx sum = 0.0;
        for (int q = 0; q < ns; ++q) {
            const int k = normal_axes[q];
            const int s = sides[q];
            const double h = g.spacing()[k];
            X[q] = (phi[node] - 2.0 * phi[g.neighbor(node, k, -s)] + phi[g.neighbor(node, k, -2 * s)]) / (h * h);
            sum += X[q];
        }
        const cplx corr = (rem - sum) / static_cast<double>(ns);
        for (int q = 0; q < ns; ++q) X[q] += corr;
    }
    cplx weighted = 0.0;
    for (int q = 0; q < ns; ++q) {
        const int k = normal_axes[q];
        const int s = sides[q];
        const double h = g.spacing()[k];
        const cplx F = (phi[node] - phi[g.neighbor(node, k, -s)]) / h + 0.5 * h * X[q];
        double sigma = 1.0;
        for (int l = 0; l < dim; ++l) {
            if (l == k) continue;
            const bool end = c[l] == 0 || c[l] == g.counts()[l] - 1;
            sigma *= (end ? 0.5 : 1.0) * g.spacing()[l];
        }
        weighted += sigma * F;
    }
    return weighted / g.flux_weight(b);
}

bool usable(const Grid& g, std::size_t n) { return n != Grid::npos && g.active(n); }

// Staircase boundaries: axis gradient from one-sided three-point differences
// into the domain, projected on the analytic normal.
cplx generic_trace(const Grid& g, const CVector& phi, std::size_t node, std::size_t b) {
    const Vec3& nu = g.normal(b);
    cplx acc = 0.0;
    for (int k = 0; k < g.dim(); ++k) {
        if (nu[k] == 0.0) continue;
        const double h = g.spacing()[k];
        const std::size_t p1 = g.neighbor(node, k, 1), m1 = g.neighbor(node, k, -1);
        cplx d = 0.0;
        if (usable(g, p1) && usable(g, m1)) {
            d = (phi[p1] - phi[m1]) / (2.0 * h);
        } else {
            const int s = usable(g, m1) ? -1 : 1; // direction into the domain
            const std::size_t i1 = g.neighbor(node, k, s), i2 = g.neighbor(node, k, 2 * s);
            if (usable(g, i1) && usable(g, i2))
                d = -double(s) * (3.0 * phi[node] - 4.0 * phi[i1] + phi[i2]) / (2.0 * h);
            else if (usable(g, i1))
                d = -double(s) * (phi[node] - phi[i1]) / h;
        }
        acc += nu[k] * d;
    }
    return acc;
}

} // namespace

DtNTrace extract_dtn(const Grid& grid, const NavierSolution& solution) {
    const std::size_t nb = grid.boundary_count();
    DtNTrace t;
    t.du_dnu = CVector::Zero(nb);
    t.dlap_dnu = CVector::Zero(nb);
    const CVector& u = solution.u.values;
    const CVector& m = solution.m.values;
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t n = grid.boundary_nodes()[b];
        if (grid.box_aligned()) {
            t.du_dnu[b] = box_trace(grid, u, solution.lap_u_boundary[b], n, b);
            t.dlap_dnu[b] = box_trace(grid, m, solution.lap_m_boundary[b], n, b);
        } else {
            t.du_dnu[b] = generic_trace(grid, u, n, b);
            t.dlap_dnu[b] = generic_trace(grid, m, n, b);
        }
    }
    return t;
}

CVector discrete_laplacian(const Grid& grid, const CVector& values) {
    CVector out = CVector::Zero(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (grid.kind(n) != NodeKind::Interior) continue;
        cplx acc = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
            const double h = grid.spacing()[a];
            acc += (values[grid.neighbor(n, a, 1)] - 2.0 * values[n] + values[grid.neighbor(n, a, -1)]) / (h * h);
        }
        out[n] = acc;
    }
    return out;
}

CVector centered_derivative(const Grid& grid, const CVector& values, int axis) {
    CVector out = CVector::Zero(grid.size());
    const double h = grid.spacing()[axis];
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (grid.kind(n) != NodeKind::Interior) continue;
        out[n] = (values[grid.neighbor(n, axis, 1)] - values[grid.neighbor(n, axis, -1)]) / (2.0 * h);
    }
    return out;
}

NavierSolution solve_reflected(const NavierOperator& op, const NavierSolution& v) {
    const Grid& g = op.grid();
    const CoefficientField& c = op.coefficients();
    SourceTerms src;
    src.s1 = CVector::Zero(g.size());
    src.s2 = CVector::Zero(g.size());
    std::array<CVector, 3> dv;
    if (c.has_A)
        for (int a = 0; a < g.dim(); ++a) dv[a] = centered_derivative(g, v.u.values, a);
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (g.kind(n) != NodeKind::Interior) continue;
        const cplx dg = c.gamma[n] - 1.0;
        const cplx dn = c.n[n] - 1.0;
        if (dg != 0.0) src.s1[n] = -dg / c.gamma[n] * v.m.values[n];
        cplx s2 = -c.kappa * c.kappa * dn * v.u.values[n];
        if (c.has_A)
            for (int a = 0; a < g.dim(); ++a) s2 -= c.A[n][a] * (-kI) * dv[a][n];
        src.s2[n] = s2;
    }
    NavierData zero;
    zero.f1 = CVector::Zero(g.boundary_count());
    zero.f2 = CVector::Zero(g.boundary_count());
    NavierSolution w = op.solve(zero, &src);
    w.u.role = FieldRole::Reflected;
    return w;
}

NavierData boundary_data(const Grid& grid, const NavierSolution& s) {
    NavierData d;
    d.f1 = CVector::Zero(grid.boundary_count());
    d.f2 = s.lap_u_boundary;
    for (std::size_t b = 0; b < grid.boundary_count(); ++b) d.f1[b] = s.u.values[grid.boundary_nodes()[b]];
    return d;
}

} // namespace enclosure
