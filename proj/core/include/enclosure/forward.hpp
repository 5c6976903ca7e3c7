#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "enclosure/grid.hpp"
#include "enclosure/media.hpp"

namespace enclosure {

enum class FieldRole { U, WSplit, Reflected, Probe, Amplitude };

// One complex value per grid node; exterior nodes hold zero.
struct Field {
    FieldRole role = FieldRole::U;
    CVector values;
};

// Boundary data in grid boundary order.
struct NavierData {
    CVector f1; // u on ∂Ω
    CVector f2; // Δu on ∂Ω
};

struct DtNTrace {
    CVector du_dnu;
    CVector dlap_dnu;
};

// Per-node right-hand sides of the split rows:
//   Δu − m/γ̃ = s1,   Δm + Ã·Du + κ²ñu = s2.
// Empty vectors mean zero.
struct SourceTerms {
    CVector s1;
    CVector s2;
};

struct SolverOptions {
    enum class Method { Auto, Direct, Krylov };
    Method method = Method::Auto;
    double tolerance = 1e-10;
    int max_iterations = 20000;
    double ilut_drop = 1e-3;
    int ilut_fill = 10;
};

struct SolveStats {
    std::string method;
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> history;
};

struct NavierSolution {
    Field u;
    Field m;
    // Laplacian values at boundary nodes implied by the split rows; the DtN
    // extraction uses them for the second normal derivative.
    CVector lap_u_boundary;
    CVector lap_m_boundary;
    SolveStats stats;
};

// Per-node coefficient arrays, sampled once.
struct CoefficientField {
    std::vector<cplx> gamma;
    std::vector<cplx> n;
    std::vector<std::array<cplx, 3>> A;
    double kappa = 0.0;
    bool has_A = false;
};
CoefficientField sample_coefficients(const Grid& grid, const MediumSpec& medium);

struct SparseSystem {
    Eigen::SparseMatrix<cplx> matrix;
    CVector rhs;
};

// Interleaved unknowns: 2d is u, 2d+1 is m at active node d.
SparseSystem assemble_split_system(const Grid& grid, const MediumSpec& medium, const NavierData* data,
                                   const SourceTerms* source);

// Assembled and factorized split operator for one (grid, medium) pair.
// Immutable after construction; solve() may be called concurrently.
class NavierOperator {
public:
    NavierOperator(std::shared_ptr<const Grid> grid, const MediumSpec& medium, SolverOptions options = {});
    ~NavierOperator();
    NavierOperator(const NavierOperator&) = delete;
    NavierOperator& operator=(const NavierOperator&) = delete;

    NavierSolution solve(const NavierData& data, const SourceTerms* source = nullptr) const;

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
    const MediumSpec& medium() const { return medium_; }
    const CoefficientField& coefficients() const { return coeff_; }
    const Eigen::SparseMatrix<cplx>& matrix() const;
    const SolverOptions& options() const { return options_; }

private:
    struct Impl;
    std::shared_ptr<const Grid> grid_;
    MediumSpec medium_;
    CoefficientField coeff_;
    SolverOptions options_;
    std::unique_ptr<Impl> impl_;
};

NavierSolution solve_navier(std::shared_ptr<const Grid> grid, const MediumSpec& medium, const NavierData& data,
                            const SourceTerms* source = nullptr, SolverOptions options = {});

DtNTrace extract_dtn(const Grid& grid, const NavierSolution& solution);

// Discrete Laplacian at interior nodes (zero elsewhere).
CVector discrete_laplacian(const Grid& grid, const CVector& values);
// Centered gradient component along axis at interior nodes.
CVector centered_derivative(const Grid& grid, const CVector& values, int axis);

// Reflected solution w = u − v driven by the coefficient jumps, with
// homogeneous Navier data. `v` must be a background solution on the same grid.
NavierSolution solve_reflected(const NavierOperator& medium_op, const NavierSolution& v);

NavierData boundary_data(const Grid& grid, const NavierSolution& s);

} // namespace enclosure
