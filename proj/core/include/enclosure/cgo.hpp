#pragma once

#include <array>
#include <memory>
#include <vector>

#include "enclosure/forward.hpp"
#include "enclosure/grid.hpp"

namespace enclosure {

struct PhaseSpec {
    int dim = 3;
    Vec3 x0 = Vec3::Zero();
    Vec3 w = Vec3::UnitX();
    double t = 0.0;
    double h = 0.1;
};

// Checks |w| = 1, x0 outside the hull of Ω, and the angle between x − x0 and
// w inside (delta, π − delta) at every active node.
void validate_phase(const PhaseSpec& spec, const Grid& grid, double delta = 1e-3);

struct PhaseEval {
    double phi = 0.0;
    double psi = 0.0;
    Vec3 grad_phi = Vec3::Zero();
    Vec3 grad_psi = Vec3::Zero();
    double lap_phi = 0.0;
    double lap_psi = 0.0;
};

// Closed-form φ = ½ log|x−x0|², ψ = arccos(w·(x−x0)/|x−x0|) and derivatives.
// Uses w as given (no normalization).
PhaseEval eval_phase(const Vec3& x, const PhaseSpec& spec);

struct EikonalReport {
    double modulus_residual = 0.0;      // max | |∇ψ|² − |∇φ|² |
    double orthogonality_residual = 0.0; // max |∇φ·∇ψ|
    bool flagged = false;
};
EikonalReport verify_eikonal(const PhaseSpec& spec, const Grid& grid, double tolerance = 1e-10);

struct Cylindrical {
    cplx z;    // s + i r, s along w
    Vec3 theta; // unit vector orthogonal to w
    double r = 0.0;
};
// Frame centered at x0 with first axis w. Rejects r < r_min.
Cylindrical cylindrical_coords(const Vec3& x, const PhaseSpec& spec, double r_min);

// Uniform cell-centered grid on a rectangle of the z-plane.
struct ZGrid {
    double s0 = 0.0, r0 = 0.0; // center of cell (0,0)
    double ds = 1.0, dr = 1.0;
    int ns = 0, nr = 0;

    std::size_t size() const { return static_cast<std::size_t>(ns) * nr; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * ns + i; }
    cplx node(int i, int j) const { return {s0 + i * ds, r0 + j * dr}; }
};

// Solid Cauchy transform (1/π)∬ f(ζ)/(z−ζ) dA with cell-wise exact integration
// of the kernel against piecewise-constant density. Kernel table is shared
// across calls on the same grid.
class CauchyTransform {
public:
    explicit CauchyTransform(const ZGrid& grid);
    CVector apply(const CVector& f) const;
    const ZGrid& grid() const { return grid_; }

private:
    ZGrid grid_;
    std::vector<cplx> kernel_; // (2 ns − 1) × (2 nr − 1) offsets
};

// ∬ over [a1,a2]×[b1,b2] of da db / (a + i b).
cplx cell_integral(double a1, double a2, double b1, double b2);

CVector solve_dbar(const ZGrid& grid, const CVector& f);

enum class HolomorphicSeed { One, Z };

struct AmplitudeOptions {
    int resolution = 128;
    // width of the padding around the image of Ω, as a fraction of its extent
    double margin_fraction = 0.25;
    double r_min_fraction = 1e-2;
};

// Axisymmetric amplitudes a_k(s, r) on a z-rectangle covering the image of Ω,
// with the derivative fields needed for the Laplacian of the ansatz.
struct AmplitudeSet {
    int dim = 3;
    int K = 0;
    double kappa = 0.0;
    HolomorphicSeed seed = HolomorphicSeed::One;
    ZGrid zgrid;
    // index range of nodes covering the image of Ω
    int i_lo = 0, i_hi = 0, j_lo = 0, j_hi = 0;
    std::array<CVector, 3> a;     // amplitudes
    std::array<CVector, 3> a_s;   // ∂_s
    std::array<CVector, 3> a_r;   // ∂_r
    std::array<CVector, 3> lap;   // axisymmetric Laplacian
    std::array<CVector, 3> F;     // right side of L² a_k = F_k
    std::array<CVector, 3> S;     // (ΔT + TΔ) a_k
    std::array<CVector, 3> bilap; // Δ² a_k

    bool valid(int i, int j) const { return i >= i_lo && i <= i_hi && j >= j_lo && j <= j_hi; }

    struct Sample {
        std::array<cplx, 3> a{}, a_s{}, a_r{}, lap{};
    };
    // Bicubic interpolation of the fields at (s, r).
    Sample sample(double s, double r) const;
};

AmplitudeSet build_amplitudes(const PhaseSpec& spec, const Grid& grid, double kappa, HolomorphicSeed seed, int K,
                              const AmplitudeOptions& options = {});

// Discrete transport operators on the z-grid (fourth-order differences).
struct TransportOperators {
    const ZGrid* grid;
    int dim;
    CVector ds(const CVector& a) const;
    CVector dr(const CVector& a) const;
    CVector laplacian(const CVector& a) const;
    // T_Φ a for Φ = −log z: ∇Φ·∇a + ½ΔΦ a.
    CVector transport(const CVector& a) const;
};

struct CGOAnsatz {
    PhaseSpec phase;
    int K = 0;
    Field vapp;
    Field lap_vapp;
    NavierData data;
    NavierSolution v_exact;
    double max_exponent = 0.0; // max over Ω̄ of (t − φ)/h
};

CGOAnsatz build_probe(const NavierOperator& background, const PhaseSpec& spec, const AmplitudeSet& amplitudes,
                      int K);

// Values of vapp, ∇vapp and Δvapp at one point, from closed-form phase
// derivatives and interpolated amplitude derivatives.
struct AnsatzPoint {
    cplx v, lap;
    Eigen::Vector3cd grad;
};
AnsatzPoint evaluate_ansatz(const Vec3& x, const PhaseSpec& spec, const AmplitudeSet& amplitudes, int K);

// sup over the valid z-grid nodes of |e^{−Φ/h} h⁴ (Δ² + κ²) vapp| for each h,
// with Φ = −log z.
std::vector<double> wkb_residual(const AmplitudeSet& amplitudes, int K, const std::vector<double>& hs);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// w orthogonal to the direction from x0 to the domain centroid; this keeps
// the w-axis away from Ω.
Vec3 default_direction(const Vec3& x0, const DomainSpec& domain);

} // namespace enclosure
