#pragma once

#include <string>
#include <vector>

#include "enclosure/cgo.hpp"
#include "enclosure/forward.hpp"

namespace enclosure {

// ∫∂Ω (∂u/∂ν · conj f2 + ∂ν(Δu) · conj f1) dS with the grid's flux weights.
cplx pair_dtn(const DtNTrace& dtn, const NavierData& f, const Grid& grid);

struct IndicatorSample {
    Vec3 x0 = Vec3::Zero();
    Vec3 w = Vec3::UnitX();
    double h = 0.0;
    double t = 0.0;
    cplx value{0.0, 0.0};
    cplx value_volume_oracle{0.0, 0.0};
    // solver diagnostics: medium-side solve and background probe solve
    int iterations = 0;
    double residual = 0.0;
    int probe_iterations = 0;
    double probe_residual = 0.0;
    double max_exponent = 0.0;
};

struct IndicatorTable {
    std::vector<IndicatorSample> samples;
    std::array<int, 3> resolution{0, 0, 0};
    int dim = 3;
    int K = 0;
    std::string medium; // short description for output headers

    // Sorts by (x0, w, t) then decreasing h; rejects duplicate keys and h ≤ 0.
    void normalize();
};

enum class IndicatorRoute {
    // pairing of the reflected solution w = u − v; no cancellation between
    // two large pairings
    Reflected,
    // pair(dtn(u)) − pair(dtn(v)) as two separate pairings
    Direct,
};

// value = pair(dtn(u), f) − pair(dtn(v_exact), f) with f the Navier data of
// v_exact. When `u_out` is given it receives u.
IndicatorSample indicator_boundary(const NavierOperator& medium_op, const CGOAnsatz& ansatz,
                                   IndicatorRoute route = IndicatorRoute::Reflected,
                                   NavierSolution* u_out = nullptr);

// Volume form of the indicator:
// −I = Σ W [(γ̃−1) Δu conj(Δv) + κ²(ñ−1) u conj(v) + (Ã·Du) conj(v)].
cplx indicator_volume_oracle(const NavierOperator& medium_op, const NavierSolution& u, const NavierSolution& v);

struct NormDiagnostics {
    double h = 0.0;
    double v_l2 = 0.0;    // ‖v‖²_{L²(D)}
    double grad_l2 = 0.0; // ‖∇v‖²_{L²(D)}
    double lap_l2 = 0.0;  // ‖Δv‖²_{L²(D)}
    // same quadrature for vapp alone, no grid correction
    double vapp_l2 = 0.0;
    double lap_vapp_l2 = 0.0;
};

// Staircase quadrature over D of v_exact and its derivatives: closed-form
// ansatz derivatives plus differenced correction v_exact − vapp.
NormDiagnostics cgo_norm_diagnostics(const Grid& grid, const CGOAnsatz& ansatz, const AmplitudeSet& amplitudes,
                                     const ObstacleShape& shape);

struct ProbeSetup {
    Vec3 x0 = Vec3::Zero();
    Vec3 w = Vec3::UnitX();
    int K = 0;
};

// Builds the probe for (x0, w, h, t) and evaluates both routes.
IndicatorSample sample_indicator(const NavierOperator& background, const NavierOperator& medium_op,
                                 const AmplitudeSet& amplitudes, const ProbeSetup& probe, double h, double t,
                                 IndicatorRoute route = IndicatorRoute::Reflected);

} // namespace enclosure
