#include <cmath>

#include "enclosure/cgo.hpp"

namespace enclosure {

AnsatzPoint evaluate_ansatz(const Vec3& x, const PhaseSpec& spec, const AmplitudeSet& amps, int K) {
    const Cylindrical c = cylindrical_coords(x, spec, 0.0);
    const auto smp = amps.sample(c.z.real(), c.r);
    const double h = spec.h;
    cplx A = 0.0, As = 0.0, Ar = 0.0, L = 0.0;
    double hk = 1.0;
    for (int k = 0; k <= K; ++k, hk *= h) {
        A += hk * smp.a[k];
        As += hk * smp.a_s[k];
        Ar += hk * smp.a_r[k];
        L += hk * smp.lap[k];
    }
    const cplx z = c.z;
    const cplx I(0.0, 1.0);
    const cplx Ps = -1.0 / z, Pr = -I / z;
    const cplx lapPhi = 2.0 * (spec.dim - 2.0) / (z * cplx(0.0, 2.0 * c.r));
    const cplx E = std::exp((spec.t - std::log(z)) / h);
    AnsatzPoint p;
    p.v = E * A;
    p.lap = E * ((Ps * Ps + Pr * Pr) * A / (h * h) + (2.0 * (Ps * As + Pr * Ar) + lapPhi * A) / h + L);
    const cplx gs = Ps * A / h + As, gr = Pr * A / h + Ar;
    for (int a = 0; a < 3; ++a) p.grad[a] = E * (gs * spec.w[a] + gr * c.theta[a]);
    return p;
}

CGOAnsatz build_probe(const NavierOperator& background, const PhaseSpec& spec, const AmplitudeSet& amps, int K) {
    if (K > amps.K) throw ValidationError("requested order exceeds the built amplitudes");
    const Grid& grid = background.grid();
    validate_phase(spec, grid);
    CGOAnsatz out;
    out.phase = spec;
    out.K = K;
    out.vapp = {FieldRole::Probe, CVector::Zero(grid.size())};
    out.lap_vapp = {FieldRole::Probe, CVector::Zero(grid.size())};
    out.max_exponent = -1e300;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (!grid.active(n)) continue;
        Vec3 y = grid.point(n) - spec.x0;
        if (spec.dim == 2) y[2] = 0.0;
        out.max_exponent = std::max(out.max_exponent, (spec.t - 0.5 * std::log(y.squaredNorm())) / spec.h);
    }
    if (out.max_exponent > 700.0) throw ValidationError("probe overflows: (t - phi)/h exceeds 700 on the domain");
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (!grid.active(n)) continue;
        const AnsatzPoint p = evaluate_ansatz(grid.point(n), spec, amps, K);
        out.vapp.values[n] = p.v;
        out.lap_vapp.values[n] = p.lap;
    }
    const std::size_t nb = grid.boundary_count();
    out.data.f1.resize(nb);
    out.data.f2.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t n = grid.boundary_nodes()[b];
        out.data.f1[b] = out.vapp.values[n];
        out.data.f2[b] = out.lap_vapp.values[n];
    }
    out.v_exact = background.solve(out.data);
    out.v_exact.u.role = FieldRole::Probe;
    return out;
}

} // namespace enclosure
