#include <algorithm>
#include <cmath>
#include <tuple>

#include "enclosure/indicator.hpp"

namespace enclosure {

cplx pair_dtn(const DtNTrace& dtn, const NavierData& f, const Grid& grid) {
    const std::size_t nb = grid.boundary_count();
    if (static_cast<std::size_t>(dtn.du_dnu.size()) != nb || static_cast<std::size_t>(dtn.dlap_dnu.size()) != nb ||
        static_cast<std::size_t>(f.f1.size()) != nb || static_cast<std::size_t>(f.f2.size()) != nb)
        throw ValidationError("DtN trace and Navier data are not aligned with the boundary");
    return pairwise_sum<cplx>(0, nb, [&](std::size_t b) {
        return grid.flux_weight(b) * (dtn.du_dnu[b] * std::conj(f.f2[b]) + dtn.dlap_dnu[b] * std::conj(f.f1[b]));
    });
}

void IndicatorTable::normalize() {
    auto key = [](const IndicatorSample& s) {
        return std::make_tuple(s.x0[0], s.x0[1], s.x0[2], s.w[0], s.w[1], s.w[2], s.t, -s.h);
    };
    for (const auto& s : samples)
        if (!(s.h > 0.0)) throw ValidationError("indicator sample with non-positive h");
    std::sort(samples.begin(), samples.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (key(samples[i]) == key(samples[i - 1])) throw ValidationError("duplicate indicator sample key");
}

IndicatorSample indicator_boundary(const NavierOperator& medium_op, const CGOAnsatz& ansatz, IndicatorRoute route,
                                   NavierSolution* u_out) {
    const Grid& g = medium_op.grid();
    const NavierData& f = ansatz.data;
    const NavierSolution& v = ansatz.v_exact;
    IndicatorSample s;
    s.x0 = ansatz.phase.x0;
    s.w = ansatz.phase.w;
    s.h = ansatz.phase.h;
    s.t = ansatz.phase.t;
    s.probe_iterations = v.stats.iterations;
    s.probe_residual = v.stats.residual;
    s.max_exponent = ansatz.max_exponent;
    if (route == IndicatorRoute::Reflected) {
        NavierSolution w = solve_reflected(medium_op, v);
        s.value = pair_dtn(extract_dtn(g, w), f, g);
        s.iterations = w.stats.iterations;
        s.residual = w.stats.residual;
        if (u_out) {
            w.u.values += v.u.values;
            w.m.values += v.m.values;
            w.lap_u_boundary += v.lap_u_boundary;
            w.lap_m_boundary += v.lap_m_boundary;
            w.u.role = FieldRole::U;
            *u_out = std::move(w);
        }
    } else {
        NavierSolution u = medium_op.solve(f);
        s.value = pair_dtn(extract_dtn(g, u), f, g) - pair_dtn(extract_dtn(g, v), f, g);
        s.iterations = u.stats.iterations;
        s.residual = u.stats.residual;
        if (u_out) *u_out = std::move(u);
    }
    return s;
}

cplx indicator_volume_oracle(const NavierOperator& medium_op, const NavierSolution& u, const NavierSolution& v) {
    const Grid& g = medium_op.grid();
    const CoefficientField& c = medium_op.coefficients();
    const double k2 = c.kappa * c.kappa;
    std::array<CVector, 3> du;
    if (c.has_A)
        for (int a = 0; a < g.dim(); ++a) du[a] = centered_derivative(g, u.u.values, a);
    const cplx minus_i(0.0, -1.0);
    const cplx neg = pairwise_sum<cplx>(0, g.size(), [&](std::size_t n) -> cplx {
        if (g.kind(n) != NodeKind::Interior) return 0.0;
        const cplx dg = c.gamma[n] - 1.0, dn = c.n[n] - 1.0;
        cplx acc = 0.0;
        if (dg != 0.0) acc += dg * (u.m.values[n] / c.gamma[n]) * std::conj(v.m.values[n]);
        if (dn != 0.0) acc += k2 * dn * u.u.values[n] * std::conj(v.u.values[n]);
        if (c.has_A) {
            cplx adu = 0.0;
            for (int a = 0; a < g.dim(); ++a) adu += c.A[n][a] * minus_i * du[a][n];
            acc += adu * std::conj(v.u.values[n]);
        }
        return g.volume_weight(n) * acc;
    });
    return -neg;
}

NormDiagnostics cgo_norm_diagnostics(const Grid& grid, const CGOAnsatz& ansatz, const AmplitudeSet& amplitudes,
                                     const ObstacleShape& shape) {
    const CVector corr = ansatz.v_exact.u.values - ansatz.vapp.values;
    const CVector lap_corr = discrete_laplacian(grid, corr);
    std::array<CVector, 3> dcorr;
    for (int a = 0; a < grid.dim(); ++a) dcorr[a] = centered_derivative(grid, corr, a);
    std::vector<std::size_t> nodes;
    for (std::size_t n = 0; n < grid.size(); ++n)
        if (grid.kind(n) == NodeKind::Interior && shape.contains(grid.point(n))) nodes.push_back(n);
    std::vector<std::array<double, 5>> vals(nodes.size());
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const std::size_t n = nodes[q];
        const AnsatzPoint p = evaluate_ansatz(grid.point(n), ansatz.phase, amplitudes, ansatz.K);
        double g2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) g2 += std::norm(p.grad[a] + dcorr[a][n]);
        const double W = grid.volume_weight(n);
        vals[q] = {W * std::norm(ansatz.v_exact.u.values[n]), W * g2, W * std::norm(p.lap + lap_corr[n]), W * std::norm(p.v),
                   W * std::norm(p.lap)};
    }
    NormDiagnostics d;
    d.h = ansatz.phase.h;
    d.v_l2 = pairwise_sum<double>(0, vals.size(), [&](std::size_t q) { return vals[q][0]; });
    d.grad_l2 = pairwise_sum<double>(0, vals.size(), [&](std::size_t q) { return vals[q][1]; });
    d.lap_l2 = pairwise_sum<double>(0, vals.size(), [&](std::size_t q) { return vals[q][2]; });
    d.vapp_l2 = pairwise_sum<double>(0, vals.size(), [&](std::size_t q) { return vals[q][3]; });
    d.lap_vapp_l2 = pairwise_sum<double>(0, vals.size(), [&](std::size_t q) { return vals[q][4]; });
    return d;
}

IndicatorSample sample_indicator(const NavierOperator& background, const NavierOperator& medium_op,
                                 const AmplitudeSet& amplitudes, const ProbeSetup& probe, double h, double t,
                                 IndicatorRoute route) {
    PhaseSpec spec;
    spec.dim = background.grid().dim();
    spec.x0 = probe.x0;
    spec.w = probe.w;
    spec.h = h;
    spec.t = t;
    const CGOAnsatz ansatz = build_probe(background, spec, amplitudes, probe.K);
    NavierSolution u;
    IndicatorSample s = indicator_boundary(medium_op, ansatz, route, &u);
    s.value_volume_oracle = indicator_volume_oracle(medium_op, u, ansatz.v_exact);
    return s;
}

} // namespace enclosure
