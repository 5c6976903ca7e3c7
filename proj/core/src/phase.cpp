#include <algorithm>
#include <cmath>

#include "enclosure/cgo.hpp"

namespace enclosure {

void validate_phase(const PhaseSpec& spec, const Grid& grid, double delta) {
    if (spec.dim != grid.dim()) throw ValidationError("phase dimension does not match the grid");
    if (std::abs(spec.w.head(spec.dim).norm() - 1.0) > 1e-12) throw ValidationError("w must be a unit vector");
    if (spec.dim == 2 && spec.w[2] != 0.0) throw ValidationError("w must lie in the plane for dim 2");
    if (!(spec.h > 0.0)) throw ValidationError("h must be positive");
    if (grid.domain().in_hull(spec.x0)) throw ValidationError("x0 lies inside the hull of the domain");
    const double limit = std::cos(delta);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (!grid.active(n)) continue;
        const Vec3 y = grid.point(n) - spec.x0;
        const double c = spec.w.dot(y) / y.norm();
        if (!(std::abs(c) < limit)) throw ValidationError("psi is not smooth on the domain for this w");
    }
}

PhaseEval eval_phase(const Vec3& x, const PhaseSpec& spec) {
    Vec3 y = x - spec.x0;
    if (spec.dim == 2) y[2] = 0.0;
    const double rho2 = y.squaredNorm();
    if (rho2 == 0.0) throw ValidationError("phase is singular at x0");
    const double rho = std::sqrt(rho2);
    const double n = spec.dim;
    PhaseEval e;
    e.phi = 0.5 * std::log(rho2);
    e.grad_phi = y / rho2;
    e.lap_phi = (n - 2.0) / rho2;

    const Vec3& w = spec.w;
    const double wy = w.dot(y);
    const double c = std::clamp(wy / rho, -1.0, 1.0);
    const Vec3 grad_c = w / rho - wy * y / (rho2 * rho);
    const double lap_c = -(n - 1.0) * wy / (rho2 * rho);
    const double s2 = 1.0 - c * c;
    const double s = std::sqrt(s2);
    e.psi = std::acos(c);
    e.grad_psi = -grad_c / s;
    e.lap_psi = -lap_c / s - c * grad_c.squaredNorm() / (s2 * s);
    return e;
}

EikonalReport verify_eikonal(const PhaseSpec& spec, const Grid& grid, double tolerance) {
    EikonalReport r;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (!grid.active(n)) continue;
        const PhaseEval e = eval_phase(grid.point(n), spec);
        r.modulus_residual =
            std::max(r.modulus_residual, std::abs(e.grad_psi.squaredNorm() - e.grad_phi.squaredNorm()));
        r.orthogonality_residual = std::max(r.orthogonality_residual, std::abs(e.grad_phi.dot(e.grad_psi)));
    }
    r.flagged = !(r.modulus_residual <= tolerance && r.orthogonality_residual <= tolerance);
    return r;
}

Cylindrical cylindrical_coords(const Vec3& x, const PhaseSpec& spec, double r_min) {
    Vec3 y = x - spec.x0;
    if (spec.dim == 2) y[2] = 0.0;
    const double s = spec.w.dot(y);
    const Vec3 perp = y - s * spec.w;
    const double r = perp.norm();
    if (!(r >= r_min) || r == 0.0) throw ValidationError("point too close to the w-axis");
    Cylindrical c;
    c.z = cplx(s, r);
    c.r = r;
    c.theta = perp / r;
    return c;
}

Vec3 default_direction(const Vec3& x0, const DomainSpec& domain) {
    Vec3 u = domain.centroid() - x0;
    if (domain.dim == 2) u[2] = 0.0;
    u.normalize();
    if (domain.dim == 2) return Vec3(-u[1], u[0], 0.0);
    int axis = 0;
    for (int a = 1; a < 3; ++a)
        if (std::abs(u[a]) < std::abs(u[axis])) axis = a;
    Vec3 e = Vec3::Zero();
    e[axis] = 1.0;
    Vec3 w = e - e.dot(u) * u;
    return w.normalized();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    return sxy / sxx;
}

} // namespace enclosure
