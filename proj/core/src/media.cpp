#include "enclosure/media.hpp"

#include <cmath>

namespace enclosure {

MediumSpec MediumSpec::background(double kappa) {
    MediumSpec m;
    m.kappa = kappa;
    return m;
}

bool MediumSpec::is_background() const {
    if (shape.is_empty()) return true;
    const bool no_a = A_D[0] == 0.0 && A_D[1] == 0.0 && A_D[2] == 0.0;
    return gamma_D == 0.0 && q_D == 0.0 && no_a && !gamma_profile && !q_profile;
}

void MediumSpec::validate() const {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ValidationError("kappa must be a nonnegative real");
    if (!gamma_profile && !(std::real(1.0 + gamma_D) > 0.0))
        throw ValidationError("Re(1 + gamma_D) must be positive");
    if (!q_profile && !(std::real(1.0 + q_D) > 0.0)) throw ValidationError("Re(1 + q_D) must be positive");
}

Coefficients evaluate_coefficients(const MediumSpec& medium, const Vec3& x) {
    Coefficients c;
    if (!medium.shape.contains(x)) return c;
    c.gamma = 1.0 + (medium.gamma_profile ? medium.gamma_profile(x) : medium.gamma_D);
    c.n = 1.0 + (medium.q_profile ? medium.q_profile(x) : medium.q_D);
    c.A = medium.A_D;
    return c;
}

double unit_ball_volume(int dim) { return std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0); }

AdmissibilityReport check_admissibility(double a_inv_norm, double b_norm, double c_norm, double kappa,
                                        double domain_volume, int dim) {
    for (double v : {a_inv_norm, b_norm, c_norm, kappa, domain_volume})
        if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("admissibility inputs must be finite and nonnegative");
    if (dim < 1) throw ValidationError("dim must be positive");
    AdmissibilityReport r;
    r.omega_n = unit_ball_volume(dim);
    r.domain_volume = domain_volume;
    const double p = std::pow(domain_volume / r.omega_n, 2.0 / dim);
    const double k2c2 = kappa * kappa * c_norm * c_norm;
    r.lhs_small1 = 0.5 * (1.0 - p * (k2c2 + a_inv_norm));
    r.lhs_small2 = 1.0 - 0.5 * p * (b_norm * b_norm + k2c2 + a_inv_norm);
    r.C0 = r.lhs_small1;
    r.C0_tilde = r.lhs_small2;
    r.pass = r.lhs_small1 > 0.0 && r.lhs_small2 > 0.0;
    return r;
}

MediumNorms medium_norms(const MediumSpec& medium, const Grid& grid) {
    MediumNorms nrm;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (!grid.active(n)) continue;
        const Coefficients c = evaluate_coefficients(medium, grid.point(n));
        nrm.a_inv = std::max(nrm.a_inv, std::abs(1.0 / c.gamma));
        double a2 = 0.0;
        for (const auto& v : c.A) a2 += std::norm(v);
        nrm.b = std::max(nrm.b, std::sqrt(a2));
        nrm.c = std::max(nrm.c, std::abs(c.n));
    }
    return nrm;
}

} // namespace enclosure
