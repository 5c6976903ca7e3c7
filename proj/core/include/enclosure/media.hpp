#pragma once

#include <array>
#include <functional>

#include "enclosure/grid.hpp"
#include "enclosure/shape.hpp"

namespace enclosure {

struct MediumSpec {
    cplx gamma_D{0.0, 0.0};
    cplx q_D{0.0, 0.0};
    std::array<cplx, 3> A_D{};
    double kappa = 1.0;
    ObstacleShape shape;
    // Optional position-dependent jumps inside D; override the constants.
    std::function<cplx(const Vec3&)> gamma_profile;
    std::function<cplx(const Vec3&)> q_profile;

    static MediumSpec background(double kappa);
    bool is_background() const;
    void validate() const;
};

struct Coefficients {
    cplx gamma{1.0, 0.0};
    std::array<cplx, 3> A{};
    cplx n{1.0, 0.0};
};

Coefficients evaluate_coefficients(const MediumSpec& medium, const Vec3& x);

struct AdmissibilityReport {
    double lhs_small1 = 0.0;
    double lhs_small2 = 0.0;
    double omega_n = 0.0;
    double domain_volume = 0.0;
    bool pass = false;
    double C0 = 0.0;
    double C0_tilde = 0.0;
};

double unit_ball_volume(int dim);

AdmissibilityReport check_admissibility(double a_inv_norm, double b_norm, double c_norm, double kappa,
                                        double domain_volume, int dim);

// Sup norms of the coefficient fields sampled on the grid:
// a_inv = max|1/γ̃|, b = max|Ã|, c = max|ñ|.
struct MediumNorms {
    double a_inv = 0.0;
    double b = 0.0;
    double c = 0.0;
};
MediumNorms medium_norms(const MediumSpec& medium, const Grid& grid);

} // namespace enclosure
