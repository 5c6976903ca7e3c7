#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "enclosure/indicator.hpp"
#include "enclosure/reconstruct.hpp"

namespace enclosure::testing {

// Ball obstacle inside a centered box, background and medium operators.
struct BallSetup {
    DomainSpec domain;
    std::shared_ptr<const Grid> grid;
    MediumSpec medium;
    std::unique_ptr<NavierOperator> background;
    std::unique_ptr<NavierOperator> medium_op;

    BallSetup(int dim, int resolution, double radius = 0.5, double kappa = 2.0, SolverOptions opts = {}) {
        const Vec3 lo(-1.0, -1.0, dim == 3 ? -1.0 : 0.0), hi(1.0, 1.0, dim == 3 ? 1.0 : 0.0);
        domain = DomainSpec::box(dim, lo, hi);
        grid = std::make_shared<const Grid>(build_grid(domain, resolution));
        medium = MediumSpec::background(kappa);
        medium.gamma_D = 0.5;
        medium.q_D = 1.0;
        medium.shape = ObstacleShape::ball(Vec3::Zero(), radius);
        background = std::make_unique<NavierOperator>(grid, MediumSpec::background(kappa), opts);
        medium_op = std::make_unique<NavierOperator>(grid, medium, opts);
    }

    ProbeSetup probe(const Vec3& x0, int K = 0) const { return {x0, default_direction(x0, domain), K}; }

    AmplitudeSet amplitudes(const ProbeSetup& p, int K = 0) const {
        PhaseSpec s;
        s.dim = grid->dim();
        s.x0 = p.x0;
        s.w = p.w;
        return build_amplitudes(s, *grid, medium.kappa, HolomorphicSeed::One, K);
    }

    double h_D(const Vec3& x0) const { return support_log_distance(medium.shape, x0, domain); }
};

// Least squares for y ≈ X β.
inline Eigen::VectorXd least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    return X.colPivHouseholderQr().solve(y);
}

// Slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    Eigen::MatrixXd X(x.size(), 2);
    Eigen::VectorXd Y(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = x[i];
        Y[i] = y[i];
    }
    return least_squares(X, Y)[1];
}

} // namespace enclosure::testing
