#pragma once

#include <functional>
#include <vector>

#include <Eigen/SparseCore>

#include "enclosure/common.hpp"

namespace enclosure {

struct KrylovResult {
    CVector x;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::vector<double> history;
};

// Right-preconditioned BiCGSTAB; the monitored residual is the true
// relative residual ||b - Ax|| / ||b||.
KrylovResult bicgstab(const Eigen::SparseMatrix<cplx>& A, const CVector& b,
                      const std::function<CVector(const CVector&)>& precondition, double tolerance,
                      int max_iterations);

} // namespace enclosure
