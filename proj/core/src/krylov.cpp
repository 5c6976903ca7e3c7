#include "enclosure/krylov.hpp"

#include <cmath>

namespace enclosure {

KrylovResult bicgstab(const Eigen::SparseMatrix<cplx>& A, const CVector& b,
                      const std::function<CVector(const CVector&)>& precondition, double tolerance,
                      int max_iterations) {
    KrylovResult out;
    const Eigen::Index n = b.size();
    out.x = CVector::Zero(n);
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        out.converged = true;
        return out;
    }
    CVector r = b;
    CVector r_hat = r;
    CVector p = CVector::Zero(n), v = CVector::Zero(n);
    cplx rho(1.0), alpha(1.0), omega(1.0);
    double rel = 1.0;
    out.history.push_back(rel);
    const double breakdown = 1e-300;
    for (int it = 1; it <= max_iterations; ++it) {
        const cplx rho_new = r_hat.dot(r);
        if (std::abs(rho_new) < breakdown * bnorm * bnorm) {
            // Shadow residual became orthogonal: restart from the current residual.
            r = b - A * out.x;
            r_hat = r;
            p.setZero();
            v.setZero();
            rho = alpha = omega = 1.0;
            continue;
        }
        const cplx beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        p = r + beta * (p - omega * v);
        const CVector p_hat = precondition(p);
        v = A * p_hat;
        alpha = rho / r_hat.dot(v);
        CVector s = r - alpha * v;
        out.iterations = it;
        if (s.norm() / bnorm < tolerance) {
            out.x += alpha * p_hat;
            r = b - A * out.x;
            rel = r.norm() / bnorm;
            out.history.push_back(rel);
            if (rel < tolerance) {
                out.converged = true;
                break;
            }
            continue;
        }
        const CVector s_hat = precondition(s);
        const CVector t = A * s_hat;
        const double tt = t.squaredNorm();
        omega = tt > 0.0 ? t.dot(s) / tt : cplx(0.0);
        out.x += alpha * p_hat + omega * s_hat;
        r = s - omega * t;
        rel = r.norm() / bnorm;
        out.history.push_back(rel);
        if (rel < tolerance) {
            // Guard against drift between recursive and true residual.
            const double true_rel = (b - A * out.x).norm() / bnorm;
            if (true_rel < tolerance) {
                rel = true_rel;
                out.converged = true;
                break;
            }
            r = b - A * out.x;
        }
        if (!std::isfinite(rel)) break;
    }
    out.residual = rel;
    return out;
}

} // namespace enclosure
