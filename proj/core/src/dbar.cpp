#include <cmath>

#include "enclosure/cgo.hpp"

namespace enclosure {

namespace {

// ∂a∂b H1 = a/(a²+b²), ∂a∂b H2 = b/(a²+b²); both continuous at the origin.
double H1(double a, double b) {
    const double r2 = a * a + b * b;
    if (r2 == 0.0) return 0.0;
    const double t = a == 0.0 ? 0.0 : a * std::atan(b / a);
    return t + 0.5 * b * std::log(r2);
}

double H2(double a, double b) { return H1(b, a); }

cplx G(double a, double b) { return {H1(a, b), -H2(a, b)}; }

} // namespace

cplx cell_integral(double a1, double a2, double b1, double b2) {
    return G(a2, b2) - G(a1, b2) - G(a2, b1) + G(a1, b1);
}

CauchyTransform::CauchyTransform(const ZGrid& grid) : grid_(grid) {
    const int ws = 2 * grid.ns - 1, wr = 2 * grid.nr - 1;
    kernel_.resize(static_cast<std::size_t>(ws) * wr);
    const double hs = 0.5 * grid.ds, hr = 0.5 * grid.dr;
    for (int q = -(grid.nr - 1); q <= grid.nr - 1; ++q)
        for (int p = -(grid.ns - 1); p <= grid.ns - 1; ++p) {
            const double a = p * grid.ds, b = q * grid.dr;
            kernel_[static_cast<std::size_t>(q + grid.nr - 1) * ws + (p + grid.ns - 1)] =
                cell_integral(a - hs, a + hs, b - hr, b + hr) / kPi;
        }
}

CVector CauchyTransform::apply(const CVector& f) const {
    const int ns = grid_.ns, nr = grid_.nr;
    const int ws = 2 * ns - 1;
    CVector u = CVector::Zero(f.size());
    for (int j = 0; j < nr; ++j)
        for (int i = 0; i < ns; ++i) {
            cplx acc = 0.0;
            for (int jj = 0; jj < nr; ++jj) {
                const cplx* krow = &kernel_[static_cast<std::size_t>(j - jj + nr - 1) * ws + (i + ns - 1)];
                const cplx* frow = f.data() + static_cast<std::size_t>(jj) * ns;
                double re = 0.0, im = 0.0;
                for (int ii = 0; ii < ns; ++ii) {
                    const cplx k = krow[-ii];
                    const cplx v = frow[ii];
                    re += k.real() * v.real() - k.imag() * v.imag();
                    im += k.real() * v.imag() + k.imag() * v.real();
                }
                acc += cplx(re, im);
            }
            u[grid_.index(i, j)] = acc;
        }
    return u;
}

CVector solve_dbar(const ZGrid& grid, const CVector& f) { return CauchyTransform(grid).apply(f); }

} // namespace enclosure
