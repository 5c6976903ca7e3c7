#include <algorithm>
#include <cmath>

#include "enclosure/cgo.hpp"

namespace enclosure {

namespace {

// First and second derivative along one line of a strided array.
// Fourth order in the interior, second order near the ends.
void line_d1(const cplx* f, cplx* out, int n, std::size_t stride, double h) {
    auto F = [&](int i) { return f[static_cast<std::size_t>(i) * stride]; };
    for (int i = 0; i < n; ++i) {
        cplx d;
        if (i >= 2 && i <= n - 3)
            d = (-F(i + 2) + 8.0 * F(i + 1) - 8.0 * F(i - 1) + F(i - 2)) / (12.0 * h);
        else if (i == 0)
            d = (-3.0 * F(0) + 4.0 * F(1) - F(2)) / (2.0 * h);
        else if (i == n - 1)
            d = (3.0 * F(n - 1) - 4.0 * F(n - 2) + F(n - 3)) / (2.0 * h);
        else
            d = (F(i + 1) - F(i - 1)) / (2.0 * h);
        out[static_cast<std::size_t>(i) * stride] = d;
    }
}

void line_d2(const cplx* f, cplx* out, int n, std::size_t stride, double h) {
    auto F = [&](int i) { return f[static_cast<std::size_t>(i) * stride]; };
    const double h2 = h * h;
    for (int i = 0; i < n; ++i) {
        cplx d;
        if (i >= 2 && i <= n - 3)
            d = (-F(i + 2) + 16.0 * F(i + 1) - 30.0 * F(i) + 16.0 * F(i - 1) - F(i - 2)) / (12.0 * h2);
        else if (i == 0)
            d = (2.0 * F(0) - 5.0 * F(1) + 4.0 * F(2) - F(3)) / h2;
        else if (i == n - 1)
            d = (2.0 * F(n - 1) - 5.0 * F(n - 2) + 4.0 * F(n - 3) - F(n - 4)) / h2;
        else
            d = (F(i + 1) - 2.0 * F(i) + F(i - 1)) / h2;
        out[static_cast<std::size_t>(i) * stride] = d;
    }
}

CVector along_s(const ZGrid& g, const CVector& a, bool second) {
    CVector out(a.size());
    for (int j = 0; j < g.nr; ++j) {
        const std::size_t off = g.index(0, j);
        if (second)
            line_d2(a.data() + off, out.data() + off, g.ns, 1, g.ds);
        else
            line_d1(a.data() + off, out.data() + off, g.ns, 1, g.ds);
    }
    return out;
}

CVector along_r(const ZGrid& g, const CVector& a, bool second) {
    CVector out(a.size());
    for (int i = 0; i < g.ns; ++i) {
        if (second)
            line_d2(a.data() + i, out.data() + i, g.nr, g.ns, g.dr);
        else
            line_d1(a.data() + i, out.data() + i, g.nr, g.ns, g.dr);
    }
    return out;
}

double taper(int d, int width) {
    if (d <= 0) return 1.0;
    if (d >= width) return 0.0;
    const double c = std::cos(0.5 * kPi * d / width);
    return c * c;
}

// Cubic Lagrange weights for offsets −1, 0, 1, 2.
std::array<double, 4> cubic_weights(double t) {
    return {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
            -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
}

} // namespace

CVector TransportOperators::ds(const CVector& a) const { return along_s(*grid, a, false); }
CVector TransportOperators::dr(const CVector& a) const { return along_r(*grid, a, false); }

CVector TransportOperators::laplacian(const CVector& a) const {
    CVector out = along_s(*grid, a, true) + along_r(*grid, a, true);
    if (dim != 2) {
        const CVector ar = dr(a);
        for (int j = 0; j < grid->nr; ++j) {
            const double r = grid->r0 + j * grid->dr;
            for (int i = 0; i < grid->ns; ++i) out[grid->index(i, j)] += (dim - 2.0) / r * ar[grid->index(i, j)];
        }
    }
    return out;
}

CVector TransportOperators::transport(const CVector& a) const {
    const CVector as = ds(a), ar = dr(a);
    CVector out(a.size());
    for (int j = 0; j < grid->nr; ++j)
        for (int i = 0; i < grid->ns; ++i) {
            const std::size_t n = grid->index(i, j);
            const cplx z = grid->node(i, j);
            const cplx rho(0.0, 2.0 * z.imag());
            out[n] = -as[n] / z - cplx(0.0, 1.0) * ar[n] / z + (dim - 2.0) / (z * rho) * a[n];
        }
    return out;
}

AmplitudeSet build_amplitudes(const PhaseSpec& spec, const Grid& grid, double kappa, HolomorphicSeed seed, int K,
                              const AmplitudeOptions& options) {
    if (K < 0 || K > 2) throw ValidationError("amplitude order K must be 0, 1 or 2");
    if (options.resolution < 16) throw ValidationError("amplitude resolution must be at least 16");
    if (!(options.margin_fraction >= 0.0 && options.margin_fraction <= 2.0))
        throw ValidationError("amplitude margin fraction must lie in [0, 2]");

    const double r_floor = options.r_min_fraction * grid.domain().diameter();
    double s_min = 1e300, s_max = -1e300, r_min = 1e300, r_max = -1e300;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (!grid.active(n)) continue;
        Cylindrical c;
        try {
            c = cylindrical_coords(grid.point(n), spec, r_floor);
        } catch (const ValidationError&) {
            throw ValidationError("domain approaches the w-axis; amplitudes would be ill-conditioned");
        }
        s_min = std::min(s_min, c.z.real());
        s_max = std::max(s_max, c.z.real());
        r_min = std::min(r_min, c.r);
        r_max = std::max(r_max, c.r);
    }
    if (s_max <= s_min || r_max <= r_min) throw ValidationError("degenerate image of the domain in the z-plane");

    const int N = options.resolution;
    const int m = static_cast<int>(
        std::lround(options.margin_fraction * (N - 1) / (1.0 + 2.0 * options.margin_fraction)));
    AmplitudeSet out;
    out.dim = spec.dim;
    out.K = K;
    out.kappa = kappa;
    out.seed = seed;
    ZGrid& g = out.zgrid;
    g.ns = g.nr = N;
    g.ds = (s_max - s_min) / (N - 1 - 2 * m);
    g.s0 = s_min - m * g.ds;
    // cells must stay off the axis r = 0
    int m_low = m;
    for (;;) {
        g.dr = (r_max - r_min) / (N - 1 - m - m_low);
        if (m_low == 0 || r_min - (m_low + 0.5) * g.dr > 0.2 * r_min) break;
        --m_low;
    }
    g.r0 = r_min - m_low * g.dr;
    out.i_lo = m;
    out.i_hi = N - 1 - m;
    out.j_lo = m_low;
    out.j_hi = N - 1 - m;

    const std::size_t size = g.size();
    const double alpha = (2.0 - spec.dim) / 2.0;
    CVector z(size), rho_a(size), chi(size);
    const int tw = std::max(1, m - 2), tw_low = std::max(1, m_low - 2);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) {
            const std::size_t n = g.index(i, j);
            z[n] = g.node(i, j);
            rho_a[n] = alpha == 0.0 ? cplx(1.0) : std::pow(cplx(0.0, 2.0 * z[n].imag()), alpha);
            const double cs = taper(std::max(out.i_lo - i, i - out.i_hi), tw);
            const double cr = j < out.j_lo ? taper(out.j_lo - j, tw_low) : taper(j - out.j_hi, tw);
            chi[n] = cs * cr;
        }

    TransportOperators ops{&g, spec.dim};
    CauchyTransform cauchy(g);
    auto derive = [&](int k) {
        const CVector& a = out.a[k];
        out.a_s[k] = ops.ds(a);
        out.a_r[k] = ops.dr(a);
        out.lap[k] = ops.laplacian(a);
        out.S[k] = ops.laplacian(ops.transport(a)) + ops.transport(out.lap[k]);
        out.bilap[k] = ops.laplacian(out.lap[k]);
    };

    out.a[0] = CVector(size);
    for (std::size_t n = 0; n < size; ++n) out.a[0][n] = rho_a[n] * (seed == HolomorphicSeed::Z ? z[n] : cplx(1.0));
    out.F[0] = CVector::Zero(size);
    derive(0);
    for (int k = 1; k <= K; ++k) {
        CVector F(size);
        for (std::size_t n = 0; n < size; ++n) {
            const cplx z2 = z[n] * z[n];
            if (k == 1)
                F[n] = -(z2 / 8.0) * out.S[0][n];
            else
                F[n] = -(z2 / 16.0) * (out.bilap[0][n] + kappa * kappa * out.a[0][n] + 2.0 * out.S[1][n]);
            F[n] *= chi[n];
        }
        CVector G(size);
        for (std::size_t n = 0; n < size; ++n) G[n] = F[n] / rho_a[n];
        const CVector U = cauchy.apply(cauchy.apply(G));
        out.a[k] = CVector(size);
        for (std::size_t n = 0; n < size; ++n) out.a[k][n] = rho_a[n] * U[n];
        out.F[k] = std::move(F);
        derive(k);
    }
    return out;
}

AmplitudeSet::Sample AmplitudeSet::sample(double s, double r) const {
    const ZGrid& g = zgrid;
    const double fi = (s - g.s0) / g.ds, fj = (r - g.r0) / g.dr;
    const int i = std::clamp(static_cast<int>(std::floor(fi)), 1, g.ns - 3);
    const int j = std::clamp(static_cast<int>(std::floor(fj)), 1, g.nr - 3);
    const auto wi = cubic_weights(fi - i), wj = cubic_weights(fj - j);
    Sample out;
    for (int k = 0; k <= K; ++k)
        for (int q = 0; q < 4; ++q)
            for (int p = 0; p < 4; ++p) {
                const double wt = wi[p] * wj[q];
                const std::size_t n = g.index(i - 1 + p, j - 1 + q);
                out.a[k] += wt * a[k][n];
                out.a_s[k] += wt * a_s[k][n];
                out.a_r[k] += wt * a_r[k][n];
                out.lap[k] += wt * lap[k][n];
            }
    return out;
}

std::vector<double> wkb_residual(const AmplitudeSet& amps, int K, const std::vector<double>& hs) {
    if (K > amps.K) throw ValidationError("requested order exceeds the built amplitudes");
    const ZGrid& g = amps.zgrid;
    const double k2 = amps.kappa * amps.kappa;
    std::vector<double> out(hs.size(), 0.0);
    for (int j = amps.j_lo; j <= amps.j_hi; ++j)
        for (int i = amps.i_lo; i <= amps.i_hi; ++i) {
            const std::size_t n = g.index(i, j);
            const cplx z = g.node(i, j);
            // T² a_k = (4/z²) F_k exactly on the grid.
            auto T2 = [&](int k) { return k <= K ? 4.0 / (z * z) * amps.F[k][n] : cplx(0.0); };
            auto S = [&](int k) { return k <= K ? amps.S[k][n] : cplx(0.0); };
            auto B = [&](int k) { return k <= K ? amps.bilap[k][n] + k2 * amps.a[k][n] : cplx(0.0); };
            const std::array<cplx, 5> c = {4.0 * T2(0), 2.0 * S(0) + 4.0 * T2(1), B(0) + 2.0 * S(1) + 4.0 * T2(2),
                                           B(1) + 2.0 * S(2), B(2)};
            for (std::size_t q = 0; q < hs.size(); ++q) {
                const double h = hs[q];
                cplx acc = 0.0;
                double hp = h * h;
                for (int p = 0; p < 5; ++p, hp *= h) acc += hp * c[p];
                out[q] = std::max(out[q], std::abs(acc));
            }
        }
    return out;
}

} // namespace enclosure
