#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "enclosure/reconstruct.hpp"

namespace enclosure {

std::vector<Vec3> probe_points(const DomainSpec& domain, const ProbeLayout& layout) {
    if (layout.count < 1) throw ValidationError("probe count must be positive");
    const Vec3 c = domain.centroid();
    std::mt19937_64 rng(layout.seed);
    std::uniform_real_distribution<double> jit(-layout.jitter, layout.jitter);
    const double offset = std::isnan(layout.offset) ? kPi / layout.count : layout.offset;
    std::vector<Vec3> out;
    out.reserve(layout.count);
    for (int k = 0; k < layout.count; ++k) {
        Vec3 x;
        if (domain.dim == 2) {
            double a = offset + 2.0 * kPi * k / layout.count;
            if (layout.jitter > 0.0) a += jit(rng);
            x = c + layout.radius * Vec3(std::cos(a), std::sin(a), 0.0);
        } else {
            // Fibonacci sphere
            const double golden = kPi * (3.0 - std::sqrt(5.0));
            const double zc = 1.0 - (2.0 * k + 1.0) / layout.count;
            const double rc = std::sqrt(std::max(0.0, 1.0 - zc * zc));
            double a = offset + golden * k;
            if (layout.jitter > 0.0) a += jit(rng);
            x = c + layout.radius * Vec3(rc * std::cos(a), rc * std::sin(a), zc);
        }
        if (domain.in_hull(x)) throw ValidationError("probe radius places x0 inside the domain");
        out.push_back(x);
    }
    return out;
}

SupportEstimate fit_support(const std::vector<IndicatorSample>& samples, FitModel model) {
    SupportEstimate est;
    if (samples.empty()) return est;
    est.x0 = samples.front().x0;
    est.w = samples.front().w;
    est.t = samples.front().t;
    std::vector<std::pair<double, double>> pts; // (h, g)
    for (const auto& s : samples) {
        if ((s.x0 - est.x0).norm() > 0.0 || s.t != est.t) throw ValidationError("fit samples must share x0 and t");
        const double m = std::abs(s.value);
        if (!(m > kLogFloor) || !std::isfinite(m)) continue;
        pts.emplace_back(s.h, 0.5 * s.h * std::log(m));
    }
    std::sort(pts.begin(), pts.end());
    const int cols = model == FitModel::Affine ? 2 : 3;
    est.used = static_cast<int>(pts.size());
    if (est.used < 3 || est.used < cols) {
        est.usable = false;
        est.h_D_hat = -std::numeric_limits<double>::infinity();
        return est;
    }
    Eigen::MatrixXd X(est.used, cols);
    Eigen::VectorXd y(est.used);
    for (int i = 0; i < est.used; ++i) {
        const double h = pts[i].first;
        X(i, 0) = 1.0;
        X(i, 1) = h;
        if (cols == 3) X(i, 2) = h * std::log(h);
        y[i] = pts[i].second;
    }
    const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
    est.h_D_hat = est.t - beta[0];
    est.slope = beta[1];
    est.residual = std::sqrt((X * beta - y).squaredNorm() / est.used);
    est.usable = std::isfinite(est.h_D_hat);
    bool up = true, down = true;
    for (int i = 1; i < est.used; ++i) {
        up = up && pts[i].second >= pts[i - 1].second;
        down = down && pts[i].second <= pts[i - 1].second;
    }
    est.monotone = up || down;
    return est;
}

EnclosureMask build_enclosure(const std::vector<SupportEstimate>& estimates, const Grid& grid) {
    EnclosureMask mask;
    mask.inside.assign(grid.size(), 0);
    for (const auto& e : estimates)
        if (e.usable) mask.provenance.push_back({e.x0, e.h_D_hat});
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (!grid.active(n)) continue;
        const Vec3 x = grid.point(n);
        bool in = true;
        for (const auto& c : mask.provenance) {
            Vec3 y = x - c.x0;
            if (grid.dim() == 2) y[2] = 0.0;
            if (0.5 * std::log(y.squaredNorm()) < c.h_D_hat) {
                in = false;
                break;
            }
        }
        mask.inside[n] = in ? 1 : 0;
    }
    return mask;
}

ReconstructionScore score_reconstruction(const EnclosureMask& mask, const Grid& grid, const ObstacleShape& shape) {
    ReconstructionScore s;
    s.containment = true;
    std::vector<std::size_t> in_mask, missed;
    double vol_d = 0.0, vol_excess = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (!grid.active(n)) continue;
        const bool d = shape.contains(grid.point(n));
        const bool m = mask.inside[n] != 0;
        if (d) vol_d += grid.volume_weight(n);
        if (m && !d) vol_excess += grid.volume_weight(n);
        if (m) in_mask.push_back(n);
        if (d && !m) {
            s.containment = false;
            missed.push_back(n);
        }
    }
    s.excess = vol_d > 0.0 ? vol_excess / vol_d : std::numeric_limits<double>::infinity();
    double h1 = 0.0;
    for (std::size_t n : in_mask) h1 = std::max(h1, std::max(0.0, shape.signed_distance(grid.point(n))));
    double h2 = 0.0;
    for (std::size_t n : missed) {
        double best = std::numeric_limits<double>::infinity();
        const Vec3 x = grid.point(n);
        for (std::size_t q : in_mask) best = std::min(best, (grid.point(q) - x).norm());
        h2 = std::max(h2, best);
    }
    s.hausdorff = std::max(h1, h2);
    return s;
}

} // namespace enclosure
