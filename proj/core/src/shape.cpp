#include "enclosure/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace enclosure {

namespace {
constexpr double kTie = 1e-12;
}

double SampledDistance::at(const Vec3& x) const {
    double idx[3];
    int base[3];
    double frac[3];
    for (int a = 0; a < 3; ++a) {
        if (a >= dim || counts[a] == 1) {
            base[a] = 0;
            frac[a] = 0.0;
            continue;
        }
        idx[a] = (x[a] - origin[a]) / spacing[a];
        if (idx[a] < 0.0 || idx[a] > counts[a] - 1) return std::numeric_limits<double>::infinity();
        base[a] = std::min(static_cast<int>(idx[a]), counts[a] - 2);
        frac[a] = idx[a] - base[a];
    }
    double acc = 0.0;
    for (int c = 0; c < 8; ++c) {
        int off[3] = {c & 1, (c >> 1) & 1, (c >> 2) & 1};
        double wgt = 1.0;
        bool skip = false;
        for (int a = 0; a < 3; ++a) {
            if ((a >= dim || counts[a] == 1) && off[a]) {
                skip = true;
                break;
            }
            wgt *= off[a] ? frac[a] : 1.0 - frac[a];
        }
        if (skip || wgt == 0.0) continue;
        const std::size_t i = base[0] + off[0];
        const std::size_t j = base[1] + off[1];
        const std::size_t k = base[2] + off[2];
        acc += wgt * values[(k * counts[1] + j) * counts[0] + i];
    }
    return acc;
}

ObstacleShape ObstacleShape::empty() { return ObstacleShape{}; }

ObstacleShape ObstacleShape::ball(const Vec3& center, double radius) {
    if (!(radius > 0.0)) throw ValidationError("ball radius must be positive");
    ObstacleShape s;
    s.kind_ = Kind::Ball;
    s.balls_.push_back({center, radius});
    return s;
}

ObstacleShape ObstacleShape::ellipsoid(const Vec3& center, const Vec3& semi_axes) {
    if ((semi_axes.array() <= 0.0).any()) throw ValidationError("ellipsoid semi-axes must be positive");
    ObstacleShape s;
    s.kind_ = Kind::Ellipsoid;
    s.ellipsoid_ = {center, semi_axes};
    return s;
}

ObstacleShape ObstacleShape::union_of_balls(std::vector<Ball> balls) {
    if (balls.empty()) throw ValidationError("union of balls needs at least one ball");
    for (const auto& b : balls)
        if (!(b.radius > 0.0)) throw ValidationError("ball radius must be positive");
    ObstacleShape s;
    s.kind_ = Kind::UnionOfBalls;
    s.balls_ = std::move(balls);
    return s;
}

ObstacleShape ObstacleShape::sampled(SampledDistance field) {
    const std::size_t n = static_cast<std::size_t>(field.counts[0]) * field.counts[1] * field.counts[2];
    if (field.values.size() != n) throw ValidationError("sampled distance field has wrong size");
    ObstacleShape s;
    s.kind_ = Kind::Sampled;
    s.sampled_ = std::move(field);
    return s;
}

bool ObstacleShape::contains(const Vec3& x) const {
    switch (kind_) {
    case Kind::Empty:
        return false;
    case Kind::Ball:
    case Kind::UnionOfBalls:
        for (const auto& b : balls_)
            if ((x - b.center).norm() <= b.radius * (1.0 + kTie)) return true;
        return false;
    case Kind::Ellipsoid: {
        const Vec3 y = (x - ellipsoid_.center).cwiseQuotient(ellipsoid_.semi_axes);
        return y.squaredNorm() <= 1.0 + kTie;
    }
    case Kind::Sampled:
        return sampled_.at(x) <= 0.0;
    }
    return false;
}

double ObstacleShape::signed_distance(const Vec3& x) const {
    switch (kind_) {
    case Kind::Empty:
        return std::numeric_limits<double>::infinity();
    case Kind::Ball:
    case Kind::UnionOfBalls: {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& b : balls_) d = std::min(d, (x - b.center).norm() - b.radius);
        return d;
    }
    case Kind::Ellipsoid: {
        const Vec3 y = (x - ellipsoid_.center).cwiseQuotient(ellipsoid_.semi_axes);
        const double level = y.norm();
        if (level > 1.0) return ellipsoid_distance(ellipsoid_, x, 3);
        return (level - 1.0) * ellipsoid_.semi_axes.minCoeff();
    }
    case Kind::Sampled:
        return sampled_.at(x);
    }
    return 0.0;
}

void ObstacleShape::bounds(Vec3& lo, Vec3& hi) const {
    lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    hi = -lo;
    switch (kind_) {
    case Kind::Empty:
        return;
    case Kind::Ball:
    case Kind::UnionOfBalls:
        for (const auto& b : balls_) {
            lo = lo.cwiseMin((b.center.array() - b.radius).matrix());
            hi = hi.cwiseMax((b.center.array() + b.radius).matrix());
        }
        return;
    case Kind::Ellipsoid:
        lo = ellipsoid_.center - ellipsoid_.semi_axes;
        hi = ellipsoid_.center + ellipsoid_.semi_axes;
        return;
    case Kind::Sampled: {
        const auto& f = sampled_;
        for (int k = 0; k < f.counts[2]; ++k)
            for (int j = 0; j < f.counts[1]; ++j)
                for (int i = 0; i < f.counts[0]; ++i) {
                    const std::size_t n = (static_cast<std::size_t>(k) * f.counts[1] + j) * f.counts[0] + i;
                    if (f.values[n] > 0.0) continue;
                    const Vec3 p = f.origin + Vec3(i * f.spacing[0], j * f.spacing[1], k * f.spacing[2]);
                    lo = lo.cwiseMin(p);
                    hi = hi.cwiseMax(p);
                }
        return;
    }
    }
}

double ObstacleShape::measure(int dim) const {
    switch (kind_) {
    case Kind::Empty:
        return 0.0;
    case Kind::Ball:
    case Kind::UnionOfBalls: {
        for (std::size_t a = 0; a < balls_.size(); ++a)
            for (std::size_t b = a + 1; b < balls_.size(); ++b)
                if ((balls_[a].center - balls_[b].center).norm() < balls_[a].radius + balls_[b].radius) return -1.0;
        double v = 0.0;
        for (const auto& b : balls_)
            v += dim == 2 ? kPi * b.radius * b.radius : 4.0 / 3.0 * kPi * std::pow(b.radius, 3);
        return v;
    }
    case Kind::Ellipsoid: {
        const Vec3& a = ellipsoid_.semi_axes;
        return dim == 2 ? kPi * a[0] * a[1] : 4.0 / 3.0 * kPi * a[0] * a[1] * a[2];
    }
    case Kind::Sampled:
        return -1.0;
    }
    return -1.0;
}

int chi_D(const Vec3& x, const ObstacleShape& shape) { return shape.contains(x) ? 1 : 0; }

double ellipsoid_distance(const Ellipsoid& e, const Vec3& x, int dim) {
    // Closest point satisfies p_i = a_i^2 y_i / (s + a_i^2) with s the root of
    // sum (a_i y_i / (s + a_i^2))^2 = 1; for exterior points s > 0.
    Vec3 y = (x - e.center).cwiseAbs();
    const Vec3& a = e.semi_axes;
    auto level = [&](double s) {
        double acc = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double q = a[i] * y[i] / (s + a[i] * a[i]);
            acc += q * q;
        }
        return acc - 1.0;
    };
    if (level(0.0) <= 0.0) return 0.0;
    double hi = 0.0;
    for (int i = 0; i < dim; ++i) hi += a[i] * a[i] * y[i] * y[i];
    hi = std::sqrt(hi);
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (level(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double s = 0.5 * (lo + hi);
    double d2 = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double p = a[i] * a[i] * y[i] / (s + a[i] * a[i]);
        d2 += (y[i] - p) * (y[i] - p);
    }
    return std::sqrt(d2);
}

} // namespace enclosure
