#include "enclosure/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace enclosure {

DomainSpec DomainSpec::box(int dim, const Vec3& lo, const Vec3& hi) {
    DomainSpec d;
    d.kind = Kind::Box;
    d.dim = dim;
    d.lo = lo;
    d.hi = hi;
    if (dim == 2) d.lo[2] = d.hi[2] = 0.0;
    return d;
}

DomainSpec DomainSpec::ball(int dim, const Vec3& center, double radius) {
    DomainSpec d;
    d.kind = Kind::Ball;
    d.dim = dim;
    d.center = center;
    if (dim == 2) d.center[2] = 0.0;
    d.radius = radius;
    return d;
}

bool DomainSpec::contains(const Vec3& x) const {
    if (kind == Kind::Ball) return (x - center).head(dim).norm() <= radius;
    for (int a = 0; a < dim; ++a)
        if (x[a] < lo[a] || x[a] > hi[a]) return false;
    return true;
}

double DomainSpec::volume() const {
    if (kind == Kind::Ball) return dim == 2 ? kPi * radius * radius : 4.0 / 3.0 * kPi * std::pow(radius, 3);
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= hi[a] - lo[a];
    return v;
}

double DomainSpec::surface_area() const {
    if (kind == Kind::Ball) return dim == 2 ? 2.0 * kPi * radius : 4.0 * kPi * radius * radius;
    const Vec3 e = hi - lo;
    if (dim == 2) return 2.0 * (e[0] + e[1]);
    return 2.0 * (e[0] * e[1] + e[1] * e[2] + e[0] * e[2]);
}

double DomainSpec::diameter() const {
    if (kind == Kind::Ball) return 2.0 * radius;
    return (hi - lo).head(dim).norm();
}

Vec3 DomainSpec::centroid() const { return kind == Kind::Ball ? center : Vec3(0.5 * (lo + hi)); }

void DomainSpec::validate() const {
    if (dim != 2 && dim != 3) throw ValidationError("dim must be 2 or 3");
    if (kind == Kind::Box) {
        for (int a = 0; a < dim; ++a)
            if (!(hi[a] > lo[a])) throw ValidationError("box domain needs lo < hi on every axis");
        if (bounding_box) {
            for (int a = 0; a < dim; ++a)
                if (lo[a] < bounding_box->first[a] || hi[a] > bounding_box->second[a])
                    throw ValidationError("box domain is not inside the bounding box");
        }
        return;
    }
    if (!(radius > 0.0)) throw ValidationError("ball domain radius must be positive");
    if (bounding_box) {
        for (int a = 0; a < dim; ++a)
            if (!(center[a] - radius > bounding_box->first[a] && center[a] + radius < bounding_box->second[a]))
                throw ValidationError("ball domain is not strictly inside the bounding box");
    }
}

std::array<int, 3> Grid::ijk(std::size_t idx) const {
    std::array<int, 3> r{};
    r[0] = static_cast<int>(idx % counts_[0]);
    idx /= counts_[0];
    r[1] = static_cast<int>(idx % counts_[1]);
    r[2] = static_cast<int>(idx / counts_[1]);
    return r;
}

Vec3 Grid::point(std::size_t idx) const {
    const auto c = ijk(idx);
    Vec3 p = origin_;
    for (int a = 0; a < dim_; ++a) p[a] += c[a] * spacing_[a];
    return p;
}

std::size_t Grid::neighbor(std::size_t idx, int axis, int step) const {
    auto c = ijk(idx);
    const int n = c[axis] + step;
    if (n < 0 || n >= counts_[axis]) return npos;
    c[axis] = n;
    return index(c[0], c[1], c[2]);
}

double Grid::min_spacing() const {
    double s = spacing_[0];
    for (int a = 1; a < dim_; ++a) s = std::min(s, spacing_[a]);
    return s;
}

namespace {

void finish_numbering(std::vector<NodeKind>& kind, std::vector<std::size_t>& node_to_dof,
                      std::vector<std::size_t>& dof_to_node, std::vector<std::size_t>& boundary,
                      std::vector<std::size_t>& ordinal) {
    node_to_dof.assign(kind.size(), Grid::npos);
    ordinal.assign(kind.size(), Grid::npos);
    dof_to_node.clear();
    boundary.clear();
    for (std::size_t n = 0; n < kind.size(); ++n) {
        if (kind[n] == NodeKind::Exterior) continue;
        node_to_dof[n] = dof_to_node.size();
        dof_to_node.push_back(n);
        if (kind[n] == NodeKind::Boundary) {
            ordinal[n] = boundary.size();
            boundary.push_back(n);
        }
    }
}

} // namespace

Grid build_grid(const DomainSpec& domain, int resolution) {
    return build_grid(domain, {resolution, resolution, resolution});
}

Grid build_grid(const DomainSpec& domain, const std::array<int, 3>& resolution) {
    domain.validate();
    const int dim = domain.dim;
    for (int a = 0; a < dim; ++a)
        if (resolution[a] < 8) throw ValidationError("resolution must be at least 8 nodes per axis");

    Grid g;
    g.dim_ = dim;
    g.domain_ = domain;
    Vec3 lo, hi;
    if (domain.kind == DomainSpec::Kind::Box) {
        lo = domain.lo;
        hi = domain.hi;
    } else if (domain.bounding_box) {
        lo = domain.bounding_box->first;
        hi = domain.bounding_box->second;
    } else {
        const int n = *std::min_element(resolution.begin(), resolution.begin() + dim);
        const double pad = domain.radius * (1.0 + 4.0 / (n - 5));
        lo = (domain.center.array() - pad).matrix();
        hi = (domain.center.array() + pad).matrix();
    }
    g.origin_ = lo;
    for (int a = 0; a < 3; ++a) {
        if (a < dim) {
            g.counts_[a] = resolution[a];
            g.spacing_[a] = (hi[a] - lo[a]) / (resolution[a] - 1);
        } else {
            g.counts_[a] = 1;
            g.spacing_[a] = 1.0;
            g.origin_[a] = 0.0;
        }
    }
    const std::size_t total = static_cast<std::size_t>(g.counts_[0]) * g.counts_[1] * g.counts_[2];
    g.kind_.assign(total, NodeKind::Exterior);
    g.volume_weight_.assign(total, 0.0);

    if (domain.kind == DomainSpec::Kind::Box) {
        for (std::size_t n = 0; n < total; ++n) {
            const auto c = g.ijk(n);
            bool edge = false;
            double vw = 1.0;
            for (int a = 0; a < dim; ++a) {
                const bool end = c[a] == 0 || c[a] == g.counts_[a] - 1;
                edge = edge || end;
                vw *= (end ? 0.5 : 1.0) * g.spacing_[a];
            }
            g.kind_[n] = edge ? NodeKind::Boundary : NodeKind::Interior;
            g.volume_weight_[n] = vw;
        }
        finish_numbering(g.kind_, g.node_to_dof_, g.dof_to_node_, g.boundary_, g.boundary_ordinal_);
        const std::size_t nb = g.boundary_.size();
        g.normal_.assign(nb, Vec3::Zero());
        g.surface_weight_.assign(nb, 0.0);
        g.flux_weight_.assign(nb, 0.0);
        for (std::size_t b = 0; b < nb; ++b) {
            const auto c = g.ijk(g.boundary_[b]);
            // Per-axis face weights sigma_k: trapezoid product over the other axes.
            Vec3 oriented = Vec3::Zero();
            double total_weight = 0.0;
            for (int k = 0; k < dim; ++k) {
                const bool lo_end = c[k] == 0;
                const bool hi_end = c[k] == g.counts_[k] - 1;
                if (!lo_end && !hi_end) continue;
                double sigma = 1.0;
                for (int l = 0; l < dim; ++l) {
                    if (l == k) continue;
                    const bool end = c[l] == 0 || c[l] == g.counts_[l] - 1;
                    sigma *= (end ? 0.5 : 1.0) * g.spacing_[l];
                }
                oriented[k] = (hi_end ? 1.0 : -1.0) * sigma;
                total_weight += sigma;
            }
            g.flux_weight_[b] = oriented.norm();
            g.normal_[b] = oriented / g.flux_weight_[b];
            g.surface_weight_[b] = total_weight;
        }
        return g;
    }

    // Ball domain: staircase classification, analytic normals.
    double cell = 1.0;
    for (int a = 0; a < dim; ++a) cell *= g.spacing_[a];
    for (std::size_t n = 0; n < total; ++n) {
        if (domain.contains(g.point(n))) {
            g.kind_[n] = NodeKind::Interior;
            g.volume_weight_[n] = cell;
        }
    }
    for (std::size_t n = 0; n < total; ++n) {
        if (g.kind_[n] == NodeKind::Exterior) continue;
        for (int a = 0; a < dim && g.kind_[n] == NodeKind::Interior; ++a)
            for (int s : {-1, 1}) {
                const std::size_t m = g.neighbor(n, a, s);
                if (m == Grid::npos || g.kind_[m] == NodeKind::Exterior) {
                    g.kind_[n] = NodeKind::Boundary;
                    break;
                }
            }
    }
    finish_numbering(g.kind_, g.node_to_dof_, g.dof_to_node_, g.boundary_, g.boundary_ordinal_);
    const std::size_t nb = g.boundary_.size();
    g.normal_.assign(nb, Vec3::Zero());
    g.surface_weight_.assign(nb, 0.0);
    g.flux_weight_.assign(nb, 0.0);
    const double R = domain.radius;
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t n = g.boundary_[b];
        const Vec3 x = g.point(n);
        Vec3 y = x - domain.center;
        g.normal_[b] = y / y.norm();
        // Area = sum_k ∫ |ν_k| |ν_k| dS; each grid line crossing the sphere
        // samples ∫ |ν_k| dS with the cross-sectional cell area.
        double wsum = 0.0;
        for (int k = 0; k < dim; ++k) {
            double cross = 1.0;
            for (int l = 0; l < dim; ++l)
                if (l != k) cross *= g.spacing_[l];
            for (int s : {-1, 1}) {
                const std::size_t m = g.neighbor(n, k, s);
                if (m != Grid::npos && g.kind_[m] != NodeKind::Exterior) continue;
                const double rest = y.head(dim).squaredNorm() - y[k] * y[k];
                const double tau = std::sqrt(std::max(R * R - rest, 0.0)) - s * y[k];
                Vec3 p = y;
                p[k] += s * tau;
                wsum += cross * std::abs(p[k]) / R;
            }
        }
        g.surface_weight_[b] = wsum;
        g.flux_weight_[b] = wsum;
    }
    return g;
}

double support_log_distance(const ObstacleShape& shape, const Vec3& x0, const DomainSpec& domain) {
    if (domain.in_hull(x0)) throw ValidationError("probe point lies inside the hull of the domain");
    switch (shape.kind()) {
    case ObstacleShape::Kind::Empty:
        return std::numeric_limits<double>::infinity();
    case ObstacleShape::Kind::Ball:
    case ObstacleShape::Kind::UnionOfBalls: {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : shape.balls()) {
            const double d = (b.center - x0).head(domain.dim).norm() - b.radius;
            best = std::min(best, std::log(d));
        }
        return best;
    }
    case ObstacleShape::Kind::Ellipsoid:
        return std::log(ellipsoid_distance(shape.ellipsoid_data(), x0, domain.dim));
    case ObstacleShape::Kind::Sampled: {
        const auto& f = shape.sampled_data();
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < f.counts[2]; ++k)
            for (int j = 0; j < f.counts[1]; ++j)
                for (int i = 0; i < f.counts[0]; ++i) {
                    const double v = f.values[(static_cast<std::size_t>(k) * f.counts[1] + j) * f.counts[0] + i];
                    if (v > 0.0) continue;
                    const Vec3 p = f.origin + Vec3(i * f.spacing[0], j * f.spacing[1], k * f.spacing[2]);
                    best = std::min(best, (p - x0).head(domain.dim).norm() + v);
                }
        return std::log(best);
    }
    }
    return std::numeric_limits<double>::infinity();
}

void validate_obstacle(const ObstacleShape& shape, const Grid& grid) {
    if (shape.is_empty()) return;
    const DomainSpec& dom = grid.domain();
    const int dim = grid.dim();
    Vec3 lo, hi;
    shape.bounds(lo, hi);
    if (dom.kind == DomainSpec::Kind::Box) {
        for (int a = 0; a < dim; ++a)
            if (!(lo[a] > dom.lo[a] && hi[a] < dom.hi[a]))
                throw ValidationError("obstacle is not strictly inside the domain");
    } else {
        for (int c = 0; c < (1 << dim); ++c) {
            Vec3 corner = lo;
            for (int a = 0; a < dim; ++a)
                if (c & (1 << a)) corner[a] = hi[a];
            if (!((corner - dom.center).head(dim).norm() < dom.radius))
                throw ValidationError("obstacle is not strictly inside the domain");
        }
    }
    std::vector<char> in_d(grid.size(), 0);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        if (!grid.active(n)) continue;
        if (shape.contains(grid.point(n))) {
            if (grid.kind(n) == NodeKind::Boundary) throw ValidationError("obstacle touches the domain boundary");
            in_d[n] = 1;
        }
    }
    if (shape.kind() != ObstacleShape::Kind::UnionOfBalls) return;
    // Ω \ D must be connected: flood fill from the boundary.
    std::vector<char> seen(grid.size(), 0);
    std::deque<std::size_t> queue;
    for (std::size_t n : grid.boundary_nodes()) {
        seen[n] = 1;
        queue.push_back(n);
    }
    while (!queue.empty()) {
        const std::size_t n = queue.front();
        queue.pop_front();
        for (int a = 0; a < dim; ++a)
            for (int s : {-1, 1}) {
                const std::size_t m = grid.neighbor(n, a, s);
                if (m == Grid::npos || seen[m] || in_d[m] || !grid.active(m)) continue;
                seen[m] = 1;
                queue.push_back(m);
            }
    }
    for (std::size_t n = 0; n < grid.size(); ++n)
        if (grid.active(n) && !in_d[n] && !seen[n])
            throw ValidationError("complement of the obstacle is not connected");
}

} // namespace enclosure
