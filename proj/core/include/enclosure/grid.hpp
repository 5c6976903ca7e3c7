#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "enclosure/common.hpp"
#include "enclosure/shape.hpp"

namespace enclosure {

struct DomainSpec {
    enum class Kind { Box, Ball };
    Kind kind = Kind::Box;
    int dim = 3;
    Vec3 lo = Vec3::Zero();   // box
    Vec3 hi = Vec3::Ones();   // box
    Vec3 center = Vec3::Zero(); // ball
    double radius = 1.0;        // ball
    // Optional grid extent for ball domains.
    std::optional<std::pair<Vec3, Vec3>> bounding_box;

    static DomainSpec box(int dim, const Vec3& lo, const Vec3& hi);
    static DomainSpec ball(int dim, const Vec3& center, double radius);

    bool contains(const Vec3& x) const;
    double volume() const;
    double surface_area() const;
    double diameter() const;
    Vec3 centroid() const;
    // Ω is convex, so the hull test is a containment test.
    bool in_hull(const Vec3& x) const { return contains(x); }
    void validate() const;
};

enum class NodeKind : std::uint8_t { Exterior = 0, Interior = 1, Boundary = 2 };

class Grid {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    int dim() const { return dim_; }
    const Vec3& origin() const { return origin_; }
    const Vec3& spacing() const { return spacing_; }
    const std::array<int, 3>& counts() const { return counts_; }
    const DomainSpec& domain() const { return domain_; }
    std::size_t size() const { return kind_.size(); }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * counts_[1] + j) * counts_[0] + i;
    }
    std::array<int, 3> ijk(std::size_t idx) const;
    Vec3 point(std::size_t idx) const;
    NodeKind kind(std::size_t idx) const { return kind_[idx]; }
    bool active(std::size_t idx) const { return kind_[idx] != NodeKind::Exterior; }
    // Neighbor along axis by step (±1, ±2); npos outside the tensor grid.
    std::size_t neighbor(std::size_t idx, int axis, int step) const;

    // Trapezoid weights on box domains, cell volume on ball domains.
    double volume_weight(std::size_t idx) const { return volume_weight_[idx]; }

    // Active-node numbering used by the linear systems.
    std::size_t dof_count() const { return dof_to_node_.size(); }
    std::size_t dof(std::size_t idx) const { return node_to_dof_[idx]; }
    std::size_t dof_node(std::size_t d) const { return dof_to_node_[d]; }

    // Boundary nodes in increasing node order. Arrays below share this order.
    const std::vector<std::size_t>& boundary_nodes() const { return boundary_; }
    std::size_t boundary_count() const { return boundary_.size(); }
    // Boundary ordinal of a node, npos if not a boundary node.
    std::size_t boundary_ordinal(std::size_t idx) const { return boundary_ordinal_[idx]; }
    const Vec3& normal(std::size_t b) const { return normal_[b]; }
    double surface_weight(std::size_t b) const { return surface_weight_[b]; }
    // Weight multiplying ν·flux in the boundary pairing. Equals surface_weight
    // except at box edges and corners, where it keeps the discrete Green
    // identity exact.
    double flux_weight(std::size_t b) const { return flux_weight_[b]; }
    bool box_aligned() const { return domain_.kind == DomainSpec::Kind::Box; }

    double min_spacing() const;

    friend Grid build_grid(const DomainSpec& domain, const std::array<int, 3>& resolution);

private:
    int dim_ = 3;
    Vec3 origin_ = Vec3::Zero();
    Vec3 spacing_ = Vec3::Ones();
    std::array<int, 3> counts_{1, 1, 1};
    DomainSpec domain_;
    std::vector<NodeKind> kind_;
    std::vector<double> volume_weight_;
    std::vector<std::size_t> node_to_dof_;
    std::vector<std::size_t> dof_to_node_;
    std::vector<std::size_t> boundary_;
    std::vector<std::size_t> boundary_ordinal_;
    std::vector<Vec3> normal_;
    std::vector<double> surface_weight_;
    std::vector<double> flux_weight_;
};

Grid build_grid(const DomainSpec& domain, const std::array<int, 3>& resolution);
Grid build_grid(const DomainSpec& domain, int resolution);

// inf over D of log|x - x0|. Rejects x0 inside the hull of Ω.
double support_log_distance(const ObstacleShape& shape, const Vec3& x0, const DomainSpec& domain);

// D ⊂⊂ Ω with positive margin, checked on the grid and analytically where possible.
void validate_obstacle(const ObstacleShape& shape, const Grid& grid);

} // namespace enclosure
