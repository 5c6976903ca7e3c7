#pragma once

#include <array>
#include <vector>

#include "enclosure/common.hpp"

namespace enclosure {

struct Ball {
    Vec3 center = Vec3::Zero();
    double radius = 0.0;
};

struct Ellipsoid {
    Vec3 center = Vec3::Zero();
    Vec3 semi_axes = Vec3::Ones();
};

// Signed distance sampled on a tensor grid; negative inside.
struct SampledDistance {
    int dim = 3;
    Vec3 origin = Vec3::Zero();
    Vec3 spacing = Vec3::Ones();
    std::array<int, 3> counts{1, 1, 1};
    std::vector<double> values;

    double at(const Vec3& x) const;
};

// Obstacle D. Closed set: points on the boundary belong to D.
class ObstacleShape {
public:
    enum class Kind { Empty, Ball, Ellipsoid, UnionOfBalls, Sampled };

    static ObstacleShape empty();
    static ObstacleShape ball(const Vec3& center, double radius);
    static ObstacleShape ellipsoid(const Vec3& center, const Vec3& semi_axes);
    static ObstacleShape union_of_balls(std::vector<Ball> balls);
    static ObstacleShape sampled(SampledDistance field);

    Kind kind() const { return kind_; }
    bool is_empty() const { return kind_ == Kind::Empty; }
    const std::vector<Ball>& balls() const { return balls_; }
    const Ellipsoid& ellipsoid_data() const { return ellipsoid_; }
    const SampledDistance& sampled_data() const { return sampled_; }

    bool contains(const Vec3& x) const;
    // Negative inside. Exact for balls and unions, approximate otherwise.
    double signed_distance(const Vec3& x) const;
    // Axis-aligned box enclosing D.
    void bounds(Vec3& lo, Vec3& hi) const;
    // Closed-form volume where available (dim 2 gives area); negative if unknown.
    double measure(int dim) const;

private:
    Kind kind_ = Kind::Empty;
    std::vector<Ball> balls_;
    Ellipsoid ellipsoid_;
    SampledDistance sampled_;
};

int chi_D(const Vec3& x, const ObstacleShape& shape);

// Closest-point distance from an exterior point to an ellipsoid.
double ellipsoid_distance(const Ellipsoid& e, const Vec3& x, int dim);

} // namespace enclosure
