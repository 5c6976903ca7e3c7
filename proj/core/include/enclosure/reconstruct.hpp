#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "enclosure/indicator.hpp"

namespace enclosure {

// Probe points on a circle (dim 2) or sphere (dim 3) about the domain
// centroid. In 2D the ring is rotated by `offset` radians; a half step keeps
// probes off the diagonals of a square domain. Jitter (radians, uniform) is
// seeded.
struct ProbeLayout {
    int count = 8;
    double radius = 2.0;
    double offset = std::numeric_limits<double>::quiet_NaN(); // NaN: π / count
    double jitter = 0.0;
    std::uint64_t seed = 0;
};
std::vector<Vec3> probe_points(const DomainSpec& domain, const ProbeLayout& layout);

enum class FitModel {
    Affine,      // g(h) = c + βh
    AffineHLogH, // g(h) = c + βh + γ h log h
};

inline constexpr double kLogFloor = 1e-300;

struct SupportEstimate {
    Vec3 x0 = Vec3::Zero();
    Vec3 w = Vec3::UnitX();
    double t = 0.0;
    double h_D_hat = 0.0;
    double slope = 0.0; // β
    double residual = 0.0; // rms of the fit
    int used = 0;
    bool usable = false;
    bool monotone = true;
    double truth = std::numeric_limits<double>::quiet_NaN();
};

// Extrapolates g(h) = ½ h log|I(h,t)| to h → 0; h_D_hat = t − g(0).
// Samples must share (x0, w, t).
SupportEstimate fit_support(const std::vector<IndicatorSample>& samples, FitModel model = FitModel::Affine);

struct EnclosureMask {
    struct Constraint {
        Vec3 x0;
        double h_D_hat;
    };
    std::vector<std::uint8_t> inside; // per grid node
    std::vector<Constraint> provenance;
};

// mask(x) = x ∈ Ω and log|x − x0| ≥ h_D_hat for every usable estimate.
EnclosureMask build_enclosure(const std::vector<SupportEstimate>& estimates, const Grid& grid);

struct ReconstructionScore {
    bool containment = false;
    double excess = 0.0;
    double hausdorff = 0.0;
};
ReconstructionScore score_reconstruction(const EnclosureMask& mask, const Grid& grid, const ObstacleShape& shape);

} // namespace enclosure
