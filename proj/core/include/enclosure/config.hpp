#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "enclosure/cgo.hpp"
#include "enclosure/forward.hpp"
#include "enclosure/indicator.hpp"
#include "enclosure/media.hpp"
#include "enclosure/reconstruct.hpp"

namespace enclosure {

struct RunConfig {
    int dim = 2;
    DomainSpec domain;
    std::array<int, 3> resolution{64, 64, 1};
    MediumSpec medium;

    struct Cgo {
        enum class TRule { Far, Fixed, Truth };
        int K = 0;
        HolomorphicSeed g0 = HolomorphicSeed::One;
        AmplitudeOptions amplitude;
        std::vector<double> h{0.2, 0.15, 0.1, 0.075, 0.05};
        TRule t_rule = TRule::Far;
        double t_value = 0.0;
        std::vector<double> t_offsets{0.0};
        std::vector<double> check_h{0.02, 0.01, 0.005, 0.0025};
        IndicatorRoute route = IndicatorRoute::Reflected;
    } cgo;

    struct Probes {
        ProbeLayout layout;
        std::vector<Vec3> points; // explicit list overrides the layout
        std::optional<Vec3> w;    // explicit w for every probe
    } probes;

    SolverOptions solver;
    FitModel fit_model = FitModel::Affine;

    struct Forward {
        std::string data = "linear"; // linear | cgo
        Vec3 gradient = Vec3::UnitX();
        double h = 0.1;
        double t = 0.0;
        int probe = 0;
    } forward;

    // a_inv, b, c; replaces the grid-sampled norms in the admissibility report
    std::optional<std::array<double, 3>> admissibility_norms;

    std::string output_dir = "out";
    std::uint64_t seed = 0;

    std::string canonical; // canonical JSON of the parsed input
    std::string hash;      // FNV-1a of `canonical`, 16 hex digits
};

// YAML or JSON text. Throws ValidationError on schema violations.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::string fnv1a_hex(const std::string& bytes);

// "paper" for dim 3, "extension-2d" for dim 2.
std::string dim_mode(int dim);

} // namespace enclosure
