#pragma once

#include <memory>
#include <string>
#include <vector>

#include "enclosure/config.hpp"
#include "enclosure/io.hpp"

namespace enclosure {

// Shared immutable inputs for one configuration.
struct Experiment {
    RunConfig config;
    std::shared_ptr<const Grid> grid;
    std::unique_ptr<NavierOperator> background;
    std::unique_ptr<NavierOperator> medium;
    std::vector<ProbeSetup> probes;
    std::vector<double> base_t; // per probe, before offsets

    OutputMeta meta() const { return {config.hash, config.dim}; }
};

// Operators are factorized only when `with_operators` is set.
Experiment build_experiment(const RunConfig& config, bool with_operators = true);

AmplitudeSet probe_amplitudes(const Experiment& ex, std::size_t probe, int K);

struct SweepOptions {
    int jobs = 1;
    bool resume = false;
    long stop_after = -1; // stop once this many samples are done (testing aid)
};

struct SweepResult {
    IndicatorTable table;
    bool complete = false;
    std::size_t lattice_size = 0;
    std::size_t computed = 0; // samples evaluated in this run
};

// Lattice probe × t-offset × h. Writes <out>/indicator.csv when complete and
// keeps <out>/indicator.checkpoint.jsonl up to date.
SweepResult run_sweep(const Experiment& ex, const std::string& out_dir, const SweepOptions& options);

struct ReconstructionResult {
    std::vector<SupportEstimate> estimates;
    EnclosureMask mask;
    bool scored = false;
    ReconstructionScore score;
    bool complete = false;
};
ReconstructionResult run_reconstruct(const Experiment& ex, const std::string& out_dir, const SweepOptions& options);

struct ForwardResult {
    NavierSolution solution;
    DtNTrace dtn;
};
ForwardResult run_forward(const Experiment& ex, const std::string& out_dir);

struct CgoCheckResult {
    std::vector<EikonalReport> eikonal;           // per probe
    std::vector<std::array<double, 3>> orders;    // per probe, K = 0, 1, 2
    std::vector<std::vector<double>> max_exponent; // per probe, per h
    bool flagged = false;
};
CgoCheckResult run_cgo_check(const Experiment& ex, const std::string& out_dir);

AdmissibilityReport run_admissibility(const RunConfig& config, const std::string& out_dir);

} // namespace enclosure
