#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "enclosure/sweep.hpp"

using namespace enclosure;

namespace {

struct Args {
    std::string config;
    std::string out;
    int jobs = 1;
    bool resume = false;
    long stop_after = -1;
};

std::string out_dir(const Args& a, const RunConfig& c) { return a.out.empty() ? c.output_dir : a.out; }

int forward(const Args& a) {
    const RunConfig cfg = load_config(a.config);
    const Experiment ex = build_experiment(cfg);
    const ForwardResult r = run_forward(ex, out_dir(a, cfg));
    std::printf("forward: %s, %d iterations, residual %.3e\n", r.solution.stats.method.c_str(),
                r.solution.stats.iterations, r.solution.stats.residual);
    return 0;
}

int cgo_check(const Args& a) {
    const RunConfig cfg = load_config(a.config);
    const Experiment ex = build_experiment(cfg, false);
    const CgoCheckResult r = run_cgo_check(ex, out_dir(a, cfg));
    for (std::size_t p = 0; p < r.eikonal.size(); ++p) {
        std::printf("probe %zu: eikonal %.2e / %.2e%s", p, r.eikonal[p].modulus_residual,
                    r.eikonal[p].orthogonality_residual, r.eikonal[p].flagged ? " FLAGGED" : "");
        if (!r.eikonal[p].flagged)
            std::printf(", orders %.2f %.2f %.2f", r.orders[p][0], r.orders[p][1], r.orders[p][2]);
        std::printf("\n");
    }
    return 0;
}

int sweep(const Args& a) {
    const RunConfig cfg = load_config(a.config);
    const Experiment ex = build_experiment(cfg);
    const SweepResult r = run_sweep(ex, out_dir(a, cfg), {a.jobs, a.resume, a.stop_after});
    std::printf("sweep: %zu of %zu samples (%zu computed now)%s\n", r.table.samples.size(), r.lattice_size,
                r.computed, r.complete ? "" : ", incomplete");
    return 0;
}

int reconstruct(const Args& a) {
    const RunConfig cfg = load_config(a.config);
    const Experiment ex = build_experiment(cfg);
    const ReconstructionResult r = run_reconstruct(ex, out_dir(a, cfg), {a.jobs, a.resume, a.stop_after});
    if (!r.complete) {
        std::printf("reconstruct: sweep incomplete\n");
        return 0;
    }
    for (const auto& e : r.estimates)
        std::printf("x0 (%.3f, %.3f, %.3f) t %.4f h_D_hat %.4f%s\n", e.x0[0], e.x0[1], e.x0[2], e.t, e.h_D_hat,
                    e.usable ? "" : " unusable");
    if (r.scored)
        std::printf("containment %s, excess %.3f, hausdorff %.3f\n", r.score.containment ? "yes" : "no",
                    r.score.excess, r.score.hausdorff);
    return 0;
}

int admissibility(const Args& a) {
    const RunConfig cfg = load_config(a.config);
    const AdmissibilityReport r = run_admissibility(cfg, out_dir(a, cfg));
    std::printf("small1 %.6g small2 %.6g pass %s\n", r.lhs_small1, r.lhs_small2, r.pass ? "yes" : "no");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Enclosure-method toolkit for the perturbed biharmonic obstacle problem"};
    app.require_subcommand(1);
    Args args;
    auto common = [&](CLI::App* sub, bool parallel) {
        sub->add_option("--config", args.config, "configuration file (YAML or JSON)")->required();
        sub->add_option("--out", args.out, "output directory");
        if (parallel) {
            sub->add_option("--jobs", args.jobs, "worker threads")->check(CLI::PositiveNumber);
            sub->add_flag("--resume", args.resume, "continue from the checkpoint in the output directory");
            sub->add_option("--stop-after", args.stop_after)->group("");
        } else {
            sub->add_option("--jobs", args.jobs, "ignored")->check(CLI::PositiveNumber);
        }
    };
    auto* f = app.add_subcommand("forward", "one forward solve and DtN trace dump");
    auto* c = app.add_subcommand("cgo-check", "eikonal and WKB residual diagnostics");
    auto* s = app.add_subcommand("sweep", "indicator over the probe, t and h lattice");
    auto* r = app.add_subcommand("reconstruct", "support estimates and enclosure mask");
    auto* a = app.add_subcommand("admissibility", "smallness conditions for the medium");
    common(f, false);
    common(c, false);
    common(s, true);
    common(r, true);
    common(a, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        if (f->parsed()) return forward(args);
        if (c->parsed()) return cgo_check(args);
        if (s->parsed()) return sweep(args);
        if (r->parsed()) return reconstruct(args);
        if (a->parsed()) return admissibility(args);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << " (" << e.residual_history().size() << " residuals logged)\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
