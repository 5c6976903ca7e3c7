#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "enclosure/sweep.hpp"

namespace enclosure {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json stamp(const RunConfig& c) {
    return {{"config_hash", c.hash}, {"dim_mode", dim_mode(c.dim)}, {"config", json::parse(c.canonical)}};
}

json vec(const Vec3& v, int dim) {
    json a = json::array();
    for (int i = 0; i < dim; ++i) a.push_back(v[i]);
    return a;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << j.dump(2) << "\n";
}

double far_log_distance(const Grid& g, const Vec3& x0) {
    double far = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n)
        if (g.active(n)) {
            Vec3 y = g.point(n) - x0;
            if (g.dim() == 2) y[2] = 0.0;
            far = std::max(far, y.norm());
        }
    return std::log(far);
}

struct Task {
    std::size_t probe, t_index, h_index;
};

// Runs fn(i) for i in [0, n) on `jobs` threads; rethrows the first failure.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            if (failed) return;
            const std::size_t i = next++;
            if (i >= n) return;
            try {
                if (!fn(i)) return;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
                return;
            }
        }
    };
    const int count = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(n, 1))));
    std::vector<std::thread> pool;
    for (int k = 1; k < count; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

Experiment build_experiment(const RunConfig& config, bool with_operators) {
    Experiment ex;
    ex.config = config;
    ex.grid = std::make_shared<const Grid>(build_grid(config.domain, config.resolution));
    if (!config.medium.shape.is_empty()) validate_obstacle(config.medium.shape, *ex.grid);
    if (with_operators) {
        ex.background = std::make_unique<NavierOperator>(ex.grid, MediumSpec::background(config.medium.kappa), config.solver);
        ex.medium = std::make_unique<NavierOperator>(ex.grid, config.medium, config.solver);
    }
    const std::vector<Vec3> points =
        config.probes.points.empty() ? probe_points(config.domain, config.probes.layout) : config.probes.points;
    for (const Vec3& x0 : points) {
        ProbeSetup p;
        p.x0 = x0;
        p.w = config.probes.w ? *config.probes.w : default_direction(x0, config.domain);
        p.K = config.cgo.K;
        ex.probes.push_back(p);
        switch (config.cgo.t_rule) {
        case RunConfig::Cgo::TRule::Far:
            ex.base_t.push_back(far_log_distance(*ex.grid, x0));
            break;
        case RunConfig::Cgo::TRule::Fixed:
            ex.base_t.push_back(config.cgo.t_value);
            break;
        case RunConfig::Cgo::TRule::Truth:
            ex.base_t.push_back(support_log_distance(config.medium.shape, x0, config.domain));
            break;
        }
    }
    return ex;
}

AmplitudeSet probe_amplitudes(const Experiment& ex, std::size_t probe, int K) {
    PhaseSpec spec;
    spec.dim = ex.config.dim;
    spec.x0 = ex.probes.at(probe).x0;
    spec.w = ex.probes.at(probe).w;
    return build_amplitudes(spec, *ex.grid, ex.config.medium.kappa, ex.config.cgo.g0, K, ex.config.cgo.amplitude);
}

SweepResult run_sweep(const Experiment& ex, const std::string& out_dir, const SweepOptions& options) {
    if (!ex.background) throw ValidationError("sweep needs factorized operators");
    const RunConfig& cfg = ex.config;
    fs::create_directories(out_dir);
    std::vector<Task> tasks;
    for (std::size_t p = 0; p < ex.probes.size(); ++p)
        for (std::size_t ti = 0; ti < cfg.cgo.t_offsets.size(); ++ti)
            for (std::size_t hi = 0; hi < cfg.cgo.h.size(); ++hi) tasks.push_back({p, ti, hi});

    auto make_sample = [&](const Task& task) {
        IndicatorSample s;
        s.x0 = ex.probes[task.probe].x0;
        s.w = ex.probes[task.probe].w;
        s.h = cfg.cgo.h[task.h_index];
        s.t = ex.base_t[task.probe] + cfg.cgo.t_offsets[task.t_index];
        return s;
    };

    std::vector<IndicatorSample> samples(tasks.size());
    std::vector<char> done(tasks.size(), 0);
    const std::string ckpt = (fs::path(out_dir) / "indicator.checkpoint.jsonl").string();

    if (options.resume && fs::exists(ckpt)) {
        std::ifstream in(ckpt);
        std::string line;
        bool header = true;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j;
            try {
                j = json::parse(line);
            } catch (const json::exception&) {
                break; // torn final line from an interrupted write
            }
            if (header) {
                if (j.value("config_hash", "") != cfg.hash || j.value("lattice", 0u) != tasks.size())
                    throw ValidationError("checkpoint does not belong to this configuration");
                header = false;
                continue;
            }
            const std::size_t k = j.at("key").get<std::size_t>();
            if (k >= tasks.size()) throw ValidationError("checkpoint key out of range");
            IndicatorSample s = make_sample(tasks[k]);
            s.value = {j.at("re").get<double>(), j.at("im").get<double>()};
            s.value_volume_oracle = {j.at("ore").get<double>(), j.at("oim").get<double>()};
            s.iterations = j.at("iters").get<int>();
            s.residual = j.at("residual").get<double>();
            s.probe_iterations = j.at("probe_iters").get<int>();
            s.probe_residual = j.at("probe_residual").get<double>();
            s.max_exponent = j.at("max_exponent").get<double>();
            samples[k] = s;
            done[k] = 1;
        }
    }

    std::ofstream log;
    {
        const bool append = options.resume && fs::exists(ckpt);
        log.open(ckpt, append ? std::ios::app : std::ios::trunc);
        if (!log) throw ValidationError("cannot write " + ckpt);
        if (!append) log << json{{"config_hash", cfg.hash}, {"lattice", tasks.size()}}.dump() << "\n" << std::flush;
    }

    // amplitudes for probes with pending work
    std::vector<std::size_t> pending_probes;
    for (std::size_t p = 0; p < ex.probes.size(); ++p)
        for (std::size_t k = 0; k < tasks.size(); ++k)
            if (tasks[k].probe == p && !done[k]) {
                pending_probes.push_back(p);
                break;
            }
    std::vector<std::unique_ptr<AmplitudeSet>> amps(ex.probes.size());
    parallel_for(pending_probes.size(), options.jobs, [&](std::size_t i) {
        const std::size_t p = pending_probes[i];
        amps[p] = std::make_unique<AmplitudeSet>(probe_amplitudes(ex, p, cfg.cgo.K));
        return true;
    });

    std::vector<std::size_t> todo;
    for (std::size_t k = 0; k < tasks.size(); ++k)
        if (!done[k]) todo.push_back(k);
    std::mutex log_mutex;
    std::atomic<long> finished{0};
    std::atomic<std::size_t> computed{0};
    parallel_for(todo.size(), options.jobs, [&](std::size_t i) {
        if (options.stop_after >= 0 && finished >= options.stop_after) return false;
        const std::size_t k = todo[i];
        const Task& task = tasks[k];
        const IndicatorSample base = make_sample(task);
        IndicatorSample s = sample_indicator(*ex.background, *ex.medium, *amps[task.probe], ex.probes[task.probe],
                                             base.h, base.t, cfg.cgo.route);
        s.x0 = base.x0;
        s.w = base.w;
        {
            std::lock_guard<std::mutex> lock(log_mutex);
            samples[k] = s;
            done[k] = 1;
            log << json{{"key", k},
                        {"re", s.value.real()},
                        {"im", s.value.imag()},
                        {"ore", s.value_volume_oracle.real()},
                        {"oim", s.value_volume_oracle.imag()},
                        {"iters", s.iterations},
                        {"residual", s.residual},
                        {"probe_iters", s.probe_iterations},
                        {"probe_residual", s.probe_residual},
                        {"max_exponent", s.max_exponent}}
                       .dump()
                << "\n"
                << std::flush;
        }
        ++computed;
        ++finished;
        return true;
    });

    SweepResult r;
    r.lattice_size = tasks.size();
    r.computed = computed;
    r.complete = std::all_of(done.begin(), done.end(), [](char d) { return d != 0; });
    r.table.dim = cfg.dim;
    r.table.K = cfg.cgo.K;
    r.table.resolution = cfg.resolution;
    r.table.medium = cfg.medium.shape.is_empty() ? "background" : "obstacle";
    for (std::size_t k = 0; k < tasks.size(); ++k)
        if (done[k]) r.table.samples.push_back(samples[k]);
    if (r.complete) write_indicator_csv((fs::path(out_dir) / "indicator.csv").string(), r.table, ex.meta());
    return r;
}

ReconstructionResult run_reconstruct(const Experiment& ex, const std::string& out_dir, const SweepOptions& options) {
    const RunConfig& cfg = ex.config;
    ReconstructionResult out;
    const SweepResult sweep = run_sweep(ex, out_dir, options);
    out.complete = sweep.complete;
    if (!sweep.complete) return out;
    const std::size_t nh = cfg.cgo.h.size();
    for (std::size_t g = 0; g * nh < sweep.table.samples.size(); ++g) {
        std::vector<IndicatorSample> group(sweep.table.samples.begin() + g * nh,
                                           sweep.table.samples.begin() + (g + 1) * nh);
        SupportEstimate e = fit_support(group, cfg.fit_model);
        if (!cfg.medium.shape.is_empty()) e.truth = support_log_distance(cfg.medium.shape, e.x0, cfg.domain);
        out.estimates.push_back(e);
    }
    out.mask = build_enclosure(out.estimates, *ex.grid);
    const OutputMeta meta = ex.meta();
    write_support_csv((fs::path(out_dir) / "support.csv").string(), out.estimates, cfg.dim, meta);
    write_mask((fs::path(out_dir) / "mask").string(), *ex.grid, out.mask, meta);
    json summary = stamp(cfg);
    json probes = json::array();
    for (const auto& e : out.estimates)
        probes.push_back({{"x0", vec(e.x0, cfg.dim)},
                          {"w", vec(e.w, cfg.dim)},
                          {"t", e.t},
                          {"h_D_hat", e.usable ? json(e.h_D_hat) : json(nullptr)},
                          {"usable", e.usable},
                          {"monotone", e.monotone},
                          {"h_D_true", std::isnan(e.truth) ? json(nullptr) : json(e.truth)}});
    summary["probes"] = probes;
    if (!cfg.medium.shape.is_empty()) {
        out.scored = true;
        out.score = score_reconstruction(out.mask, *ex.grid, cfg.medium.shape);
        summary["score"] = {{"containment", out.score.containment},
                            {"excess", out.score.excess},
                            {"hausdorff", out.score.hausdorff}};
    }
    write_json((fs::path(out_dir) / "summary.json").string(), summary);
    return out;
}

ForwardResult run_forward(const Experiment& ex, const std::string& out_dir) {
    const RunConfig& cfg = ex.config;
    const Grid& g = *ex.grid;
    fs::create_directories(out_dir);
    NavierData data;
    if (cfg.forward.data == "linear") {
        data.f1.resize(g.boundary_count());
        data.f2 = CVector::Zero(g.boundary_count());
        for (std::size_t b = 0; b < g.boundary_count(); ++b)
            data.f1[b] = cfg.forward.gradient.dot(g.point(g.boundary_nodes()[b]));
    } else {
        const std::size_t p = static_cast<std::size_t>(cfg.forward.probe);
        if (p >= ex.probes.size()) throw ValidationError("forward.probe out of range");
        const AmplitudeSet amps = probe_amplitudes(ex, p, cfg.cgo.K);
        PhaseSpec spec;
        spec.dim = cfg.dim;
        spec.x0 = ex.probes[p].x0;
        spec.w = ex.probes[p].w;
        spec.h = cfg.forward.h;
        spec.t = cfg.forward.t;
        data = build_probe(*ex.background, spec, amps, cfg.cgo.K).data;
    }
    ForwardResult r;
    r.solution = ex.medium->solve(data);
    r.dtn = extract_dtn(g, r.solution);
    const OutputMeta meta = ex.meta();
    write_grid((fs::path(out_dir) / "grid").string(), g, meta);
    write_field((fs::path(out_dir) / "u").string(), g, r.solution.u.values, meta);
    write_field((fs::path(out_dir) / "m").string(), g, r.solution.m.values, meta);
    write_dtn_csv((fs::path(out_dir) / "dtn.csv").string(), g, r.dtn, meta);
    json summary = stamp(cfg);
    summary["solver"] = {{"method", r.solution.stats.method},
                         {"iterations", r.solution.stats.iterations},
                         {"residual", r.solution.stats.residual}};
    summary["boundary_nodes"] = g.boundary_count();
    write_json((fs::path(out_dir) / "forward.json").string(), summary);
    return r;
}

CgoCheckResult run_cgo_check(const Experiment& ex, const std::string& out_dir) {
    const RunConfig& cfg = ex.config;
    fs::create_directories(out_dir);
    CgoCheckResult r;
    json report = stamp(cfg);
    json probes = json::array();
    for (std::size_t p = 0; p < ex.probes.size(); ++p) {
        PhaseSpec spec;
        spec.dim = cfg.dim;
        spec.x0 = ex.probes[p].x0;
        spec.w = ex.probes[p].w;
        const EikonalReport eik = verify_eikonal(spec, *ex.grid);
        r.eikonal.push_back(eik);
        r.flagged = r.flagged || eik.flagged;
        json entry = {{"x0", vec(spec.x0, cfg.dim)},
                      {"w", vec(spec.w, cfg.dim)},
                      {"eikonal", {{"modulus_residual", eik.modulus_residual},
                                   {"orthogonality_residual", eik.orthogonality_residual},
                                   {"flagged", eik.flagged}}}};
        std::array<double, 3> orders{};
        if (!eik.flagged) {
            const AmplitudeSet amps = build_amplitudes(spec, *ex.grid, cfg.medium.kappa, cfg.cgo.g0, 2, cfg.cgo.amplitude);
            json fits = json::array();
            for (int K = 0; K <= 2; ++K) {
                const auto res = wkb_residual(amps, K, cfg.cgo.check_h);
                orders[K] = loglog_slope(cfg.cgo.check_h, res);
                fits.push_back({{"K", K}, {"h", cfg.cgo.check_h}, {"residual", res}, {"order", orders[K]}});
            }
            entry["residual_orders"] = fits;
        }
        r.orders.push_back(orders);
        std::vector<double> exps;
        json overflow = json::array();
        double phi_min = 1e300;
        for (std::size_t n = 0; n < ex.grid->size(); ++n)
            if (ex.grid->active(n)) {
                Vec3 y = ex.grid->point(n) - spec.x0;
                if (cfg.dim == 2) y[2] = 0.0;
                phi_min = std::min(phi_min, 0.5 * std::log(y.squaredNorm()));
            }
        for (double h : cfg.cgo.h) {
            double worst = -1e300;
            for (double off : cfg.cgo.t_offsets) worst = std::max(worst, (ex.base_t[p] + off - phi_min) / h);
            exps.push_back(worst);
            overflow.push_back({{"h", h}, {"max_exponent", worst}, {"margin", 700.0 - worst}});
        }
        r.max_exponent.push_back(exps);
        entry["overflow"] = overflow;
        probes.push_back(entry);
    }
    report["probes"] = probes;
    report["flagged"] = r.flagged;
    write_json((fs::path(out_dir) / "cgo_report.json").string(), report);
    return r;
}

AdmissibilityReport run_admissibility(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::array<double, 3> norms;
    if (cfg.admissibility_norms) {
        norms = *cfg.admissibility_norms;
    } else {
        const Grid g = build_grid(cfg.domain, cfg.resolution);
        const MediumNorms mn = medium_norms(cfg.medium, g);
        norms = {mn.a_inv, mn.b, mn.c};
    }
    const AdmissibilityReport rep =
        check_admissibility(norms[0], norms[1], norms[2], cfg.medium.kappa, cfg.domain.volume(), cfg.dim);
    json j = stamp(cfg);
    j["inputs"] = {{"a_inv", norms[0]}, {"b", norms[1]}, {"c", norms[2]}, {"kappa", cfg.medium.kappa}};
    j["report"] = {{"lhs_small1", rep.lhs_small1}, {"lhs_small2", rep.lhs_small2}, {"omega_n", rep.omega_n},
                   {"domain_volume", rep.domain_volume}, {"pass", rep.pass}, {"C0", rep.C0},
                   {"C0_tilde", rep.C0_tilde}};
    write_json((fs::path(out_dir) / "admissibility.json").string(), j);
    return rep;
}

} // namespace enclosure
