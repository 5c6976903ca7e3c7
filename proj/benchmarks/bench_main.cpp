#include <memory>

#include <benchmark/benchmark.h>

#include "enclosure/indicator.hpp"

using namespace enclosure;

namespace {

std::shared_ptr<const Grid> box(int dim, int n) {
    const Vec3 lo(-1, -1, dim == 3 ? -1 : 0), hi(1, 1, dim == 3 ? 1 : 0);
    return std::make_shared<const Grid>(build_grid(DomainSpec::box(dim, lo, hi), n));
}

MediumSpec ball_medium() {
    MediumSpec m = MediumSpec::background(2.0);
    m.gamma_D = 0.5;
    m.q_D = 1.0;
    m.shape = ObstacleShape::ball(Vec3::Zero(), 0.5);
    return m;
}

NavierData linear_data(const Grid& g) {
    NavierData d{CVector(g.boundary_count()), CVector::Zero(g.boundary_count())};
    for (std::size_t b = 0; b < g.boundary_count(); ++b) d.f1[b] = g.point(g.boundary_nodes()[b])[0];
    return d;
}

void BM_CauchyTransform(benchmark::State& state) {
    ZGrid g;
    g.ns = g.nr = static_cast<int>(state.range(0));
    g.ds = g.dr = 2.0 / g.ns;
    g.s0 = g.r0 = -1.0;
    const CauchyTransform t(g);
    const CVector f = CVector::Random(g.size());
    for (auto _ : state) benchmark::DoNotOptimize(t.apply(f));
}
BENCHMARK(BM_CauchyTransform)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
    const auto g = box(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const MediumSpec m = ball_medium();
    for (auto _ : state) benchmark::DoNotOptimize(assemble_split_system(*g, m, nullptr, nullptr));
}
BENCHMARK(BM_Assemble)->Args({2, 96})->Args({3, 24})->Args({3, 40})->Unit(benchmark::kMillisecond);

void BM_Factorize(benchmark::State& state) {
    const auto g = box(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const MediumSpec m = ball_medium();
    for (auto _ : state) NavierOperator op(g, m);
}
BENCHMARK(BM_Factorize)->Args({2, 96})->Args({3, 24})->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
    const auto g = box(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const NavierOperator op(g, ball_medium());
    const NavierData d = linear_data(*g);
    for (auto _ : state) benchmark::DoNotOptimize(op.solve(d));
}
BENCHMARK(BM_Solve)->Args({2, 96})->Args({3, 24})->Unit(benchmark::kMillisecond);

void BM_IndicatorSample(benchmark::State& state) {
    const auto g = box(2, static_cast<int>(state.range(0)));
    const NavierOperator bg(g, MediumSpec::background(2.0)), med(g, ball_medium());
    const Vec3 x0(2.5, 0, 0);
    const ProbeSetup p{x0, default_direction(x0, g->domain()), 0};
    PhaseSpec spec;
    spec.dim = 2;
    spec.x0 = x0;
    spec.w = p.w;
    const AmplitudeSet a = build_amplitudes(spec, *g, 2.0, HolomorphicSeed::One, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample_indicator(bg, med, a, p, 0.1, 0.7));
}
BENCHMARK(BM_IndicatorSample)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
