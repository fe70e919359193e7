#include <benchmark/benchmark.h>

#include "isowalk/cayley.hpp"
#include "isowalk/ecgraph.hpp"
#include "isowalk/pathfind.hpp"
#include "isowalk/quadform.hpp"
#include "isowalk/walks.hpp"

using namespace isowalk;

namespace {

CayleyGraph class_graph(std::int64_t d, std::int64_t bound) {
    const ClassGroup cl = class_group(Discriminant(d));
    const Subgroup full = full_subgroup(cl);
    return class_group_cayley(cl, full, generating_multiset(cl, bound, full));
}

void BM_ClassGroup(benchmark::State& state) {
    const std::int64_t d = -state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(class_group(Discriminant(d)).order());
}
BENCHMARK(BM_ClassGroup)->Arg(4391)->Arg(30911)->Arg(99991)->Unit(benchmark::kMillisecond);

void BM_Compose(benchmark::State& state) {
    const ClassGroup cl = class_group(Discriminant(-99991));
    const auto& forms = cl.forms();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(compose(forms[i % forms.size()], forms[(i * 7 + 3) % forms.size()]));
        ++i;
    }
}
BENCHMARK(BM_Compose);

void BM_SpectrumByCharacters(benchmark::State& state) {
    const CayleyGraph g = class_graph(-state.range(0), 50);
    for (auto _ : state) benchmark::DoNotOptimize(spectrum_by_characters(g).second_abs);
}
BENCHMARK(BM_SpectrumByCharacters)->Arg(4391)->Arg(30911)->Unit(benchmark::kMillisecond);

void BM_SpectrumNumeric(benchmark::State& state) {
    const CayleyGraph g = class_graph(-state.range(0), 50);
    for (auto _ : state) benchmark::DoNotOptimize(spectrum_numeric(g).front());
}
BENCHMARK(BM_SpectrumNumeric)->Arg(4391)->Arg(30911)->Unit(benchmark::kMillisecond);

void BM_ScanBounds(benchmark::State& state) {
    const ClassGroup cl = class_group(Discriminant(-115));
    const Subgroup full = full_subgroup(cl);
    for (auto _ : state) benchmark::DoNotOptimize(scan_bounds(cl, full, 0.5, state.range(0)).rows.size());
}
BENCHMARK(BM_ScanBounds)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_MixingExperiment(benchmark::State& state) {
    const CayleyGraph g = class_graph(-4391, 30);
    const double c = expansion(g).c;
    WalkConfig cfg;
    cfg.trials = state.range(0);
    cfg.targets = {0};
    cfg.length = mixing_length(g.graph().vertex_count(), g.degree(), c, 1);
    for (auto _ : state) {
        ++cfg.seed;
        benchmark::DoNotOptimize(mixing_experiment(g.graph(), c, 1, cfg).hits);
    }
}
BENCHMARK(BM_MixingExperiment)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_FindPath(benchmark::State& state) {
    const CayleyGraph g = class_graph(-state.range(0), 50);
    const std::size_t n = g.graph().vertex_count();
    std::uint64_t seed = 0;
    for (auto _ : state) {
        ++seed;
        benchmark::DoNotOptimize(find_path(g.graph(), seed % n, (seed * 31) % n, seed).certificate.length());
    }
}
BENCHMARK(BM_FindPath)->Arg(4391)->Arg(30911)->Arg(99991);

void BM_RationalIsogenies(benchmark::State& state) {
    const auto cls = enumerate_isogeny_class(1009, 13);
    const std::int64_t ell = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(rational_l_isogenies(cls[0].curve, ell).size());
}
BENCHMARK(BM_RationalIsogenies)->Arg(3)->Arg(7)->Arg(13)->Unit(benchmark::kMillisecond);

void BM_BuildIsogenyGraph(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(build_isogeny_graph(1009, 13, {3, 5, 7, 11, 13}).edges.size());
}
BENCHMARK(BM_BuildIsogenyGraph)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
