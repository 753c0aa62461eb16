#include <benchmark/benchmark.h>

#include "sfas/estimators.hpp"

using namespace sfas;

namespace {

SnapshotSet observe(int m, int k, int n) {
    const ArrayConfig c(m, 1.0, 0.5);
    std::vector<double> angles;
    for (int i = 0; i < k; ++i) angles.push_back(-50.0 + 100.0 * (i + 0.5) / k);
    const SourceScene scene = SourceScene::far_field(angles);
    SimulationParams p;
    p.snapshots = n;
    p.snr_db = 10.0;
    p.seed = 1;
    return generate_snapshots(ff_manifold(scene, c), generate_sources(scene, p), p);
}

void BM_SampleCovariance(benchmark::State& state) {
    const SnapshotSet y = observe(static_cast<int>(state.range(0)), 4, static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(sample_covariance(y));
}
BENCHMARK(BM_SampleCovariance)->Args({32, 500})->Args({58, 8000});

void BM_Eigendecompose(benchmark::State& state) {
    const CMatrix r = sample_covariance(observe(static_cast<int>(state.range(0)), 4, 500));
    for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(r));
}
BENCHMARK(BM_Eigendecompose)->Arg(26)->Arg(32)->Arg(58);

void BM_MusicSpectrum(benchmark::State& state) {
    const auto k = static_cast<int>(state.range(0));
    const SnapshotSet y = observe(32, k, 500);
    const SubspaceSplit split = split_subspaces(eigendecompose(sample_covariance(y)), k);
    const SteeringTable table(SteeringModel::far_field(ArrayConfig(32, 1.0, 0.5)), SearchGrid{});
    for (auto _ : state) benchmark::DoNotOptimize(music_spectrum(split, table));
}
BENCHMARK(BM_MusicSpectrum)->Arg(3)->Arg(16)->Arg(29);

void BM_JMusic(benchmark::State& state) {
    const ArrayConfig comp(48, 0.5, 0.5, 2);
    const ArrayConfig ext(32, 1.0, 0.5);
    const CouplingModel coupling = CouplingModel::from_adjacent_magnitude(0.17, 0.25, 2);
    const SourceScene scene = SourceScene::far_field({-4.5, 0.0, 4.5});
    SimulationParams p;
    p.snapshots = 50;
    p.snr_db = 0.0;
    p.seed = 3;
    const CMatrix s = generate_sources(scene, p);
    const SnapshotSet yc =
        generate_snapshots(compressed_manifold(scene, comp, coupling), s, p, Stream::compressed_noise);
    const SnapshotSet ye = generate_snapshots(ff_manifold(scene, ext), s, p);
    const SteeringTable table(SteeringModel::stacked(SteeringModel::coupled_selected(comp, coupling),
                                                     SteeringModel::far_field(ext)),
                              SearchGrid{});
    for (auto _ : state) benchmark::DoNotOptimize(jmusic(yc, ye, 3, table));
}
BENCHMARK(BM_JMusic);

}  // namespace

BENCHMARK_MAIN();
