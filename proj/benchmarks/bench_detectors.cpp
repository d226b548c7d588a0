#include <benchmark/benchmark.h>

#include "dualwin/channel.hpp"
#include "dualwin/detectors.hpp"
#include "dualwin/dual_window.hpp"
#include "dualwin/ofdm_frame.hpp"
#include "dualwin/periodogram.hpp"
#include "dualwin/rng.hpp"

using namespace dualwin;

namespace {

struct Fixture {
    OfdmConfig cfg = OfdmConfig::standard();
    DetectorOptions opts = DetectorOptions::standard(cfg);
    WindowMatrix rect = window_matrix(WindowKind::rectangular(), cfg);
    WindowMatrix cheb = window_matrix(WindowKind::dolph_chebyshev(80), cfg);
    ComplexFrame frame;

    explicit Fixture(double snr_db) {
        const auto scene = sample_scene(cfg, SceneConstraints{}, 11);
        const auto ftx = generate_frame(cfg, 12);
        frame = normalize(synthesize_received(ftx, scene, calibrate_noise(snr_db, cfg), cfg, 13), ftx);
        (void)compute_map(frame, cheb, cfg);  // FFTW planning happens on first use
    }
};

const Fixture& fixture() {
    static const Fixture f(0.0);
    return f;
}

void BM_ComputeMap(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(compute_map(f.frame, f.cheb, f.cfg));
}
BENCHMARK(BM_ComputeMap)->Unit(benchmark::kMillisecond);

void BM_BstcRectangular(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(bstc(f.frame, f.rect, 3, f.cfg, f.opts));
}
BENCHMARK(BM_BstcRectangular)->Unit(benchmark::kMillisecond);

void BM_BstcChebyshev(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(bstc(f.frame, f.cheb, 3, f.cfg, f.opts, DetectorTag::bstc_sidelobe));
}
BENCHMARK(BM_BstcChebyshev)->Unit(benchmark::kMillisecond);

void BM_Cstc(benchmark::State& state) {
    const auto& f = fixture();
    const auto h = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(cstc(f.frame, h, f.cfg, f.opts));
}
BENCHMARK(BM_Cstc)->Arg(1)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Adaptive(benchmark::State& state) {
    const auto& f = fixture();
    const DualWindowDetector det(f.cfg, f.rect, f.cheb, 10.0, f.opts);
    for (auto _ : state) benchmark::DoNotOptimize(det.detect(f.frame, 3, ExecutionPolicy::serial));
}
BENCHMARK(BM_Adaptive)->Unit(benchmark::kMillisecond);

void BM_Hungarian(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(5);
    Matrix<double> cost(n, n);
    for (auto& v : cost.flat()) v = rng.uniform(0.0, 100.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_assignment(cost));
}
BENCHMARK(BM_Hungarian)->Arg(3)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
