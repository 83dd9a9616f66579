#include <benchmark/benchmark.h>

#include "ruledlab/laplace.hpp"
#include "ruledlab/oracle.hpp"
#include "ruledlab/scene.hpp"

using namespace ruledlab;

namespace {

const scene::SceneConfig& example2() {
    static const scene::SceneConfig cfg = scene::builtin("example2");
    return cfg;
}

void BM_parse(benchmark::State& state) {
    for (auto _ : state) {
        auto e = expr::parse("c*sin(u)^3/cos(2*u)+exp(0.1*u)/(2+w)");
        benchmark::DoNotOptimize(e);
    }
}
BENCHMARK(BM_parse);

void BM_eval_jet3(benchmark::State& state) {
    const auto e = expr::parse("sin(u)^3/cos(2*u)");
    double u = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(expr::eval_jet3(e, u));
        u = u < 0.7 ? u + 1e-4 : 0.3;
    }
}
BENCHMARK(BM_eval_jet3);

void BM_eval_bijet2(benchmark::State& state) {
    const auto& cfg = example2();
    for (auto _ : state)
        benchmark::DoNotOptimize(cfg.support.eval(cfg.invariants, 0.4, 0.6));
}
BENCHMARK(BM_eval_bijet2);

void BM_integrate_frame(benchmark::State& state) {
    const auto& cfg = example2();
    for (auto _ : state) {
        auto frames = surface::integrate_frame(cfg.invariants, cfg.invariants.u_min,
                                               surface::canonical_frame(cfg.invariants.u_min),
                                               1e-3);
        benchmark::DoNotOptimize(frames);
    }
}
BENCHMARK(BM_integrate_frame);

void BM_laplace_field(benchmark::State& state) {
    const auto& cfg = example2();
    const surface::FrameFlow flow(cfg.invariants, 1e-3);
    const auto frame = flow.at(0.4);
    const auto pt = surface::patch_point(cfg.invariants, frame, 0.6);
    for (auto _ : state)
        benchmark::DoNotOptimize(laplace::laplace_field(pt, frame, cfg.invariants, cfg.support));
}
BENCHMARK(BM_laplace_field);

void BM_laplacian_oracle(benchmark::State& state) {
    const auto& cfg = example2();
    const oracle::LaplacianOracle lap(cfg.invariants, cfg.support, cfg.oracle_config());
    for (auto _ : state)
        benchmark::DoNotOptimize(lap.at(0.45, 0.5));
}
BENCHMARK(BM_laplacian_oracle);

void BM_classify(benchmark::State& state) {
    const auto& cfg = example2();
    for (auto _ : state) {
        auto rep = laplace::classify_image(cfg.invariants, cfg.support, cfg.classify_grid(),
                                           cfg.classify_tolerances());
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_classify);

} // namespace

BENCHMARK_MAIN();
