#include <cmath>

#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "stereosal/compactness.hpp"
#include "stereosal/diffusion.hpp"
#include "stereosal/foreground.hpp"
#include "stereosal/pipeline.hpp"

namespace {

using namespace stereosal;

RgbdSample scene(int width) {
  testing::SceneParams p;
  p.width = width;
  p.height = width * 3 / 4;
  return testing::make_scene(p);
}

// Intermediate products of one image, built once per benchmark.
struct Stages {
  RgbdSample sample;
  double lambda = 0.0;
  SegmentationMap seg;
  SuperpixelSet features;
  AffinityGraph graph;
  Eigen::MatrixXd diffused;
  CompactnessResult compact;
  SeedSet seeds;

  explicit Stages(int width, int superpixels = 200) : sample(scene(width)) {
    lambda = depth_confidence(sample.depth, kDefaultDepthLevels).lambda_d;
    seg = slic_segment(sample.rgb, {superpixels, 10.0, 10});
    features = extract_features(sample, seg);
    graph = build_affinity(features, seg, lambda, 0.1);
    const DiffusionOperator op(graph.weights, kDefaultAlpha);
    diffused = diffuse_affinity(op, graph.affinity);
    compact = compute_compactness(diffused, features, sample.size(), lambda, 0.1,
                                  center_prior(features, sample.size()));
    seeds = select_seeds_drss(compact.saliency, features.mean_depth, kDefaultTau);
  }
};

void BM_Pipeline(benchmark::State& state) {
  const RgbdSample s = scene(static_cast<int>(state.range(0)));
  const PipelineConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_pipeline(s, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.rgb.total()));
  state.SetLabel(std::to_string(s.rgb.cols) + "x" + std::to_string(s.rgb.rows));
}
BENCHMARK(BM_Pipeline)->Arg(160)->Arg(320)->Arg(480)->Arg(640)->Unit(benchmark::kMillisecond);

void BM_PipelineSuperpixels(benchmark::State& state) {
  const RgbdSample s = scene(320);
  PipelineConfig cfg;
  cfg.superpixels = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_pipeline(s, cfg));
  }
}
BENCHMARK(BM_PipelineSuperpixels)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_DepthConfidence(benchmark::State& state) {
  const RgbdSample s = scene(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(depth_confidence(s.depth, kDefaultDepthLevels));
  }
}
BENCHMARK(BM_DepthConfidence)->Arg(320)->Arg(640)->Unit(benchmark::kMicrosecond);

void BM_Slic(benchmark::State& state) {
  const RgbdSample s = scene(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(slic_segment(s.rgb, {200, 10.0, 10}));
  }
}
BENCHMARK(BM_Slic)->Arg(320)->Arg(640)->Unit(benchmark::kMillisecond);

void BM_Features(benchmark::State& state) {
  const Stages st(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_features(st.sample, st.seg));
  }
}
BENCHMARK(BM_Features)->Arg(320)->Arg(640)->Unit(benchmark::kMillisecond);

void BM_Affinity(benchmark::State& state) {
  const Stages st(320, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_affinity(st.features, st.seg, st.lambda, 0.1));
  }
}
BENCHMARK(BM_Affinity)->Arg(200)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_DiffusionOperator(benchmark::State& state) {
  const Stages st(320, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(DiffusionOperator(st.graph.weights, kDefaultAlpha));
  }
}
BENCHMARK(BM_DiffusionOperator)->Arg(200)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_DiffuseAffinity(benchmark::State& state) {
  const Stages st(320, static_cast<int>(state.range(0)));
  const DiffusionOperator op(st.graph.weights, kDefaultAlpha);
  for (auto _ : state) {
    benchmark::DoNotOptimize(diffuse_affinity(op, st.graph.affinity));
  }
}
BENCHMARK(BM_DiffuseAffinity)->Arg(200)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_Compactness(benchmark::State& state) {
  const Stages st(320, static_cast<int>(state.range(0)));
  const Eigen::VectorXd obj = center_prior(st.features, st.sample.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        compute_compactness(st.diffused, st.features, st.sample.size(), st.lambda, 0.1, obj));
  }
}
BENCHMARK(BM_Compactness)->Arg(200)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_ForegroundContrast(benchmark::State& state) {
  const Stages st(320, static_cast<int>(state.range(0)));
  const double diag = std::hypot(320.0, 240.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        foreground_contrast(st.graph.affinity, st.features, st.seeds.refined, diag, 0.1));
  }
}
BENCHMARK(BM_ForegroundContrast)->Arg(200)->Arg(400)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
