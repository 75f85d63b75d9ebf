#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <opencv2/core.hpp>

#include "stereosal/compactness.hpp"
#include "stereosal/dataset_io.hpp"
#include "stereosal/depth_confidence.hpp"
#include "stereosal/foreground.hpp"
#include "stereosal/superpixel_graph.hpp"

namespace stereosal {

struct PipelineConfig {
  int superpixels = 200;
  double sigma2 = 0.1;
  std::vector<double> levels = kDefaultDepthLevels;
  double tau = kDefaultTau;
  double gamma = 0.8;
  double alpha = kDefaultAlpha;
  double slic_compactness = 10.0;
  int slic_iterations = 10;
  int ring = 1;
  bool invert_depth = false;
  bool diffusion = true;
  bool drss = true;
  std::optional<std::string> objectness_path;

  DepthTermIndex depth_term = DepthTermIndex::Neighbor;

  // Ablation only: replaces the measured depth confidence.
  std::optional<double> lambda_override;

  void validate() const;
};

struct StageTiming {
  std::string stage;
  double ms = 0.0;
};

struct PipelineOutput {
  SaliencyMap compactness;
  SaliencyMap foreground;
  SaliencyMap final;
  DepthConfidence confidence;
  double lambda_used = 0.0;
  SeedSet seeds;
  SegmentationMap segmentation;
  std::vector<StageTiming> timings;
};

/// gamma * s_cs + (1 - gamma) * s_fs, per pixel, no renormalization.
SaliencyMap fuse(const SaliencyMap& compactness, const SaliencyMap& foreground,
                 double gamma);

/// Full per-image flow. `objectness`, when given, replaces the centre
/// prior. Stage failures surface as StageError.
PipelineOutput run_pipeline(const RgbdSample& sample, const PipelineConfig& cfg,
                            const std::optional<cv::Mat_<double>>& objectness =
                                std::nullopt);

/// Seed visualisation: refined seeds 255, dropped preliminary seeds 128.
cv::Mat_<std::uint8_t> seed_mask(const SeedSet& seeds,
                                 const SegmentationMap& seg);

}  // namespace stereosal
