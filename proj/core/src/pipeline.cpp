#include "stereosal/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "stereosal/diffusion.hpp"
#include "stereosal/errors.hpp"

namespace stereosal {

namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& out) : out_(out) {}

  template <typename Fn>
  auto run(const char* stage, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        record(stage, start);
      } else {
        auto result = fn();
        record(stage, start);
        return result;
      }
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(stage, e.what());
    }
  }

 private:
  void record(const char* stage, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
    out_.push_back({stage, dt.count()});
  }

  std::vector<StageTiming>& out_;
};

}  // namespace

void PipelineConfig::validate() const {
  if (superpixels < 2) throw ConfigError("superpixels must be >= 2");
  if (!(sigma2 > 0.0)) throw ConfigError("sigma2 must be positive");
  validate_levels(levels);
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("tau must lie in (0,1)");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0,1]");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in [0,1)");
  if (!(slic_compactness > 0.0)) throw ConfigError("SLIC compactness must be positive");
  if (slic_iterations < 1) throw ConfigError("SLIC iterations must be >= 1");
  if (ring < 1 || ring > 2) throw ConfigError("ring must be 1 or 2");
  if (lambda_override && !(*lambda_override >= 0.0)) {
    throw ConfigError("lambda override must be nonnegative");
  }
}

SaliencyMap fuse(const SaliencyMap& compactness, const SaliencyMap& foreground, double gamma) {
  if (compactness.size() != foreground.size()) {
    throw DimensionError("cannot fuse saliency maps of different sizes");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ConfigError("gamma must lie in [0,1]");
  }
  SaliencyMap out;
  out.id = compactness.id;
  out.values = gamma * compactness.values + (1.0 - gamma) * foreground.values;
  return out;
}

PipelineOutput run_pipeline(const RgbdSample& sample, const PipelineConfig& cfg,
                            const std::optional<cv::Mat_<double>>& objectness) {
  cfg.validate();
  PipelineOutput out;
  StageClock clock(out.timings);

  clock.run("validate", [&] { sample.validate(); });

  out.confidence = clock.run("depth_confidence",
                             [&] { return depth_confidence(sample.depth, cfg.levels); });
  out.lambda_used = cfg.lambda_override.value_or(out.confidence.lambda_d);
  const double lambda = out.lambda_used;

  out.segmentation = clock.run("slic", [&] {
    return slic_segment(sample.rgb,
                        SlicParams{cfg.superpixels, cfg.slic_compactness, cfg.slic_iterations});
  });
  const SegmentationMap& seg = out.segmentation;

  const SuperpixelSet features =
      clock.run("features", [&] { return extract_features(sample, seg); });

  const AffinityGraph graph = clock.run(
      "affinity", [&] { return build_affinity(features, seg, lambda, cfg.sigma2, cfg.ring); });

  const DiffusionOperator op =
      clock.run("diffusion_operator", [&] { return DiffusionOperator(graph.weights, cfg.alpha); });

  const Eigen::MatrixXd diffused = clock.run("diffuse_affinity", [&] {
    return cfg.diffusion ? diffuse_affinity(op, graph.affinity) : graph.affinity;
  });

  const CompactnessResult compact = clock.run("compactness", [&] {
    const Eigen::VectorXd obj = objectness_prior(features, seg, objectness);
    return compute_compactness(diffused, features, sample.size(), lambda, cfg.sigma2, obj,
                               cfg.depth_term);
  });

  out.seeds = clock.run("seed_selection", [&] {
    return select_seeds_drss(compact.saliency, features.mean_depth, cfg.tau, cfg.drss);
  });

  const Eigen::VectorXd fg = clock.run("foreground", [&] {
    const double diag = std::hypot(static_cast<double>(sample.size().width),
                                   static_cast<double>(sample.size().height));
    const Eigen::VectorXd raw =
        foreground_contrast(graph.affinity, features, out.seeds.refined, diag, cfg.sigma2);
    return finalize_foreground(raw, op);
  });

  clock.run("fuse", [&] {
    out.compactness = SaliencyMap{sample.id, pixelize(compact.saliency, seg)};
    out.foreground = SaliencyMap{sample.id, pixelize(fg, seg)};
    out.final = fuse(out.compactness, out.foreground, cfg.gamma);
  });
  return out;
}

cv::Mat_<std::uint8_t> seed_mask(const SeedSet& seeds, const SegmentationMap& seg) {
  std::vector<std::uint8_t> value(static_cast<std::size_t>(seg.count), 0);
  for (int i : seeds.preliminary) value[i] = 128;
  for (int i : seeds.refined) value[i] = 255;
  cv::Mat_<std::uint8_t> mask(seg.size());
  for (int y = 0; y < mask.rows; ++y) {
    for (int x = 0; x < mask.cols; ++x) {
      mask(y, x) = value[seg.labels(y, x)];
    }
  }
  return mask;
}

}  // namespace stereosal
