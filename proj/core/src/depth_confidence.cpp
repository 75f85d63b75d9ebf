#include "stereosal/depth_confidence.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stereosal/errors.hpp"

namespace stereosal {

namespace {

// Population mean and deviation summed in sorted order, so the result
// depends only on the multiset of values and not on pixel layout.
std::pair<double, double> mean_stddev(const cv::Mat_<double>& depth) {
  std::vector<double> v;
  v.reserve(depth.total());
  for (int y = 0; y < depth.rows; ++y) {
    v.insert(v.end(), depth[y], depth[y] + depth.cols);
  }
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / n;
  double sq = 0.0;
  for (double x : v) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / n)};
}

}  // namespace

void validate_levels(std::span<const double> thresholds) {
  double prev = 0.0;
  for (double t : thresholds) {
    if (!(t > prev) || !(t < 1.0)) {
      throw ConfigError("depth level thresholds must be strictly ascending within (0,1)");
    }
    prev = t;
  }
}

LevelEntropy depth_entropy(const cv::Mat_<double>& depth,
                           std::span<const double> thresholds) {
  validate_levels(thresholds);
  if (depth.empty()) {
    throw DomainError("depth entropy of an empty field");
  }
  const std::size_t levels = thresholds.size() + 1;
  std::vector<double> counts(levels, 0.0);
  for (int y = 0; y < depth.rows; ++y) {
    const double* row = depth[y];
    for (int x = 0; x < depth.cols; ++x) {
      const double v = row[x];
      std::size_t k = 0;
      while (k < thresholds.size() && v >= thresholds[k]) {
        ++k;
      }
      counts[k] += 1.0;
    }
  }
  const double total = static_cast<double>(depth.total());
  LevelEntropy out;
  out.level_probs.resize(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    const double p = counts[k] / total;
    out.level_probs[k] = p;
    if (p > 0.0) {
      out.entropy -= p * std::log(p);
    }
  }
  return out;
}

double confidence_from_stats(double mean, double stddev, double entropy) {
  if (stddev < kDegenerateSigma) {
    return 0.0;
  }
  const double ratio = mean / stddev;
  return std::exp((1.0 - mean) * ratio * entropy) - 1.0;
}

DepthConfidence depth_confidence(const cv::Mat_<double>& depth,
                                 std::span<const double> thresholds) {
  LevelEntropy levels = depth_entropy(depth, thresholds);
  const auto [mean, stddev] = mean_stddev(depth);

  DepthConfidence out;
  out.mean = mean;
  out.stddev = stddev;
  out.cv = out.stddev < kDegenerateSigma ? 0.0 : out.mean / out.stddev;
  out.entropy = levels.entropy;
  out.level_probs = std::move(levels.level_probs);
  out.lambda_d = confidence_from_stats(out.mean, out.stddev, out.entropy);
  return out;
}

}  // namespace stereosal
