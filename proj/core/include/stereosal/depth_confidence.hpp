#pragma once

#include <span>
#include <vector>

#include <opencv2/core.hpp>

namespace stereosal {

/// Below this standard deviation a depth map is treated as constant and
/// receives zero confidence.
inline constexpr double kDegenerateSigma = 1e-6;

inline const std::vector<double> kDefaultDepthLevels{0.4, 0.6};

struct LevelEntropy {
  double entropy = 0.0;
  std::vector<double> level_probs;
};

/// Global reliability of a depth map.
///
/// `cv` follows the mean-over-deviation ratio m/sigma used by the
/// confidence formula (the inverse of the textbook coefficient of
/// variation). When sigma < kDegenerateSigma both `cv` and `lambda_d`
/// are reported as 0.
struct DepthConfidence {
  double lambda_d = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  double cv = 0.0;
  double entropy = 0.0;
  std::vector<double> level_probs;
};

/// Quantize depth into L = thresholds.size() + 1 levels and return the
/// Shannon entropy (natural log) of the level frequencies. A value v
/// falls in level k when T_{k-1} <= v < T_k, with T_0 = 0 and the last
/// level closed at 1.
LevelEntropy depth_entropy(const cv::Mat_<double>& depth,
                           std::span<const double> thresholds);

/// lambda = exp((1 - mean) * (mean / stddev) * entropy) - 1, or 0 when
/// stddev is degenerate.
double confidence_from_stats(double mean, double stddev, double entropy);

DepthConfidence depth_confidence(const cv::Mat_<double>& depth,
                                 std::span<const double> thresholds);

// Throws ConfigError unless strictly ascending inside (0,1).
void validate_levels(std::span<const double> thresholds);

}  // namespace stereosal
