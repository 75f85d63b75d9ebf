#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

namespace stereosal {

inline constexpr int kThresholdCount = 256;
inline constexpr double kDefaultBeta2 = 0.3;

struct PrPoint {
  int threshold = 0;
  double precision = 0.0;
  double recall = 0.0;
};

using PrCurve = std::array<PrPoint, kThresholdCount>;

/// For t in 0..255 the prediction is binarized as round(pred * 255) >= t.
/// Precision of an empty prediction is 1. Throws DomainError when `gt`
/// has no positive pixel.
PrCurve pr_curve(const cv::Mat_<double>& pred,
                 const cv::Mat_<std::uint8_t>& gt);

struct FMeasure {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
  double threshold = 0.0;
};

/// min(2 * mean(pred), 1), the adaptive operating point.
double adaptive_threshold(const cv::Mat_<double>& pred);

/// Binarize pred >= adaptive_threshold and score
/// F = (1 + beta2) P R / (beta2 P + R), 0 if the denominator is 0.
FMeasure f_measure(const cv::Mat_<double>& pred,
                   const cv::Mat_<std::uint8_t>& gt,
                   double beta2 = kDefaultBeta2);

double f_score(double precision, double recall, double beta2 = kDefaultBeta2);

/// Mean absolute difference of two same-sized maps.
double mae(const cv::Mat_<double>& a, const cv::Mat_<double>& b);
double mae(const cv::Mat_<double>& pred, const cv::Mat_<std::uint8_t>& gt);

struct ImageEval {
  std::string id;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double mae = 0.0;
  PrCurve curve{};
};

ImageEval evaluate_image(const std::string& id, const cv::Mat_<double>& pred,
                         const cv::Mat_<std::uint8_t>& gt,
                         double beta2 = kDefaultBeta2);

struct EvalAggregate {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double mae = 0.0;
};

struct EvalReport {
  std::vector<ImageEval> rows;
  EvalAggregate aggregate;
  PrCurve pr_curve{};
  std::vector<std::string> excluded;
};

/// Unweighted means over rows; the PR curve is averaged per threshold.
/// Throws DomainError when `rows` is empty.
EvalReport aggregate(std::vector<ImageEval> rows,
                     std::vector<std::string> excluded = {});

/// id,precision,recall,f_measure,mae rows followed by a "mean" row.
void write_report_csv(const EvalReport& report,
                      const std::filesystem::path& path);

/// threshold,precision,recall, 256 rows.
void write_pr_curve_csv(const EvalReport& report,
                        const std::filesystem::path& path);

}  // namespace stereosal
