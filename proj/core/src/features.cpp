#include <array>
#include <cmath>

#include <opencv2/imgproc.hpp>

#include "stereosal/errors.hpp"
#include "stereosal/superpixel_graph.hpp"

namespace stereosal {

namespace {

// D65 reference white
constexpr double kXn = 0.95047;
constexpr double kYn = 1.0;
constexpr double kZn = 1.08883;

std::array<double, 256> srgb_linear_table() {
  std::array<double, 256> table{};
  for (int i = 0; i < 256; ++i) {
    const double c = i / 255.0;
    table[i] = c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  }
  return table;
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

}  // namespace

cv::Mat_<cv::Vec3d> bgr_to_lab(const cv::Mat& bgr) {
  CV_Assert(bgr.type() == CV_8UC3);
  static const std::array<double, 256> linear = srgb_linear_table();
  cv::Mat_<cv::Vec3d> lab(bgr.size());
  for (int y = 0; y < bgr.rows; ++y) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      const double b = linear[row[x][0]];
      const double g = linear[row[x][1]];
      const double r = linear[row[x][2]];
      const double X = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
      const double Y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
      const double Z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
      const double fx = lab_f(X / kXn);
      const double fy = lab_f(Y / kYn);
      const double fz = lab_f(Z / kZn);
      lab(y, x) = cv::Vec3d(116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz));
    }
  }
  return lab;
}

cv::Mat_<std::uint8_t> lbp_codes(const cv::Mat& gray) {
  CV_Assert(gray.type() == CV_8UC1);
  cv::Mat padded;
  cv::copyMakeBorder(gray, padded, 1, 1, 1, 1, cv::BORDER_REPLICATE);
  // clockwise from the top-left neighbour, most significant bit first
  constexpr int dy[8] = {-1, -1, -1, 0, 1, 1, 1, 0};
  constexpr int dx[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
  cv::Mat_<std::uint8_t> codes(gray.size());
  for (int y = 0; y < gray.rows; ++y) {
    for (int x = 0; x < gray.cols; ++x) {
      const std::uint8_t center = padded.at<std::uint8_t>(y + 1, x + 1);
      unsigned code = 0;
      for (int k = 0; k < 8; ++k) {
        const std::uint8_t n = padded.at<std::uint8_t>(y + 1 + dy[k], x + 1 + dx[k]);
        code = (code << 1) | (n >= center ? 1u : 0u);
      }
      codes(y, x) = static_cast<std::uint8_t>(code);
    }
  }
  return codes;
}

SuperpixelSet extract_features(const RgbdSample& sample, const SegmentationMap& seg) {
  if (seg.size() != sample.size() || sample.depth.size() != sample.size()) {
    throw DimensionError("segmentation does not match sample dimensions");
  }
  const int n = seg.count;
  const cv::Mat_<cv::Vec3d> lab = bgr_to_lab(sample.rgb);
  cv::Mat gray;
  cv::cvtColor(sample.rgb, gray, cv::COLOR_BGR2GRAY);
  const cv::Mat_<std::uint8_t> codes = lbp_codes(gray);

  SuperpixelSet f;
  f.mean_lab = Eigen::MatrixX3d::Zero(n, 3);
  f.mean_depth = Eigen::VectorXd::Zero(n);
  f.centroid = Eigen::MatrixX2d::Zero(n, 2);
  f.pixel_count = Eigen::VectorXd::Zero(n);
  f.lbp_hist = Eigen::MatrixXd::Zero(n, kLbpBins);

  for (int y = 0; y < seg.labels.rows; ++y) {
    for (int x = 0; x < seg.labels.cols; ++x) {
      const int i = seg.labels(y, x);
      const cv::Vec3d& c = lab(y, x);
      f.mean_lab(i, 0) += c[0];
      f.mean_lab(i, 1) += c[1];
      f.mean_lab(i, 2) += c[2];
      f.mean_depth(i) += sample.depth(y, x);
      f.centroid(i, 0) += x;
      f.centroid(i, 1) += y;
      f.pixel_count(i) += 1.0;
      f.lbp_hist(i, codes(y, x)) += 1.0;
    }
  }
  for (int i = 0; i < n; ++i) {
    const double inv = 1.0 / f.pixel_count(i);
    f.mean_lab.row(i) *= inv;
    f.mean_depth(i) *= inv;
    f.centroid.row(i) *= inv;
  }
  return f;
}

Eigen::VectorXd minmax_normalize(const Eigen::VectorXd& v) {
  if (v.size() == 0) return v;
  const double lo = v.minCoeff();
  const double hi = v.maxCoeff();
  if (!(hi > lo)) return Eigen::VectorXd::Zero(v.size());
  return (v.array() - lo) / (hi - lo);
}

cv::Mat_<double> pixelize(const Eigen::VectorXd& scores, const SegmentationMap& seg) {
  CV_Assert(scores.size() == seg.count);
  const Eigen::VectorXd normalized = minmax_normalize(scores);
  cv::Mat_<double> out(seg.size());
  for (int y = 0; y < out.rows; ++y) {
    for (int x = 0; x < out.cols; ++x) {
      out(y, x) = normalized(seg.labels(y, x));
    }
  }
  return out;
}

}  // namespace stereosal
