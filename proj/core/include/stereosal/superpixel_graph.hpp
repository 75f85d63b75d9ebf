#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <opencv2/core.hpp>

#include "stereosal/dataset_io.hpp"

namespace stereosal {

inline constexpr int kLbpBins = 256;

/// Per-pixel superpixel labels in [0, count). Every label is non-empty and
/// its region is 4-connected.
struct SegmentationMap {
  cv::Mat_<int> labels;
  int count = 0;

  cv::Size size() const { return labels.size(); }
};

struct SlicParams {
  int superpixels = 200;
  double compactness = 10.0;
  int iterations = 10;
};

/// SLIC over-segmentation: k-means in (L, a, b, x, y) with grid-seeded
/// centers nudged to the lowest gradient in their 3x3 neighbourhood,
/// followed by connectivity enforcement. Deterministic.
SegmentationMap slic_segment(const cv::Mat& bgr, const SlicParams& params);

/// Features of every superpixel, stored one row per superpixel.
struct SuperpixelSet {
  Eigen::MatrixX3d mean_lab;   // CIE Lab, L in [0,100]
  Eigen::VectorXd mean_depth;  // [0,1], 1 = near
  Eigen::MatrixX2d centroid;   // (x, y) in pixel coordinates
  Eigen::VectorXd pixel_count;
  Eigen::MatrixXd lbp_hist;    // count x 256, row i sums to pixel_count(i)

  int size() const { return static_cast<int>(pixel_count.size()); }
};

/// sRGB (D65) to CIE Lab in double precision; input is 8-bit BGR.
cv::Mat_<cv::Vec3d> bgr_to_lab(const cv::Mat& bgr);

/// 8-neighbour radius-1 LBP codes on an 8-bit grayscale image. A neighbour
/// that is >= the centre sets its bit; borders are replicated so every
/// pixel receives a code.
cv::Mat_<std::uint8_t> lbp_codes(const cv::Mat& gray);

SuperpixelSet extract_features(const RgbdSample& sample,
                               const SegmentationMap& seg);

/// Lab rescaled to [0,1]^3: (L/100, (a+128)/255, (b+128)/255).
Eigen::Vector3d unit_lab(const Eigen::Vector3d& lab);

using Adjacency = std::vector<std::vector<int>>;

/// Regions sharing at least one 4-neighbour pixel edge. ring = 2 adds
/// neighbours of neighbours. Each list is sorted and excludes i itself.
Adjacency region_adjacency(const SegmentationMap& seg, int ring = 1);

struct AffinityGraph {
  Eigen::MatrixXd affinity;  // dense a_ij
  Eigen::MatrixXd weights;   // w_ij, nonzero only on adjacent pairs
  Adjacency neighbors;
  double lambda_d = 0.0;
  double sigma2 = 0.1;
};

/// exp(-(color_dist + lambda_d * depth_dist) / sigma2)
double affinity_value(double color_dist, double depth_dist, double lambda_d,
                      double sigma2);

AffinityGraph build_affinity(const SuperpixelSet& features,
                             const Adjacency& neighbors, double lambda_d,
                             double sigma2);

AffinityGraph build_affinity(const SuperpixelSet& features,
                             const SegmentationMap& seg, double lambda_d,
                             double sigma2, int ring = 1);

/// Broadcast per-superpixel scores to pixels, then min-max normalize.
cv::Mat_<double> pixelize(const Eigen::VectorXd& scores,
                          const SegmentationMap& seg);

/// Min-max normalize to [0,1]; a constant vector maps to zeros.
Eigen::VectorXd minmax_normalize(const Eigen::VectorXd& v);

}  // namespace stereosal
