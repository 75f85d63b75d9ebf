#include "stereosal/compactness.hpp"

#include <cmath>

#include "stereosal/errors.hpp"

namespace stereosal {

namespace {

// row i holds a_ij * n_j
Eigen::MatrixXd size_weighted(const Eigen::MatrixXd& affinity, const SuperpixelSet& f) {
  return affinity * f.pixel_count.asDiagonal();
}

}  // namespace

Eigen::Vector2d image_center(cv::Size size) {
  return {(size.width - 1) / 2.0, (size.height - 1) / 2.0};
}

Eigen::MatrixX2d spatial_mean(const Eigen::MatrixXd& affinity, const SuperpixelSet& features) {
  const Eigen::MatrixXd weights = size_weighted(affinity, features);
  const Eigen::VectorXd norm = weights.rowwise().sum();
  Eigen::MatrixX2d mu = weights * features.centroid;
  mu.col(0).array() /= norm.array();
  mu.col(1).array() /= norm.array();
  return mu;
}

Eigen::VectorXd color_compactness(const Eigen::MatrixXd& affinity, const SuperpixelSet& features,
                                  const Eigen::MatrixX2d& mu) {
  const int n = features.size();
  const Eigen::MatrixXd weights = size_weighted(affinity, features);
  Eigen::VectorXd cc(n);
  for (int i = 0; i < n; ++i) {
    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j < n; ++j) {
      num += weights(i, j) * (features.centroid.row(j) - mu.row(i)).norm();
      den += weights(i, j);
    }
    cc(i) = num / den;
  }
  return cc;
}

Eigen::VectorXd depth_compactness(const Eigen::MatrixXd& affinity, const SuperpixelSet& features,
                                  const Eigen::Vector2d& center, double lambda_d, double sigma2,
                                  DepthTermIndex index) {
  const int n = features.size();
  const Eigen::MatrixXd weights = size_weighted(affinity, features);
  Eigen::VectorXd to_center(n);
  for (int j = 0; j < n; ++j) {
    to_center(j) = (features.centroid.row(j).transpose() - center).norm();
  }
  Eigen::VectorXd dc(n);
  for (int i = 0; i < n; ++i) {
    const double den = weights.row(i).sum();
    if (index == DepthTermIndex::Own) {
      const double damp = std::exp(-lambda_d * features.mean_depth(i) / sigma2);
      dc(i) = weights.row(i).dot(to_center) * damp / den;
    } else {
      double num = 0.0;
      for (int j = 0; j < n; ++j) {
        num += weights(i, j) * to_center(j) *
               std::exp(-lambda_d * features.mean_depth(j) / sigma2);
      }
      dc(i) = num / den;
    }
  }
  return dc;
}

Eigen::VectorXd center_prior(const SuperpixelSet& features, cv::Size size) {
  const Eigen::Vector2d p = image_center(size);
  const double diag = std::hypot(static_cast<double>(size.width), static_cast<double>(size.height));
  const double spread = 0.25 * diag;
  Eigen::VectorXd obj(features.size());
  for (int i = 0; i < features.size(); ++i) {
    const double d2 = (features.centroid.row(i).transpose() - p).squaredNorm();
    obj(i) = std::exp(-d2 / (2.0 * spread * spread));
  }
  return obj;
}

Eigen::VectorXd objectness_from_map(const SegmentationMap& seg, const cv::Mat_<double>& map) {
  if (map.size() != seg.size()) {
    throw DimensionError("objectness map does not match image dimensions");
  }
  double lo = 0.0;
  double hi = 0.0;
  cv::minMaxLoc(map, &lo, &hi);
  if (lo < 0.0 || hi > 1.0) {
    throw DomainError("objectness map values must lie in [0,1]");
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(seg.count);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(seg.count);
  for (int y = 0; y < map.rows; ++y) {
    for (int x = 0; x < map.cols; ++x) {
      const int i = seg.labels(y, x);
      sum(i) += map(y, x);
      count(i) += 1.0;
    }
  }
  return sum.cwiseQuotient(count);
}

Eigen::VectorXd objectness_prior(const SuperpixelSet& features, const SegmentationMap& seg,
                                 const std::optional<cv::Mat_<double>>& external) {
  if (external) {
    return objectness_from_map(seg, *external);
  }
  return center_prior(features, seg.size());
}

Eigen::VectorXd compactness_saliency(const Eigen::VectorXd& cc, const Eigen::VectorXd& dc,
                                     const Eigen::VectorXd& obj) {
  if (cc.size() != dc.size() || cc.size() != obj.size()) {
    throw DimensionError("compactness vectors differ in length");
  }
  const Eigen::VectorXd spread = minmax_normalize(cc + dc);
  return (1.0 - spread.array()) * obj.array();
}

CompactnessResult compute_compactness(const Eigen::MatrixXd& affinity,
                                      const SuperpixelSet& features, cv::Size size,
                                      double lambda_d, double sigma2,
                                      const Eigen::VectorXd& objectness, DepthTermIndex index) {
  CompactnessResult r;
  r.center = image_center(size);
  r.spatial_mean = spatial_mean(affinity, features);
  r.color = color_compactness(affinity, features, r.spatial_mean);
  r.depth = depth_compactness(affinity, features, r.center, lambda_d, sigma2, index);
  r.objectness = objectness;
  r.saliency = compactness_saliency(r.color, r.depth, r.objectness);
  return r;
}

}  // namespace stereosal
