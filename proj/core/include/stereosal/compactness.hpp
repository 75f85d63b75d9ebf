#pragma once

#include <optional>

#include <Eigen/Dense>
#include <opencv2/core.hpp>

#include "stereosal/superpixel_graph.hpp"

namespace stereosal {

/// Which superpixel's depth enters the depth-compactness exponential.
/// `Neighbor` weights every term of the sum by exp(-lambda_d d_j / sigma2),
/// so the damping is smoothed by the affinity like the rest of dc. `Own`
/// applies exp(-lambda_d d_i / sigma2) once, outside the sum.
enum class DepthTermIndex { Own, Neighbor };

struct CompactnessResult {
  Eigen::VectorXd color;      // cc, pixel-distance units
  Eigen::VectorXd depth;      // dc, pixel-distance units
  Eigen::MatrixX2d spatial_mean;
  Eigen::VectorXd objectness;
  Eigen::VectorXd saliency;   // s_cs in [0,1]
  Eigen::Vector2d center;
};

/// ((W-1)/2, (H-1)/2): the centre in the same coordinates as centroids.
Eigen::Vector2d image_center(cv::Size size);

/// mu_i = sum_j a_ij n_j b_j / sum_j a_ij n_j
Eigen::MatrixX2d spatial_mean(const Eigen::MatrixXd& affinity,
                              const SuperpixelSet& features);

/// cc(i) = sum_j a_ij n_j |b_j - mu_i| / sum_j a_ij n_j
Eigen::VectorXd color_compactness(const Eigen::MatrixXd& affinity,
                                  const SuperpixelSet& features,
                                  const Eigen::MatrixX2d& mu);

/// dc(i) = sum_j a_ij n_j |b_j - p| exp(-lambda_d d / sigma2) / sum_j a_ij n_j
/// with d = d_j (Neighbor) or d_i (Own).
Eigen::VectorXd depth_compactness(const Eigen::MatrixXd& affinity,
                                  const SuperpixelSet& features,
                                  const Eigen::Vector2d& center,
                                  double lambda_d, double sigma2,
                                  DepthTermIndex index = DepthTermIndex::Neighbor);

/// Gaussian centre prior exp(-|b_i - p|^2 / (2 (diag/4)^2)).
Eigen::VectorXd center_prior(const SuperpixelSet& features, cv::Size size);

/// Mean of an external [0,1] objectness map over each superpixel.
/// Throws DimensionError on shape mismatch and DomainError on values
/// outside [0,1].
Eigen::VectorXd objectness_from_map(const SegmentationMap& seg,
                                    const cv::Mat_<double>& map);

Eigen::VectorXd objectness_prior(
    const SuperpixelSet& features, const SegmentationMap& seg,
    const std::optional<cv::Mat_<double>>& external);

/// s_cs = (1 - minmax(cc + dc)) * obj
Eigen::VectorXd compactness_saliency(const Eigen::VectorXd& cc,
                                     const Eigen::VectorXd& dc,
                                     const Eigen::VectorXd& obj);

CompactnessResult compute_compactness(const Eigen::MatrixXd& affinity,
                                      const SuperpixelSet& features,
                                      cv::Size size, double lambda_d,
                                      double sigma2,
                                      const Eigen::VectorXd& objectness,
                                      DepthTermIndex index = DepthTermIndex::Neighbor);

}  // namespace stereosal
