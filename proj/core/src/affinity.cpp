#include <algorithm>
#include <cmath>

#include "stereosal/errors.hpp"
#include "stereosal/superpixel_graph.hpp"

namespace stereosal {

Eigen::Vector3d unit_lab(const Eigen::Vector3d& lab) {
  return {lab(0) / 100.0, (lab(1) + 128.0) / 255.0, (lab(2) + 128.0) / 255.0};
}

double affinity_value(double color_dist, double depth_dist, double lambda_d,
                      double sigma2) {
  return std::exp(-(color_dist + lambda_d * depth_dist) / sigma2);
}

Adjacency region_adjacency(const SegmentationMap& seg, int ring) {
  if (ring < 1 || ring > 2) {
    throw ConfigError("adjacency ring must be 1 or 2");
  }
  const int n = seg.count;
  std::vector<std::vector<char>> touch(static_cast<std::size_t>(n),
                                       std::vector<char>(static_cast<std::size_t>(n), 0));
  const cv::Mat_<int>& l = seg.labels;
  for (int y = 0; y < l.rows; ++y) {
    for (int x = 0; x < l.cols; ++x) {
      const int a = l(y, x);
      if (x + 1 < l.cols && l(y, x + 1) != a) {
        touch[a][l(y, x + 1)] = touch[l(y, x + 1)][a] = 1;
      }
      if (y + 1 < l.rows && l(y + 1, x) != a) {
        touch[a][l(y + 1, x)] = touch[l(y + 1, x)][a] = 1;
      }
    }
  }
  Adjacency first(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (touch[i][j]) first[i].push_back(j);
    }
  }
  if (ring == 1) return first;

  Adjacency second(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<int>& out = second[i];
    out = first[i];
    for (int j : first[i]) {
      out.insert(out.end(), first[j].begin(), first[j].end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    out.erase(std::remove(out.begin(), out.end(), i), out.end());
  }
  return second;
}

AffinityGraph build_affinity(const SuperpixelSet& features, const Adjacency& neighbors,
                             double lambda_d, double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw ConfigError("sigma2 must be positive");
  }
  const int n = features.size();
  if (static_cast<int>(neighbors.size()) != n) {
    throw DimensionError("adjacency size does not match superpixel count");
  }
  std::vector<Eigen::Vector3d> colors(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    colors[i] = unit_lab(features.mean_lab.row(i).transpose());
  }

  AffinityGraph g;
  g.lambda_d = lambda_d;
  g.sigma2 = sigma2;
  g.neighbors = neighbors;
  g.affinity = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double l = (colors[i] - colors[j]).norm();
      const double d = std::abs(features.mean_depth(i) - features.mean_depth(j));
      const double a = affinity_value(l, d, lambda_d, sigma2);
      g.affinity(i, j) = a;
      g.affinity(j, i) = a;
    }
  }
  g.weights = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j : neighbors[i]) {
      g.weights(i, j) = g.affinity(i, j);
      g.weights(j, i) = g.affinity(i, j);
    }
  }
  return g;
}

AffinityGraph build_affinity(const SuperpixelSet& features, const SegmentationMap& seg,
                             double lambda_d, double sigma2, int ring) {
  return build_affinity(features, region_adjacency(seg, ring), lambda_d, sigma2);
}

}  // namespace stereosal
