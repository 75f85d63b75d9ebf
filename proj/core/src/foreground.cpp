#include "stereosal/foreground.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "stereosal/errors.hpp"

namespace stereosal {

SeedSet select_seeds_drss(const Eigen::VectorXd& compactness, const Eigen::VectorXd& depths,
                          double tau, bool refine) {
  if (compactness.size() != depths.size()) {
    throw DimensionError("seed selection inputs differ in length");
  }
  const int n = static_cast<int>(compactness.size());
  SeedSet seeds;
  if (n == 0) return seeds;

  const Eigen::VectorXd score = minmax_normalize(compactness);
  for (int i = 0; i < n; ++i) {
    if (score(i) > tau) seeds.preliminary.push_back(i);
  }
  if (seeds.preliminary.empty()) {
    const int take = std::max(1, static_cast<int>(std::ceil(kSeedFallbackFraction * n)));
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return score(a) > score(b); });
    seeds.preliminary.assign(order.begin(), order.begin() + take);
    std::sort(seeds.preliminary.begin(), seeds.preliminary.end());
    seeds.top_fraction_fallback = true;
    spdlog::warn("no superpixel above tau={}, using top {} by compactness", tau, take);
  }

  double sum = 0.0;
  for (int i : seeds.preliminary) sum += depths(i);
  seeds.mean_seed_depth = sum / static_cast<double>(seeds.preliminary.size());

  if (!refine) {
    seeds.refined = seeds.preliminary;
    return seeds;
  }
  for (int i : seeds.preliminary) {
    if (depths(i) >= seeds.mean_seed_depth) seeds.refined.push_back(i);
  }
  if (seeds.refined.empty()) {
    // only reachable through floating-point rounding of the mean
    seeds.refined = seeds.preliminary;
    seeds.unrefined_fallback = true;
    spdlog::warn("depth refinement removed every seed, keeping preliminary seeds");
  }
  return seeds;
}

double texture_similarity(const Eigen::Ref<const Eigen::VectorXd>& ki,
                          const Eigen::Ref<const Eigen::VectorXd>& kj) {
  const double denom = ki.norm() * kj.norm();
  if (!(denom > 0.0)) return 0.0;
  return std::abs(ki.dot(kj)) / denom;
}

Eigen::VectorXd foreground_contrast(const Eigen::MatrixXd& affinity,
                                    const SuperpixelSet& features, std::span<const int> seeds,
                                    double position_scale, double sigma2) {
  if (seeds.empty()) {
    throw DomainError("foreground contrast needs at least one seed");
  }
  if (!(position_scale > 0.0) || !(sigma2 > 0.0)) {
    throw ConfigError("position scale and sigma2 must be positive");
  }
  const int n = features.size();
  Eigen::VectorXd hist_norm(n);
  for (int i = 0; i < n; ++i) hist_norm(i) = features.lbp_hist.row(i).norm();

  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j : seeds) {
      const double denom = hist_norm(i) * hist_norm(j);
      const double texture =
          denom > 0.0 ? std::abs(features.lbp_hist.row(i).dot(features.lbp_hist.row(j))) / denom
                      : 0.0;
      const double dist = (features.centroid.row(i) - features.centroid.row(j)).norm();
      s(i) += affinity(i, j) * texture * std::exp(-(dist / position_scale) / sigma2) *
              features.pixel_count(j);
    }
  }
  return s;
}

Eigen::VectorXd finalize_foreground(const Eigen::VectorXd& raw, const DiffusionOperator& op) {
  return minmax_normalize(manifold_rank(op, minmax_normalize(raw)));
}

}  // namespace stereosal
