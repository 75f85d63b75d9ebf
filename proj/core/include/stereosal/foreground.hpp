#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stereosal/diffusion.hpp"
#include "stereosal/superpixel_graph.hpp"

namespace stereosal {

inline constexpr double kDefaultTau = 0.5;
// share of superpixels taken, by compactness score, when no score clears tau
inline constexpr double kSeedFallbackFraction = 0.1;

struct SeedSet {
  std::vector<int> preliminary;
  std::vector<int> refined;
  double mean_seed_depth = 0.0;
  bool top_fraction_fallback = false;
  bool unrefined_fallback = false;
};

/// Depth-refined seed selection.
///
/// Preliminary seeds are the superpixels whose (renormalized) compactness
/// score exceeds tau; when there are none, the top 10% by score are used.
/// Refinement keeps preliminary seeds whose depth is at least the mean
/// preliminary depth, i.e. seeds as near as the average seed. With
/// `refine` false the refined set equals the preliminary set.
SeedSet select_seeds_drss(const Eigen::VectorXd& compactness,
                          const Eigen::VectorXd& depths, double tau,
                          bool refine = true);

/// |k_i . k_j| / (|k_i| |k_j|); 0 when either histogram is all zeros.
double texture_similarity(const Eigen::Ref<const Eigen::VectorXd>& ki,
                          const Eigen::Ref<const Eigen::VectorXd>& kj);

/// Similarity of every superpixel to the seed set:
///   S(i) = sum_{j in seeds} a_ij D_t(i,j) exp(-(|b_i - b_j| / scale) / sigma2) n_j
/// `position_scale` is the image diagonal. Throws DomainError on an empty
/// seed set.
Eigen::VectorXd foreground_contrast(const Eigen::MatrixXd& affinity,
                                    const SuperpixelSet& features,
                                    std::span<const int> seeds,
                                    double position_scale, double sigma2);

/// minmax(rank(minmax(raw))) per superpixel.
Eigen::VectorXd finalize_foreground(const Eigen::VectorXd& raw,
                                    const DiffusionOperator& op);

}  // namespace stereosal
