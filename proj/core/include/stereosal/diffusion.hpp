#pragma once

#include <Eigen/Dense>

namespace stereosal {

inline constexpr double kDefaultAlpha = 0.99;

/// Manifold-ranking operator over a weighted graph.
///
/// Holds S = D^{-1/2} W D^{-1/2} and a Cholesky factorization of
/// (I - alpha * S), which is symmetric positive definite for alpha in
/// [0,1). Nodes of zero degree get a zero D^{-1/2} entry. Solves are const
/// and may run concurrently.
class DiffusionOperator {
 public:
  DiffusionOperator(const Eigen::MatrixXd& weights, double alpha);

  double alpha() const { return alpha_; }
  int size() const { return static_cast<int>(normalized_.rows()); }
  const Eigen::MatrixXd& normalized_weights() const { return normalized_; }
  Eigen::MatrixXd system_matrix() const;

  // Solves (I - alpha S) F = Y column by column.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

 private:
  double alpha_;
  Eigen::MatrixXd normalized_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
};

/// f = (I - alpha S)^{-1} y
Eigen::VectorXd manifold_rank(const DiffusionOperator& op,
                              const Eigen::VectorXd& y);

/// Propagates every column of a symmetric affinity through the ranking
/// operator, symmetrizes the result and rescales it to unit diagonal
/// (a_ij / sqrt(a_ii a_jj)).
Eigen::MatrixXd diffuse_affinity(const DiffusionOperator& op,
                                 const Eigen::MatrixXd& affinity);

}  // namespace stereosal
