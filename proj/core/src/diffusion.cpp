#include "stereosal/diffusion.hpp"

#include <cmath>

#include "stereosal/errors.hpp"

namespace stereosal {

DiffusionOperator::DiffusionOperator(const Eigen::MatrixXd& weights, double alpha)
    : alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw ConfigError("manifold ranking alpha must lie in [0,1)");
  }
  if (weights.rows() != weights.cols()) {
    throw DimensionError("weight matrix must be square");
  }
  const Eigen::VectorXd degree = weights.rowwise().sum();
  Eigen::VectorXd inv_sqrt(degree.size());
  for (Eigen::Index i = 0; i < degree.size(); ++i) {
    inv_sqrt(i) = degree(i) > 0.0 ? 1.0 / std::sqrt(degree(i)) : 0.0;
  }
  normalized_ = inv_sqrt.asDiagonal() * weights * inv_sqrt.asDiagonal();
  factor_.compute(system_matrix());
  if (factor_.info() != Eigen::Success) {
    throw ConfigError("manifold ranking system is not positive definite");
  }
}

Eigen::MatrixXd DiffusionOperator::system_matrix() const {
  const Eigen::Index n = normalized_.rows();
  return Eigen::MatrixXd::Identity(n, n) - alpha_ * normalized_;
}

Eigen::MatrixXd DiffusionOperator::solve(const Eigen::MatrixXd& rhs) const {
  if (rhs.rows() != normalized_.rows()) {
    throw DimensionError("right-hand side does not match graph size");
  }
  Eigen::MatrixXd f = factor_.solve(rhs);
  // one step of iterative refinement keeps the residual near machine precision
  const Eigen::MatrixXd r = rhs - system_matrix() * f;
  f += factor_.solve(r);
  return f;
}

Eigen::VectorXd manifold_rank(const DiffusionOperator& op, const Eigen::VectorXd& y) {
  if (!y.allFinite()) {
    throw DomainError("manifold ranking input must be finite");
  }
  return op.solve(y);
}

Eigen::MatrixXd diffuse_affinity(const DiffusionOperator& op,
                                 const Eigen::MatrixXd& affinity) {
  const Eigen::MatrixXd p = op.solve(affinity);
  const Eigen::Index n = p.rows();
  const Eigen::VectorXd scale = p.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd hat(n, n);
  // filled pairwise so the result is exactly symmetric
  for (Eigen::Index j = 0; j < n; ++j) {
    hat(j, j) = 1.0;
    for (Eigen::Index i = 0; i < j; ++i) {
      const double v = 0.5 * (p(i, j) + p(j, i)) * scale(i) * scale(j);
      hat(i, j) = v;
      hat(j, i) = v;
    }
  }
  return hat;
}

}  // namespace stereosal
