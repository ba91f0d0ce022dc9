#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "bdm/family.hpp"

namespace bdm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// The 2n-1 free parameters (alpha_1..alpha_n, beta_1..beta_{n-1}) together
/// with beta_n = 0, stored in the family's orientation.
class ParamVector {
 public:
  ParamVector() = default;
  /// Throws DimensionError on size mismatch or n < 2 and DomainError when
  /// beta's last entry is not exactly zero.
  ParamVector(VectorXd alpha, VectorXd beta, Orientation orientation);
  /// All-zero parameters for n vertices.
  static ParamVector zeros(std::size_t n, Orientation orientation);
  /// Unpacks (alpha_1..alpha_n, beta_1..beta_{n-1}).
  static ParamVector from_free(const VectorXd& free, Orientation orientation);

  std::size_t n() const { return static_cast<std::size_t>(alpha_.size()); }
  const VectorXd& alpha() const { return alpha_; }
  const VectorXd& beta() const { return beta_; }
  Orientation orientation() const { return orientation_; }
  double pair_sum(std::size_t i, std::size_t j) const { return alpha_[i] + beta_[j]; }
  VectorXd free() const;
  /// Smallest alpha_i + beta_j over i != j.
  double min_pair_sum() const;
  double max_pair_sum() const;
  double max_abs() const;

  /// Throws DomainError naming the first offending 1-based pair.
  void check_domain(const WeightFamily& family) const;

 private:
  VectorXd alpha_;
  VectorXd beta_;
  Orientation orientation_ = Orientation::Natural;
};

/// Observed or expected out-degrees d and in-degrees b.
struct BiDegree {
  VectorXd d;
  VectorXd b;

  std::size_t n() const { return static_cast<std::size_t>(d.size()); }
  /// (d_1..d_n, b_1..b_{n-1}), the statistic matched by the residual system.
  VectorXd free() const;
};

/// n x n edge-weight matrix with zero diagonal.
class Graph {
 public:
  /// Throws DimensionError for non-square input or n < 2, DomainError on a
  /// nonzero diagonal entry.
  explicit Graph(MatrixXd weights);
  std::size_t n() const { return static_cast<std::size_t>(weights_.rows()); }
  const MatrixXd& weights() const { return weights_; }
  double operator()(std::size_t i, std::size_t j) const { return weights_(i, j); }
  /// Throws DomainError naming the first 1-based edge outside the support.
  void check_support(const WeightFamily& family) const;

 private:
  MatrixXd weights_;
};

BiDegree bi_degrees(const Graph& graph);

/// Checks orientation agreement and the domain; throws DomainError.
void require_compatible(const ParamVector& theta, const WeightFamily& family);

BiDegree expected_degrees(const ParamVector& theta, const WeightFamily& family);

/// F(theta) = g - E_theta[g] over the 2n-1 free coordinates. Zero at the MLE.
VectorXd moment_residual(const ParamVector& theta, const BiDegree& g, const WeightFamily& family);

/// theta^T g - Z(theta) with theta the natural parameters implied by the
/// stored orientation. Its gradient in the stored coordinates equals
/// orientation_sign() * moment_residual.
double log_likelihood(const ParamVector& theta, const BiDegree& g, const WeightFamily& family);

}  // namespace bdm
