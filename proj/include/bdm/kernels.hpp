#pragma once

// Pairwise O(n^2) loops shared by the model and Fisher modules. The OpenMP
// version and the serial reference produce bit-identical results: each row
// and each column is reduced by one thread in index order.

#include <Eigen/Dense>

#include "bdm/family.hpp"
#include "bdm/model.hpp"

namespace bdm::kernels {

/// Below this vertex count the parallel kernels run on one thread.
inline constexpr std::size_t kParallelThreshold = 96;

struct PairMoments {
  Eigen::VectorXd mean_row;  // expected out-degrees
  Eigen::VectorXd mean_col;  // expected in-degrees
  // Only filled when requested.
  Eigen::MatrixXd variance;  // zero diagonal
  Eigen::VectorXd var_row;
  Eigen::VectorXd var_col;
  double var_min = 0.0;
  double var_max = 0.0;
};

/// Caller guarantees theta is in the family's domain.
PairMoments pair_moments(const ParamVector& theta, const WeightFamily& family, bool with_variance);
PairMoments pair_moments_serial(const ParamVector& theta, const WeightFamily& family,
                                bool with_variance);

/// Row and column sums of a zero-diagonal weight matrix.
void margins(const Eigen::MatrixXd& weights, Eigen::VectorXd& rows, Eigen::VectorXd& cols);
void margins_serial(const Eigen::MatrixXd& weights, Eigen::VectorXd& rows, Eigen::VectorXd& cols);

}  // namespace bdm::kernels
