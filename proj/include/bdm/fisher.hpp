#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "bdm/family.hpp"
#include "bdm/model.hpp"

namespace bdm {

/// Largest n for which dense (2n-1)^2 factorizations are attempted.
inline constexpr std::size_t kDenseGuard = 5000;

/// Fisher information V of the free parameters, kept by its block structure:
///
///   V = [ diag(row_sums)         cross[:, 0..n-2] ]
///       [ cross[:, 0..n-2]^T     diag(col_sums[0..n-2]) ]
///
/// cross(i, j) = Var(a_ij) with zero diagonal. The last column of cross is
/// v_{2n,i}, and col_sums[n-1] is the corner v_{2n,2n}.
struct StructuredFisher {
  std::size_t n = 0;
  MatrixXd cross;
  VectorXd row_sums;
  VectorXd col_sums;
  double m = 0.0;  // min off-diagonal cross entry
  double M = 0.0;  // max off-diagonal cross entry

  /// Derives sums and bounds from a positive zero-diagonal cross block.
  /// Throws DomainError if an off-diagonal entry is not strictly positive.
  static StructuredFisher from_cross(MatrixXd cross);

  std::size_t dim() const { return 2 * n - 1; }
  /// v_{k,k} for k < 2n-1; k = 2n-1 gives the corner v_{2n,2n}.
  double diagonal(std::size_t k) const;
  double corner() const { return col_sums[static_cast<Eigen::Index>(n) - 1]; }
  /// Dense (2n-1) x (2n-1) matrix. Oracle use only.
  MatrixXd materialize() const;
  /// V x in O(n^2) without materializing.
  VectorXd apply(const VectorXd& x) const;
};

/// Closed-form surrogate for V^{-1}:
///   S_kl = delta_kl / v_kk + sigma_k sigma_l / v_{2n,2n},
/// sigma = +1 on the alpha block and -1 on the beta block.
struct SApprox {
  VectorXd inv_diag;        // 1/v_kk, length 2n-1
  double inv_corner = 0.0;  // 1/v_{2n,2n}

  static SApprox from(const StructuredFisher& v);
  std::size_t n() const { return static_cast<std::size_t>((inv_diag.size() + 1) / 2); }
  MatrixXd materialize() const;
};

/// Positive Fisher matrix at theta: cross entries are edge variances.
StructuredFisher fisher_info(const ParamVector& theta, const WeightFamily& family);

/// Serial-reference build, identical output to fisher_info.
StructuredFisher fisher_info_serial(const ParamVector& theta, const WeightFamily& family);

/// Jacobian of moment_residual in stored coordinates: -sign * V.
MatrixXd residual_jacobian(const ParamVector& theta, const WeightFamily& family);

/// S x in O(n). Throws DimensionError on size mismatch.
VectorXd s_apply(const SApprox& s, const VectorXd& x);

/// V^{-1} x by block elimination on the (n-1) x (n-1) Schur complement
/// diag(col_sums) - W^T diag(row_sums)^{-1} W. Throws SingularMatrixError.
VectorXd structured_solve(const StructuredFisher& v, const VectorXd& rhs);

/// Dense V^{-1} via Cholesky of the materialized matrix. Throws
/// SingularMatrixError when V is not numerically positive definite.
MatrixXd dense_inverse(const StructuredFisher& v);

struct ApproxError {
  double max_abs_err;  // max_{k,l} |(V^{-1} - S)_{kl}|
  double bound_shape;  // M^2 / (m^3 (n-1)^2)
};

ApproxError approx_error(const StructuredFisher& v);

}  // namespace bdm
