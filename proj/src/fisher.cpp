#include "bdm/fisher.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bdm/error.hpp"
#include "bdm/kernels.hpp"

namespace bdm {

using Index = Eigen::Index;

namespace {

StructuredFisher from_moments(std::size_t n, kernels::PairMoments&& pm) {
  StructuredFisher v;
  v.n = n;
  v.cross = std::move(pm.variance);
  v.row_sums = std::move(pm.var_row);
  v.col_sums = std::move(pm.var_col);
  v.m = pm.var_min;
  v.M = pm.var_max;
  if (!(v.m > 0.0)) {
    throw DomainError("Fisher cross block has a non-positive entry; parameters too extreme");
  }
  return v;
}

void check_guard(std::size_t n) {
  if (n > kDenseGuard) {
    throw DimensionError("n = " + std::to_string(n) + " exceeds the dense factorization guard");
  }
}

}  // namespace

StructuredFisher StructuredFisher::from_cross(MatrixXd cross) {
  if (cross.rows() != cross.cols() || cross.rows() < 2) {
    throw DimensionError("cross block must be square with n >= 2");
  }
  const Index n = cross.rows();
  kernels::PairMoments pm;
  for (Index i = 0; i < n; ++i) {
    cross(i, i) = 0.0;
  }
  pm.var_min = std::numeric_limits<double>::infinity();
  pm.var_max = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      pm.var_min = std::min(pm.var_min, cross(i, j));
      pm.var_max = std::max(pm.var_max, cross(i, j));
    }
  }
  kernels::margins(cross, pm.var_row, pm.var_col);
  pm.variance = std::move(cross);
  return from_moments(static_cast<std::size_t>(n), std::move(pm));
}

double StructuredFisher::diagonal(std::size_t k) const {
  if (k < n) return row_sums[static_cast<Index>(k)];
  if (k < 2 * n) return col_sums[static_cast<Index>(k - n)];
  throw DimensionError("diagonal index out of range");
}

MatrixXd StructuredFisher::materialize() const {
  const Index nn = static_cast<Index>(n);
  const Index dim = 2 * nn - 1;
  MatrixXd out = MatrixXd::Zero(dim, dim);
  out.topLeftCorner(nn, nn).diagonal() = row_sums;
  out.bottomRightCorner(nn - 1, nn - 1).diagonal() = col_sums.head(nn - 1);
  out.topRightCorner(nn, nn - 1) = cross.leftCols(nn - 1);
  out.bottomLeftCorner(nn - 1, nn) = cross.leftCols(nn - 1).transpose();
  return out;
}

VectorXd StructuredFisher::apply(const VectorXd& x) const {
  const Index nn = static_cast<Index>(n);
  if (x.size() != 2 * nn - 1) throw DimensionError("V x: vector length must be 2n-1");
  const auto w = cross.leftCols(nn - 1);
  VectorXd out(2 * nn - 1);
  out.head(nn) = row_sums.cwiseProduct(x.head(nn)) + w * x.tail(nn - 1);
  out.tail(nn - 1) = col_sums.head(nn - 1).cwiseProduct(x.tail(nn - 1)) + w.transpose() * x.head(nn);
  return out;
}

SApprox SApprox::from(const StructuredFisher& v) {
  const Index nn = static_cast<Index>(v.n);
  SApprox s;
  s.inv_diag.resize(2 * nn - 1);
  s.inv_diag.head(nn) = v.row_sums.cwiseInverse();
  s.inv_diag.tail(nn - 1) = v.col_sums.head(nn - 1).cwiseInverse();
  s.inv_corner = 1.0 / v.corner();
  return s;
}

MatrixXd SApprox::materialize() const {
  const Index dim = inv_diag.size();
  const Index nn = (dim + 1) / 2;
  VectorXd sign(dim);
  sign.head(nn).setOnes();
  sign.tail(nn - 1).setConstant(-1.0);
  MatrixXd out = inv_corner * sign * sign.transpose();
  out.diagonal() += inv_diag;
  return out;
}

StructuredFisher fisher_info(const ParamVector& theta, const WeightFamily& family) {
  require_compatible(theta, family);
  return from_moments(theta.n(), kernels::pair_moments(theta, family, true));
}

StructuredFisher fisher_info_serial(const ParamVector& theta, const WeightFamily& family) {
  require_compatible(theta, family);
  return from_moments(theta.n(), kernels::pair_moments_serial(theta, family, true));
}

MatrixXd residual_jacobian(const ParamVector& theta, const WeightFamily& family) {
  return -family.orientation_sign() * fisher_info(theta, family).materialize();
}

VectorXd s_apply(const SApprox& s, const VectorXd& x) {
  if (x.size() != s.inv_diag.size()) {
    throw DimensionError("S x: vector length " + std::to_string(x.size()) + " != " +
                         std::to_string(s.inv_diag.size()));
  }
  const Index nn = (x.size() + 1) / 2;
  const double x_corner = x.head(nn).sum() - x.tail(nn - 1).sum();
  const double shift = x_corner * s.inv_corner;
  VectorXd out = s.inv_diag.cwiseProduct(x);
  out.head(nn).array() += shift;
  out.tail(nn - 1).array() -= shift;
  return out;
}

VectorXd structured_solve(const StructuredFisher& v, const VectorXd& rhs) {
  const Index nn = static_cast<Index>(v.n);
  if (rhs.size() != 2 * nn - 1) throw DimensionError("solve: rhs length must be 2n-1");
  const auto w = v.cross.leftCols(nn - 1);
  const VectorXd inv_d1 = v.row_sums.cwiseInverse();
  const VectorXd sqrt_inv_d1 = inv_d1.cwiseSqrt();

  // Schur complement C = D2 - W^T D1^{-1} W.
  const MatrixXd scaled = sqrt_inv_d1.asDiagonal() * w;
  MatrixXd schur = v.col_sums.head(nn - 1).asDiagonal();
  schur.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose(), -1.0);
  Eigen::LLT<MatrixXd, Eigen::Lower> llt(schur);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("Schur complement of the Fisher matrix is not positive definite");
  }
  const VectorXd r1 = rhs.head(nn);
  const VectorXd y2 = llt.solve(rhs.tail(nn - 1) - w.transpose() * inv_d1.cwiseProduct(r1));
  VectorXd out(2 * nn - 1);
  out.head(nn) = inv_d1.cwiseProduct(r1 - w * y2);
  out.tail(nn - 1) = y2;
  if (!out.allFinite()) throw SingularMatrixError("structured solve produced non-finite values");
  return out;
}

MatrixXd dense_inverse(const StructuredFisher& v) {
  check_guard(v.n);
  const MatrixXd dense = v.materialize();
  Eigen::LLT<MatrixXd> llt(dense);
  const double tiny = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(dense.rows());
  if (llt.info() != Eigen::Success || !(llt.rcond() > tiny)) {
    std::ostringstream msg;
    msg << "Fisher matrix (n = " << v.n << ") is singular to working precision";
    throw SingularMatrixError(msg.str());
  }
  MatrixXd inv = llt.solve(MatrixXd::Identity(dense.rows(), dense.cols()));
  // Symmetrize away rounding asymmetry from the triangular solves.
  return 0.5 * (inv + inv.transpose());
}

ApproxError approx_error(const StructuredFisher& v) {
  const MatrixXd inv = dense_inverse(v);
  const MatrixXd s = SApprox::from(v).materialize();
  const double nm1 = static_cast<double>(v.n - 1);
  return {(inv - s).cwiseAbs().maxCoeff(), v.M * v.M / (v.m * v.m * v.m * nm1 * nm1)};
}

}  // namespace bdm
