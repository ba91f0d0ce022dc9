#include "bdm/kernels.hpp"

#include <algorithm>
#include <limits>

#include <omp.h>

namespace bdm::kernels {

namespace {

using Index = Eigen::Index;

void min_max_off_diagonal(const Eigen::MatrixXd& m, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -std::numeric_limits<double>::infinity();
  const Index n = m.rows();
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      lo = std::min(lo, m(i, j));
      hi = std::max(hi, m(i, j));
    }
  }
}

}  // namespace

PairMoments pair_moments(const ParamVector& theta, const WeightFamily& family, bool with_variance) {
  const Index n = static_cast<Index>(theta.n());
  const bool parallel = theta.n() >= kParallelThreshold && !omp_in_parallel();
  const Eigen::VectorXd& alpha = theta.alpha();
  const Eigen::VectorXd& beta = theta.beta();

  Eigen::MatrixXd mean(n, n);
  Eigen::MatrixXd var;
  if (with_variance) var.resize(n, n);

#pragma omp parallel for schedule(static) if (parallel)
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) {
        mean(i, j) = 0.0;
        if (with_variance) var(i, j) = 0.0;
        continue;
      }
      const EdgeMoments em = edge_moments(family, alpha[i] + beta[j]);
      mean(i, j) = em.mean;
      if (with_variance) var(i, j) = em.variance;
    }
  }

  PairMoments out;
  margins(mean, out.mean_row, out.mean_col);
  if (with_variance) {
    margins(var, out.var_row, out.var_col);
    min_max_off_diagonal(var, out.var_min, out.var_max);
    out.variance = std::move(var);
  }
  return out;
}

PairMoments pair_moments_serial(const ParamVector& theta, const WeightFamily& family,
                                bool with_variance) {
  const Index n = static_cast<Index>(theta.n());
  PairMoments out;
  out.mean_row = Eigen::VectorXd::Zero(n);
  out.mean_col = Eigen::VectorXd::Zero(n);
  if (with_variance) {
    out.variance = Eigen::MatrixXd::Zero(n, n);
    out.var_row = Eigen::VectorXd::Zero(n);
    out.var_col = Eigen::VectorXd::Zero(n);
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const EdgeMoments em = edge_moments(family, theta.pair_sum(i, j));
      out.mean_row[i] += em.mean;
      out.mean_col[j] += em.mean;
      if (with_variance) {
        out.variance(i, j) = em.variance;
        out.var_row[i] += em.variance;
        out.var_col[j] += em.variance;
      }
    }
  }
  if (with_variance) min_max_off_diagonal(out.variance, out.var_min, out.var_max);
  return out;
}

void margins(const Eigen::MatrixXd& weights, Eigen::VectorXd& rows, Eigen::VectorXd& cols) {
  const Index n = weights.rows();
  const bool parallel = static_cast<std::size_t>(n) >= kParallelThreshold && !omp_in_parallel();
  rows.resize(n);
  cols.resize(n);
#pragma omp parallel for schedule(static) if (parallel)
  for (Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j != i) acc += weights(i, j);
    }
    rows[i] = acc;
  }
#pragma omp parallel for schedule(static) if (parallel)
  for (Index j = 0; j < n; ++j) {
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (i != j) acc += weights(i, j);
    }
    cols[j] = acc;
  }
}

void margins_serial(const Eigen::MatrixXd& weights, Eigen::VectorXd& rows, Eigen::VectorXd& cols) {
  const Index n = weights.rows();
  rows = Eigen::VectorXd::Zero(n);
  cols = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      rows[i] += weights(i, j);
      cols[j] += weights(i, j);
    }
  }
}

}  // namespace bdm::kernels
