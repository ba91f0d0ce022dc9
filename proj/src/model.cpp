#include "bdm/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bdm/error.hpp"
#include "bdm/kernels.hpp"

namespace bdm {

using Index = Eigen::Index;

ParamVector::ParamVector(VectorXd alpha, VectorXd beta, Orientation orientation)
    : alpha_(std::move(alpha)), beta_(std::move(beta)), orientation_(orientation) {
  if (alpha_.size() < 2 || alpha_.size() != beta_.size()) {
    throw DimensionError("parameter vector needs alpha and beta of equal length n >= 2");
  }
  if (beta_[beta_.size() - 1] != 0.0) {
    throw DomainError("identifiability constraint violated: beta_n must be exactly 0");
  }
}

ParamVector ParamVector::zeros(std::size_t n, Orientation orientation) {
  const auto m = static_cast<Index>(n);
  return ParamVector(VectorXd::Zero(m), VectorXd::Zero(m), orientation);
}

ParamVector ParamVector::from_free(const VectorXd& free, Orientation orientation) {
  if (free.size() < 3 || free.size() % 2 == 0) {
    throw DimensionError("free parameter vector must have odd length 2n-1 >= 3");
  }
  const Index n = (free.size() + 1) / 2;
  VectorXd beta(n);
  beta.head(n - 1) = free.tail(n - 1);
  beta[n - 1] = 0.0;
  return ParamVector(free.head(n), std::move(beta), orientation);
}

VectorXd ParamVector::free() const {
  const Index n = alpha_.size();
  VectorXd out(2 * n - 1);
  out.head(n) = alpha_;
  out.tail(n - 1) = beta_.head(n - 1);
  return out;
}

double ParamVector::min_pair_sum() const {
  // Smallest and second-smallest beta cover the i != j exclusion.
  const Index n = alpha_.size();
  Index arg = 0;
  for (Index j = 1; j < n; ++j) {
    if (beta_[j] < beta_[arg]) arg = j;
  }
  double second = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < n; ++j) {
    if (j != arg) second = std::min(second, beta_[j]);
  }
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    best = std::min(best, alpha_[i] + (i == arg ? second : beta_[arg]));
  }
  return best;
}

double ParamVector::max_pair_sum() const {
  const Index n = alpha_.size();
  Index arg = 0;
  for (Index j = 1; j < n; ++j) {
    if (beta_[j] > beta_[arg]) arg = j;
  }
  double second = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < n; ++j) {
    if (j != arg) second = std::max(second, beta_[j]);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    best = std::max(best, alpha_[i] + (i == arg ? second : beta_[arg]));
  }
  return best;
}

double ParamVector::max_abs() const {
  return std::max(alpha_.cwiseAbs().maxCoeff(), beta_.cwiseAbs().maxCoeff());
}

void ParamVector::check_domain(const WeightFamily& family) const {
  if (!alpha_.allFinite() || !beta_.allFinite()) {
    throw DomainError("parameters contain non-finite values");
  }
  if (!family.requires_positive_pair_sums() || min_pair_sum() > 0.0) return;
  const Index n = alpha_.size();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && !(alpha_[i] + beta_[j] > 0.0)) {
        std::ostringstream msg;
        msg << family.name() << ": pair (" << i + 1 << "," << j + 1 << ") has alpha+beta = "
            << alpha_[i] + beta_[j] << ", must be > 0";
        throw DomainError(msg.str());
      }
    }
  }
}

VectorXd BiDegree::free() const {
  const Index n = d.size();
  VectorXd g(2 * n - 1);
  g.head(n) = d;
  g.tail(n - 1) = b.head(n - 1);
  return g;
}

Graph::Graph(MatrixXd weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols() || weights_.rows() < 2) {
    throw DimensionError("graph weight matrix must be square with n >= 2");
  }
  for (Index i = 0; i < weights_.rows(); ++i) {
    if (weights_(i, i) != 0.0) {
      throw DomainError("self-loop at vertex " + std::to_string(i + 1));
    }
  }
}

void Graph::check_support(const WeightFamily& family) const {
  const Index n = weights_.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && !family.in_support(weights_(i, j))) {
        std::ostringstream msg;
        msg << family.name() << ": edge (" << i + 1 << "," << j + 1 << ") has weight "
            << weights_(i, j) << " outside the support";
        throw DomainError(msg.str());
      }
    }
  }
}

BiDegree bi_degrees(const Graph& graph) {
  BiDegree g;
  kernels::margins(graph.weights(), g.d, g.b);
  return g;
}

void require_compatible(const ParamVector& theta, const WeightFamily& family) {
  if (theta.orientation() != family.orientation()) {
    throw DomainError("parameter orientation does not match the " + family.name() + " family");
  }
  theta.check_domain(family);
}

BiDegree expected_degrees(const ParamVector& theta, const WeightFamily& family) {
  require_compatible(theta, family);
  kernels::PairMoments pm = kernels::pair_moments(theta, family, false);
  return BiDegree{std::move(pm.mean_row), std::move(pm.mean_col)};
}

VectorXd moment_residual(const ParamVector& theta, const BiDegree& g, const WeightFamily& family) {
  if (g.n() != theta.n() || g.b.size() != g.d.size()) {
    throw DimensionError("bi-degree and parameter dimensions differ");
  }
  const BiDegree expected = expected_degrees(theta, family);
  return g.free() - expected.free();
}

double log_likelihood(const ParamVector& theta, const BiDegree& g, const WeightFamily& family) {
  if (g.n() != theta.n() || g.b.size() != g.d.size()) {
    throw DimensionError("bi-degree and parameter dimensions differ");
  }
  require_compatible(theta, family);
  const Index n = static_cast<Index>(theta.n());
  double partition = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j) partition += log_partition(family, theta.pair_sum(i, j));
    }
  }
  const double linear = theta.alpha().dot(g.d) + theta.beta().dot(g.b);
  return family.orientation_sign() * linear - partition;
}

}  // namespace bdm
