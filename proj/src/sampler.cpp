#include "bdm/sampler.hpp"

#include <cmath>

#include "bdm/error.hpp"

namespace bdm {

double l_value(LRule rule, std::size_t n) {
  const double nn = static_cast<double>(n);
  switch (rule) {
    case LRule::Zero:
      return 0.0;
    case LRule::LogLog:
      return std::log(std::log(nn));
    case LRule::SqrtLog:
      return std::sqrt(std::log(nn));
    case LRule::Log:
      return std::log(nn);
    case LRule::SqrtN:
      return std::sqrt(nn);
  }
  return 0.0;
}

std::string l_rule_name(LRule rule) {
  switch (rule) {
    case LRule::Zero:
      return "zero";
    case LRule::LogLog:
      return "loglog";
    case LRule::SqrtLog:
      return "sqrtlog";
    case LRule::Log:
      return "log";
    case LRule::SqrtN:
      return "sqrtn";
  }
  return "unknown";
}

LRule parse_l_rule(std::string_view name) {
  if (name == "zero" || name == "0") return LRule::Zero;
  if (name == "loglog") return LRule::LogLog;
  if (name == "sqrtlog") return LRule::SqrtLog;
  if (name == "log") return LRule::Log;
  if (name == "sqrtn") return LRule::SqrtN;
  throw ConfigError("unknown L rule '" + std::string(name) +
                    "' (expected zero|loglog|sqrtlog|log|sqrtn)");
}

double SimDesign::offset() const {
  switch (family.kind()) {
    case FamilyKind::Binary:
      return 0.0;
    case FamilyKind::Exponential:
      return 1.0;
    case FamilyKind::Geometric:
    case FamilyKind::FiniteDiscrete:
      return 0.2;
  }
  return 0.0;
}

ParamVector design_params(const SimDesign& design) {
  if (design.n < 2) throw ConfigError("design needs n >= 2");
  if (!(design.L >= 0.0) || !std::isfinite(design.L)) throw ConfigError("design needs finite L >= 0");
  const auto n = static_cast<Eigen::Index>(design.n);
  const double step = design.L / static_cast<double>(n - 1);
  VectorXd alpha(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    alpha[i] = design.offset() + static_cast<double>(n - 1 - i) * step;
  }
  VectorXd beta = alpha;
  beta[n - 1] = 0.0;
  return ParamVector(std::move(alpha), std::move(beta), design.family.orientation());
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t r) {
  return base_seed ^ mix64(r);
}

double uniform_open_closed(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

Graph sample_graph(const ParamVector& theta, const WeightFamily& family, std::uint64_t seed) {
  require_compatible(theta, family);
  const auto n = static_cast<Eigen::Index>(theta.n());
  std::mt19937_64 rng(seed);
  MatrixXd weights = MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      weights(i, j) = draw_edge(family, theta.pair_sum(i, j), uniform_open_closed(rng));
    }
  }
  return Graph(std::move(weights));
}

}  // namespace bdm
