#include <cmath>

#include "bdm/error.hpp"
#include "bdm/sampler.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bdm;

TEST_CASE("binary density at theta = 0") {
  // 10^4 edges per graph x 100 graphs is plenty at 3 sigma on the pooled mean;
  // the per-graph density is also checked.
  const std::size_t n = 100;
  const ParamVector zero = ParamVector::zeros(n, Orientation::Natural);
  double total = 0;
  const int graphs = 100;
  for (int r = 0; r < graphs; ++r) {
    const Graph g = sample_graph(zero, WeightFamily::binary(), replication_seed(5, r));
    const double density = g.weights().sum() / static_cast<double>(n * (n - 1));
    CHECK(std::abs(density - 0.5) < 0.015);
    total += density;
  }
  CHECK(std::abs(total / graphs - 0.5) < 3 * 0.5 / std::sqrt(graphs * n * (n - 1.0)));
}

TEST_CASE("exponential mean at rate 2") {
  const std::size_t n = 50;
  const ParamVector rate2(VectorXd::Constant(n, 2.0), VectorXd::Zero(n), Orientation::Negated);
  double total = 0;
  const int graphs = 40;
  for (int r = 0; r < graphs; ++r) total += sample_graph(rate2, WeightFamily::exponential(), 100 + r).weights().sum();
  const double edges = graphs * n * (n - 1.0);
  CHECK(std::abs(total / edges - 0.5) < 4 * 0.5 / std::sqrt(edges));
}

TEST_CASE("sampling is deterministic in the seed and has a zero diagonal") {
  for (const auto& fam : test::families()) {
    const ParamVector theta = test::random_theta(fam, 20, 1);
    const Graph a = sample_graph(theta, fam, 42);
    const Graph b = sample_graph(theta, fam, 42);
    const Graph c = sample_graph(theta, fam, 43);
    CHECK(a.weights() == b.weights());
    CHECK(a.weights() != c.weights());
    CHECK(a.weights().diagonal().isZero());
    CHECK_NOTHROW(a.check_support(fam));
  }
}

TEST_CASE("sampling rejects parameters outside the domain") {
  VectorXd alpha = VectorXd::Constant(3, 0.5);
  VectorXd beta(3);
  beta << -1.0, 0.2, 0.0;
  CHECK_THROWS_AS(sample_graph(ParamVector(alpha, beta, Orientation::Negated), WeightFamily::geometric(), 1),
                  DomainError);
}

TEST_CASE("empirical bi-degree means track expected degrees") {
  const std::size_t n = 30;
  const int reps = 2000;
  for (const auto& fam : test::families()) {
    const ParamVector theta = test::random_theta(fam, n, 17);
    const BiDegree mean = expected_degrees(theta, fam);
    // Var(d_i) is the row sum of edge variances.
    VectorXd var_d = VectorXd::Zero(n), var_b = VectorXd::Zero(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) {
          const double v = edge_variance(fam, theta.pair_sum(i, j));
          var_d[static_cast<Eigen::Index>(i)] += v;
          var_b[static_cast<Eigen::Index>(j)] += v;
        }
    VectorXd sum_d = VectorXd::Zero(n), sum_b = VectorXd::Zero(n);
    for (int r = 0; r < reps; ++r) {
      const BiDegree g = bi_degrees(sample_graph(theta, fam, replication_seed(99, r)));
      sum_d += g.d;
      sum_b += g.b;
    }
    CAPTURE(fam.name());
    const VectorXd z_d = (sum_d / reps - mean.d).cwiseQuotient((var_d / reps).cwiseSqrt());
    const VectorXd z_b = (sum_b / reps - mean.b).cwiseQuotient((var_b / reps).cwiseSqrt());
    CHECK(z_d.lpNorm<Eigen::Infinity>() < 4.0);
    CHECK(z_b.lpNorm<Eigen::Infinity>() < 4.0);
  }
}

TEST_CASE("streams with different seeds are uncorrelated") {
  const std::size_t n = 120;
  const ParamVector theta = ParamVector::zeros(n, Orientation::Natural);
  const MatrixXd a = sample_graph(theta, WeightFamily::binary(), replication_seed(7, 0)).weights();
  const MatrixXd b = sample_graph(theta, WeightFamily::binary(), replication_seed(7, 1)).weights();
  double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
  double count = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i == j) continue;
      sa += a(i, j);
      sb += b(i, j);
      sab += a(i, j) * b(i, j);
      saa += a(i, j) * a(i, j);
      sbb += b(i, j) * b(i, j);
      ++count;
    }
  const double cov = sab / count - (sa / count) * (sb / count);
  const double corr = cov / std::sqrt((saa / count - std::pow(sa / count, 2)) * (sbb / count - std::pow(sb / count, 2)));
  CHECK(std::abs(corr) < 4.0 / std::sqrt(count));
}

TEST_CASE("ramp designs") {
  const ParamVector flat = design_params({WeightFamily::binary(), 100, 0.0});
  CHECK(flat.alpha().isZero());
  CHECK(flat.beta().isZero());

  const ParamVector ramp = design_params({WeightFamily::binary(), 5, 4.0});
  CHECK(ramp.alpha() == (VectorXd(5) << 4, 3, 2, 1, 0).finished());
  CHECK(ramp.beta() == (VectorXd(5) << 4, 3, 2, 1, 0).finished());

  const ParamVector geo = design_params({WeightFamily::geometric(), 5, 0.0});
  CHECK(geo.alpha() == VectorXd::Constant(5, 0.2));
  CHECK(geo.beta() == (VectorXd(5) << 0.2, 0.2, 0.2, 0.2, 0.0).finished());
  CHECK(geo.orientation() == Orientation::Negated);

  const ParamVector expo = design_params({WeightFamily::exponential(), 7, 1.5});
  CHECK(expo.alpha()[0] == doctest::Approx(2.5));
  CHECK(expo.alpha()[6] == doctest::Approx(1.0));

  CHECK_THROWS_AS(design_params({WeightFamily::binary(), 5, -1.0}), ConfigError);
  CHECK_THROWS_AS(design_params({WeightFamily::binary(), 1, 0.0}), ConfigError);
}

TEST_CASE("rate-family designs stay inside the domain") {
  // beta_n = 0 means the smallest pair sum is offset + L/(n-1), not 2*offset.
  for (const auto& fam : {WeightFamily::exponential(), WeightFamily::geometric()}) {
    for (const std::size_t n : {3UL, 10UL, 200UL}) {
      for (const LRule rule : {LRule::Zero, LRule::LogLog, LRule::SqrtLog, LRule::Log, LRule::SqrtN}) {
        const SimDesign design{fam, n, l_value(rule, n)};
        const ParamVector theta = design_params(design);
        CHECK(theta.min_pair_sum() == doctest::Approx(design.offset() + design.L / (n - 1.0)));
        CHECK(theta.min_pair_sum() > 0.0);
      }
    }
  }
}

TEST_CASE("L rules") {
  CHECK(l_value(LRule::Zero, 100) == 0.0);
  CHECK(l_value(LRule::Log, 100) == doctest::Approx(std::log(100.0)));
  CHECK(l_value(LRule::SqrtLog, 100) == doctest::Approx(std::sqrt(std::log(100.0))));
  CHECK(l_value(LRule::LogLog, 100) == doctest::Approx(std::log(std::log(100.0))));
  CHECK(l_value(LRule::SqrtN, 100) == doctest::Approx(10.0));
  for (const LRule rule : {LRule::Zero, LRule::LogLog, LRule::SqrtLog, LRule::Log, LRule::SqrtN}) {
    CHECK(parse_l_rule(l_rule_name(rule)) == rule);
  }
  CHECK_THROWS_AS(parse_l_rule("cubic"), ConfigError);
}

TEST_CASE("seed derivation and uniforms") {
  // First output of SplitMix64 seeded with 0.
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(replication_seed(0, 0) == mix64(0));
  CHECK(replication_seed(123, 5) == (123ULL ^ mix64(5)));
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100000; ++k) {
    const double u = uniform_open_closed(rng);
    CHECK_UNARY(u > 0.0 && u <= 1.0);
  }
}
