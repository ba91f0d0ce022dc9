#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "bdm/error.hpp"
#include "bdm/fisher.hpp"
#include "bdm/sampler.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bdm;

namespace {

// Gauss-Jordan with partial pivoting in long double; independent of the
// library's Cholesky path.
MatrixXd gauss_jordan_inverse(const MatrixXd& a) {
  const auto n = static_cast<std::size_t>(a.rows());
  std::vector<std::vector<long double>> m(n, std::vector<long double>(2 * n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    m[i][n + i] = 1.0L;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    std::swap(m[c], m[piv]);
    const long double d = m[c][c];
    for (auto& x : m[c]) x /= d;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const long double f = m[r][c];
      for (std::size_t k = 0; k < 2 * n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  MatrixXd inv(a.rows(), a.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(m[i][n + j]);
  return inv;
}

// Dense S written entry by entry from its definition.
MatrixXd s_oracle(const MatrixXd& v_dense, double corner) {
  const auto dim = v_dense.rows();
  const auto n = (dim + 1) / 2;
  MatrixXd s(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k)
    for (Eigen::Index l = 0; l < dim; ++l) {
      const double sk = k < n ? 1.0 : -1.0;
      const double sl = l < n ? 1.0 : -1.0;
      s(k, l) = (k == l ? 1.0 / v_dense(k, k) : 0.0) + sk * sl / corner;
    }
  return s;
}

StructuredFisher random_fisher(std::size_t n, std::uint64_t seed, double lo = 0.1, double hi = 0.25) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  MatrixXd cross(n, n);
  for (Eigen::Index i = 0; i < cross.rows(); ++i)
    for (Eigen::Index j = 0; j < cross.cols(); ++j) cross(i, j) = i == j ? 0.0 : u(rng);
  return StructuredFisher::from_cross(cross);
}

}  // namespace

TEST_CASE("fisher information at reference parameters") {
  const StructuredFisher bin = fisher_info(ParamVector::zeros(3, Orientation::Natural), WeightFamily::binary());
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(bin.cross(i, j) == (i == j ? 0.0 : 0.25));
    CHECK(bin.row_sums[i] == 0.5);
    CHECK(bin.col_sums[i] == 0.5);
  }
  CHECK(bin.m == 0.25);
  CHECK(bin.M == 0.25);

  const ParamVector ones(VectorXd::Ones(4), VectorXd::Zero(4), Orientation::Negated);
  const StructuredFisher expo = fisher_info(ones, WeightFamily::exponential());
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(expo.row_sums[i] == 3.0);
    CHECK(expo.diagonal(static_cast<std::size_t>(i)) == 3.0);
  }
  CHECK(expo.corner() == 3.0);
}

TEST_CASE("geometric fisher entries on the ramp design") {
  const auto fam = WeightFamily::geometric();
  const ParamVector theta = design_params({fam, 6, std::log(std::log(6.0))});
  const StructuredFisher v = fisher_info(theta, fam);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      if (i == j) continue;
      const long double es = std::exp(static_cast<long double>(theta.pair_sum(i, j)));
      const double expected = static_cast<double>(es / ((es - 1) * (es - 1)));
      CHECK(v.cross(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
            doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("structured fisher agrees with the dense oracle and is positive definite") {
  for (const auto& fam : test::families()) {
    for (const std::size_t n : {3UL, 7UL, 20UL}) {
      const ParamVector theta = test::random_theta(fam, n, 3 * n);
      const StructuredFisher v = fisher_info(theta, fam);
      const MatrixXd dense = v.materialize();
      CAPTURE(fam.name());
      CHECK(test::rel_err(dense, test::dense_fisher_oracle(theta, fam)) < 1e-14);
      CHECK(dense == dense.transpose());
      // The corner is the sum of the last cross column.
      CHECK(v.corner() == doctest::Approx(v.cross.col(static_cast<Eigen::Index>(n) - 1).sum()).epsilon(1e-14));
      // Rows alpha_1..alpha_{n-1} are strictly dominant because beta_n is not
      // a free coordinate; the remaining rows hold with equality.
      for (Eigen::Index k = 0; k < dense.rows(); ++k) {
        const double off = dense.row(k).cwiseAbs().sum() - std::abs(dense(k, k));
        if (k < static_cast<Eigen::Index>(n) - 1) {
          CHECK(dense(k, k) > off);
        } else {
          CHECK(dense(k, k) >= off * (1 - 1e-14));
        }
      }
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(dense);
      CHECK(eig.eigenvalues().minCoeff() > 0.0);
      for (Eigen::Index i = 0; i < v.cross.rows(); ++i)
        for (Eigen::Index j = 0; j < v.cross.cols(); ++j) {
          if (i == j) continue;
          CHECK(v.cross(i, j) >= v.m);
          CHECK(v.cross(i, j) <= v.M);
        }
      CHECK(v.m > 0.0);

      const VectorXd x = VectorXd::LinSpaced(dense.rows(), -1.0, 2.0);
      CHECK(test::rel_err(v.apply(x), dense * x) < 1e-13);
    }
  }
}

TEST_CASE("residual jacobian is the signed negative fisher matrix") {
  for (const auto& fam : test::families()) {
    const ParamVector theta = test::random_theta(fam, 5, 8);
    const MatrixXd jac = residual_jacobian(theta, fam);
    CHECK(test::rel_err(jac, -fam.orientation_sign() * test::dense_fisher_oracle(theta, fam)) < 1e-14);
  }
}

TEST_CASE("from_cross rejects nonpositive entries") {
  MatrixXd cross = MatrixXd::Constant(3, 3, 0.2);
  cross.diagonal().setZero();
  cross(0, 1) = 0.0;
  CHECK_THROWS_AS(StructuredFisher::from_cross(cross), DomainError);
}

TEST_CASE("s_apply reference cases") {
  const StructuredFisher v = fisher_info(ParamVector::zeros(3, Orientation::Natural), WeightFamily::binary());
  const SApprox s = SApprox::from(v);
  CHECK(s_apply(s, VectorXd::Zero(5)).isZero());
  const VectorXd x = (VectorXd(5) << 1, 1, 1, -1, -1).finished();
  const VectorXd expected = (VectorXd(5) << 12, 12, 12, -12, -12).finished();
  CHECK((s_apply(s, x) - expected).lpNorm<Eigen::Infinity>() < 1e-13);
  CHECK_THROWS_AS(s_apply(s, VectorXd::Zero(4)), DimensionError);
  CHECK((s.inv_diag.array() > 0).all());
  CHECK(s.inv_corner > 0);
}

TEST_CASE("s_apply matches the dense S and is linear") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const StructuredFisher v = random_fisher(6, seed);
    const SApprox s = SApprox::from(v);
    const MatrixXd dense_s = s_oracle(v.materialize(), v.corner());
    CHECK(test::rel_err(s.materialize(), dense_s) < 1e-15);
    VectorXd x(11), y(11);
    for (auto& e : x) e = z(rng);
    for (auto& e : y) e = z(rng);
    CHECK((s_apply(s, x) - dense_s * x).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK((s_apply(s, x + y) - s_apply(s, x) - s_apply(s, y)).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("two-vertex fisher matrix is singular") {
  // With two vertices the alpha_1 and alpha_2 rows are each v * (row of
  // beta_1), so rows 1 and 3 coincide; no inverse exists.
  const StructuredFisher v = fisher_info(ParamVector::zeros(2, Orientation::Natural), WeightFamily::binary());
  const MatrixXd dense = v.materialize();
  CHECK(std::abs(dense.determinant()) < 1e-15);
  CHECK_THROWS_AS(dense_inverse(v), SingularMatrixError);
  CHECK_THROWS_AS(approx_error(v), SingularMatrixError);
  CHECK_THROWS_AS(structured_solve(v, VectorXd::Ones(3)), SingularMatrixError);
}

TEST_CASE("dense inverse against an independent inverse") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const StructuredFisher v = random_fisher(3, seed);
    const MatrixXd inv = dense_inverse(v);
    CHECK((inv - gauss_jordan_inverse(v.materialize())).lpNorm<Eigen::Infinity>() < 1e-12 * inv.lpNorm<Eigen::Infinity>());
    CHECK(inv == inv.transpose());
  }
  MatrixXd uniform = MatrixXd::Constant(6, 6, 0.2);
  uniform.diagonal().setZero();
  const MatrixXd inv_u = dense_inverse(StructuredFisher::from_cross(uniform));
  CHECK((inv_u - inv_u.transpose()).lpNorm<Eigen::Infinity>() <= 1e-12);

  const StructuredFisher v10 = random_fisher(10, 77, 0.05, 0.25);
  const MatrixXd r = v10.materialize() * dense_inverse(v10) - MatrixXd::Identity(19, 19);
  CHECK(r.lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("structured solve equals the dense solve") {
  for (const auto& fam : test::families()) {
    const ParamVector theta = test::random_theta(fam, 15, 55);
    const StructuredFisher v = fisher_info(theta, fam);
    const VectorXd rhs = VectorXd::LinSpaced(29, -3.0, 4.0);
    const VectorXd exact = gauss_jordan_inverse(v.materialize()) * rhs;
    CHECK(test::rel_err(structured_solve(v, rhs), exact) < 1e-11);
  }
  CHECK_THROWS_AS(structured_solve(random_fisher(4, 1), VectorXd::Ones(6)), DimensionError);
}

TEST_CASE("approximation error on a small case against the independent inverse") {
  const StructuredFisher v = random_fisher(3, 12);
  const MatrixXd exact = gauss_jordan_inverse(v.materialize()) - s_oracle(v.materialize(), v.corner());
  const ApproxError ae = approx_error(v);
  CHECK(ae.max_abs_err == doctest::Approx(exact.cwiseAbs().maxCoeff()).epsilon(1e-10));
  CHECK(ae.bound_shape == doctest::Approx(v.M * v.M / (std::pow(v.m, 3) * 4.0)).epsilon(1e-14));
}

TEST_CASE("approximation error decays like n^-2 with a stable constant") {
  std::vector<double> logn, loge, c1;
  for (const std::size_t n : {20UL, 40UL, 80UL, 160UL}) {
    const ApproxError ae = approx_error(fisher_info(ParamVector::zeros(n, Orientation::Natural), WeightFamily::binary()));
    logn.push_back(std::log(static_cast<double>(n)));
    loge.push_back(std::log(ae.max_abs_err));
    c1.push_back(ae.max_abs_err / ae.bound_shape);
  }
  const double mx = (logn[0] + logn[1] + logn[2] + logn[3]) / 4;
  const double my = (loge[0] + loge[1] + loge[2] + loge[3]) / 4;
  double sxy = 0, sxx = 0;
  for (int k = 0; k < 4; ++k) {
    sxy += (logn[k] - mx) * (loge[k] - my);
    sxx += (logn[k] - mx) * (logn[k] - mx);
  }
  const double slope = sxy / sxx;
  CHECK(slope >= -2.3);
  CHECK(slope <= -1.7);
  CHECK(*std::max_element(c1.begin(), c1.end()) < 2 * *std::min_element(c1.begin(), c1.end()));

  // Bounded ramp designs keep the constant bounded as well.
  for (const std::size_t n : {20UL, 40UL, 80UL, 160UL}) {
    const ParamVector theta = design_params({WeightFamily::geometric(), n, 1.0});
    const ApproxError ae = approx_error(fisher_info(theta, WeightFamily::geometric()));
    CHECK(ae.max_abs_err / ae.bound_shape < 10.0);
  }
}

TEST_CASE("inverse-application bound") {
  const std::size_t n = 20;
  const StructuredFisher v = fisher_info(test::random_theta(WeightFamily::binary(), n, 5), WeightFamily::binary());
  const MatrixXd inv = dense_inverse(v);
  const SApprox s = SApprox::from(v);
  const ApproxError ae = approx_error(v);
  const double c1_hat = 2.0 * ae.max_abs_err / ae.bound_shape;  // safety factor 2
  std::mt19937_64 rng(6);
  std::normal_distribution<double> z;
  for (int t = 0; t < 1000; ++t) {
    VectorXd x(2 * n - 1);
    for (auto& e : x) e = z(rng);
    const double lhs = (inv * x).lpNorm<Eigen::Infinity>();
    const double mid = ((inv - s.materialize()) * x).lpNorm<Eigen::Infinity>() + s_apply(s, x).lpNorm<Eigen::Infinity>();
    const double x2n = x.head(n).sum() - x.tail(n - 1).sum();
    double diag_term = 0;
    for (std::size_t k = 0; k < 2 * n - 1; ++k) diag_term = std::max(diag_term, std::abs(x[static_cast<Eigen::Index>(k)]) / v.diagonal(k));
    const double rhs = 2 * c1_hat * (2.0 * n - 1) * v.M * v.M * x.lpNorm<Eigen::Infinity>() /
                           (std::pow(v.m, 3) * (n - 1.0) * (n - 1.0)) +
                       std::abs(x2n) / v.corner() + diag_term;
    CHECK(lhs <= mid * (1 + 1e-12));
    CHECK(mid <= rhs);
  }
}
