#include <omp.h>

#include "bdm/fisher.hpp"
#include "bdm/kernels.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bdm;

TEST_CASE("parallel pair kernels are bit-identical to the serial reference") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  for (const auto& fam : test::families()) {
    for (const std::size_t n : {5UL, kernels::kParallelThreshold + 57}) {
      const ParamVector theta = test::random_theta(fam, n, 31 + n);
      const auto par = kernels::pair_moments(theta, fam, true);
      const auto ser = kernels::pair_moments_serial(theta, fam, true);
      CAPTURE(fam.name());
      CAPTURE(n);
      CHECK(par.mean_row == ser.mean_row);
      CHECK(par.mean_col == ser.mean_col);
      CHECK(par.variance == ser.variance);
      CHECK(par.var_row == ser.var_row);
      CHECK(par.var_col == ser.var_col);
      CHECK(par.var_min == ser.var_min);
      CHECK(par.var_max == ser.var_max);

      const StructuredFisher a = fisher_info(theta, fam);
      const StructuredFisher b = fisher_info_serial(theta, fam);
      CHECK(a.cross == b.cross);
      CHECK(a.row_sums == b.row_sums);
      CHECK(a.col_sums == b.col_sums);
    }
  }
  omp_set_num_threads(saved);
}

TEST_CASE("parallel margins match the serial reference and direct sums") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(3);
  const std::size_t n = 211;
  const Graph g = sample_graph(test::random_theta(WeightFamily::exponential(), n, 4), WeightFamily::exponential(), 8);
  Eigen::VectorXd r1, c1, r2, c2;
  kernels::margins(g.weights(), r1, c1);
  kernels::margins_serial(g.weights(), r2, c2);
  CHECK(r1 == r2);
  CHECK(c1 == c2);
  CHECK((r1 - g.weights().rowwise().sum()).lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK((c1 - g.weights().colwise().sum().transpose()).lpNorm<Eigen::Infinity>() < 1e-10);
  omp_set_num_threads(saved);
}

TEST_CASE("mean-only kernel leaves the variance outputs empty") {
  const ParamVector theta = test::random_theta(WeightFamily::binary(), 6, 2);
  const auto pm = kernels::pair_moments(theta, WeightFamily::binary(), false);
  CHECK(pm.mean_row.size() == 6);
  CHECK(pm.variance.size() == 0);
}
