#include "bdm/inference.hpp"

#include <cmath>
#include <limits>

#include "bdm/error.hpp"
#include "bdm/fisher.hpp"

namespace bdm {

AsymptoticCov plug_in_variances(const ParamVector& theta_hat, const WeightFamily& family) {
  const StructuredFisher v = fisher_info(theta_hat, family);
  const auto n = static_cast<Eigen::Index>(v.n);
  AsymptoticCov cov;
  cov.v_hat_diag.resize(2 * n);
  cov.v_hat_diag.head(n) = v.row_sums;
  cov.v_hat_diag.tail(n) = v.col_sums;
  return cov;
}

ContrastKind parse_contrast_kind(std::string_view name) {
  if (name == "xi") return ContrastKind::Xi;
  if (name == "zeta") return ContrastKind::Zeta;
  if (name == "eta") return ContrastKind::Eta;
  throw ConfigError("unknown statistic '" + std::string(name) + "' (expected xi|zeta|eta)");
}

std::string contrast_kind_name(ContrastKind kind) {
  switch (kind) {
    case ContrastKind::Xi:
      return "xi";
    case ContrastKind::Zeta:
      return "zeta";
    case ContrastKind::Eta:
      return "eta";
  }
  return "xi";
}

namespace {

void check_index(std::size_t k, std::size_t limit, const char* what) {
  if (k >= limit) {
    throw DimensionError(std::string(what) + " index " + std::to_string(k + 1) +
                         " out of range 1.." + std::to_string(limit));
  }
}

}  // namespace

double contrast_stat(ContrastKind kind, std::size_t i, std::size_t j, const ParamVector& theta_hat,
                     const ParamVector& theta_true, const AsymptoticCov& cov) {
  const std::size_t n = theta_hat.n();
  if (theta_true.n() != n || cov.n() != n) throw DimensionError("contrast: dimension mismatch");
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  const VectorXd& a_hat = theta_hat.alpha();
  const VectorXd& b_hat = theta_hat.beta();
  const VectorXd& a_true = theta_true.alpha();
  const VectorXd& b_true = theta_true.beta();
  switch (kind) {
    case ContrastKind::Xi:
      check_index(i, n, "xi");
      check_index(j, n, "xi");
      return (a_hat[ii] - a_hat[jj] - (a_true[ii] - a_true[jj])) /
             std::sqrt(1.0 / cov.out_var(i) + 1.0 / cov.out_var(j));
    case ContrastKind::Zeta:
      check_index(i, n, "zeta");
      check_index(j, n - 1, "zeta");
      return (a_hat[ii] + b_hat[jj] - a_true[ii] - b_true[jj]) /
             std::sqrt(1.0 / cov.out_var(i) + 1.0 / cov.in_var(j));
    case ContrastKind::Eta:
      check_index(i, n - 1, "eta");
      check_index(j, n - 1, "eta");
      return (b_hat[ii] - b_hat[jj] - (b_true[ii] - b_true[jj])) /
             std::sqrt(1.0 / cov.in_var(i) + 1.0 / cov.in_var(j));
  }
  return 0.0;
}

Interval ci_for_contrast(std::size_t i, std::size_t j, const ParamVector& theta_hat,
                         const AsymptoticCov& cov, double level) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("confidence level must lie in (0, 1)");
  const std::size_t n = theta_hat.n();
  check_index(i, n, "ci");
  check_index(j, n, "ci");
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double half = z * std::sqrt(1.0 / cov.out_var(i) + 1.0 / cov.out_var(j));
  const double est =
      theta_hat.alpha()[static_cast<Eigen::Index>(i)] - theta_hat.alpha()[static_cast<Eigen::Index>(j)];
  return {est - half, est + half};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        ((((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
              45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
           133.14166789178437745) * r + 3.387132872796366608));
    const double den =
        ((((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
              21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
           42.313330701600911252) * r + 1.0));
    return q * num / den;
  }
  double r = q < 0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        ((((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
              1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
           4.6303378461565452959) * r + 1.42343711074968357734));
    const double den =
        ((((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
              0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
           2.05319162663775882187) * r + 1.0));
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        ((((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
              0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
           5.4637849111641143699) * r + 6.6579046435011037772));
    const double den =
        ((((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
              7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
           0.59983220655588793769) * r + 1.0));
    value = num / den;
  }
  return q < 0 ? -value : value;
}

}  // namespace bdm
