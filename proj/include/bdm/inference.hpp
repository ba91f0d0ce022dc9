#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "bdm/family.hpp"
#include "bdm/model.hpp"

namespace bdm {

/// Plug-in Fisher diagonals at the MLE. Entries 0..n-1 are v_ii for the
/// alphas, n..2n-2 for beta_1..beta_{n-1}, and 2n-1 holds v_{2n,2n}.
struct AsymptoticCov {
  VectorXd v_hat_diag;

  std::size_t n() const { return static_cast<std::size_t>(v_hat_diag.size() / 2); }
  double out_var(std::size_t i) const { return v_hat_diag[static_cast<Eigen::Index>(i)]; }
  double in_var(std::size_t j) const { return v_hat_diag[static_cast<Eigen::Index>(n() + j)]; }
};

AsymptoticCov plug_in_variances(const ParamVector& theta_hat, const WeightFamily& family);

/// xi: alpha_i - alpha_j; zeta: alpha_i + beta_j; eta: beta_i - beta_j.
enum class ContrastKind { Xi, Zeta, Eta };
ContrastKind parse_contrast_kind(std::string_view name);
std::string contrast_kind_name(ContrastKind kind);

/// Standardized contrast of estimate against truth (0-based indices). zeta
/// needs j < n-1, eta needs i, j < n-1; throws DimensionError otherwise.
double contrast_stat(ContrastKind kind, std::size_t i, std::size_t j, const ParamVector& theta_hat,
                     const ParamVector& theta_true, const AsymptoticCov& cov);

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// (alpha_i - alpha_j) +/- z_{(1+level)/2} sqrt(1/v_ii + 1/v_jj).
Interval ci_for_contrast(std::size_t i, std::size_t j, const ParamVector& theta_hat,
                         const AsymptoticCov& cov, double level);

/// Standard normal quantile (Wichura AS 241, relative error ~1e-16).
double normal_quantile(double p);
double normal_cdf(double x);

}  // namespace bdm
