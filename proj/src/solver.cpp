#include "bdm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdm/error.hpp"

namespace bdm {

using Index = Eigen::Index;

double FitConfig::residual_tolerance(std::size_t n) const {
  return tol_residual.value_or(1e-10 * static_cast<double>(n - 1));
}

void FitConfig::validate() const {
  if (tol_residual && !(*tol_residual > 0.0)) throw ConfigError("tol_residual must be > 0");
  if (!(tol_step > 0.0)) throw ConfigError("tol_step must be > 0");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(divergence_bound > 0.0)) throw ConfigError("divergence_bound must be > 0");
}

std::string existence_name(Existence e) {
  switch (e) {
    case Existence::Exists:
      return "exists";
    case Existence::NonExistent:
      return "nonexistent";
    case Existence::Undetermined:
      return "undetermined";
  }
  return "undetermined";
}

std::string feasibility_name(Feasibility f) {
  switch (f) {
    case Feasibility::Feasible:
      return "feasible";
    case Feasibility::Boundary:
      return "boundary";
    case Feasibility::Infeasible:
      return "infeasible";
  }
  return "infeasible";
}

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }

// Re-centres with the identifiability shift (alpha + c, beta - c) so that
// beta_n = 0; pair sums are unchanged.
ParamVector recentred(VectorXd alpha, VectorXd beta, Orientation orientation) {
  const double c = beta[beta.size() - 1];
  alpha.array() += c;
  beta.array() -= c;
  beta[beta.size() - 1] = 0.0;
  return ParamVector(std::move(alpha), std::move(beta), orientation);
}

// Largest lambda in (0, 1] keeping every pair sum >= half the current minimum.
double domain_damping(const ParamVector& theta, const VectorXd& step) {
  const Index n = static_cast<Index>(theta.n());
  const double floor = 0.5 * theta.min_pair_sum();
  double lambda = 1.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double ds = step[i] + (j < n - 1 ? step[n + j] : 0.0);
      if (ds < 0.0) {
        lambda = std::min(lambda, (theta.pair_sum(i, j) - floor) / -ds);
      }
    }
  }
  return lambda;
}

constexpr int kMaxHalvings = 40;
constexpr double kArmijo = 1e-4;

// S f with the component along u = (1, ..., 1, 0, ..., 0) halved. For every
// matrix in the class S V u = 2u exactly (u raises every pair sum alike), so
// the plain S step overshoots that mode by a factor of two and the iteration
// oscillates instead of converging. diag(V) is the matching left eigenvector
// of S V, giving an O(n) rank-one fix.
VectorXd corrected_s_step(const StructuredFisher& v, const VectorXd& f) {
  const Index n = static_cast<Index>(v.n);
  VectorXd step = s_apply(SApprox::from(v), f);
  const double along = (v.row_sums.dot(step.head(n)) + v.col_sums.head(n - 1).dot(step.tail(n - 1))) /
                       v.row_sums.sum();
  step.head(n).array() -= 0.5 * along;
  return step;
}

}  // namespace

ParamVector default_start(const BiDegree& g, const WeightFamily& family) {
  const Index n = static_cast<Index>(g.n());
  const double nm1 = static_cast<double>(n - 1);
  VectorXd alpha(n);
  VectorXd beta(n);
  switch (family.kind()) {
    case FamilyKind::Binary:
    case FamilyKind::FiniteDiscrete: {
      const double top = nm1 * family.upper_bound();
      const double lo = 1.0 / (2.0 * nm1);
      auto clamp = [&](double x) { return std::clamp(x / top, lo, 1.0 - lo); };
      // FiniteDiscrete: first-order match of its mean around s = 0.
      const double scale =
          family.kind() == FamilyKind::Binary ? 1.0 : -3.0 / (family.support_size() + 1.0);
      for (Index i = 0; i < n; ++i) {
        alpha[i] = scale * logit(clamp(g.d[i]));
        beta[i] = scale * logit(clamp(g.b[i]));
      }
      break;
    }
    case FamilyKind::Exponential:
    case FamilyKind::Geometric: {
      constexpr double eps = 0.5;
      for (Index i = 0; i < n; ++i) {
        alpha[i] = nm1 / (2.0 * std::max(g.d[i], eps));
        beta[i] = nm1 / (2.0 * std::max(g.b[i], eps));
      }
      break;
    }
  }
  return recentred(std::move(alpha), std::move(beta), family.orientation());
}

FitResult newton_fit(const BiDegree& g, const WeightFamily& family, const FitConfig& cfg) {
  return newton_fit(g, family, default_start(g, family), cfg);
}

FitResult newton_fit(const BiDegree& g, const WeightFamily& family, const ParamVector& theta0,
                     const FitConfig& cfg) {
  cfg.validate();
  require_compatible(theta0, family);
  if (g.n() != theta0.n() || g.b.size() != g.d.size()) {
    throw DimensionError("bi-degree and starting point dimensions differ");
  }
  const std::size_t n = g.n();
  const double tol = cfg.residual_tolerance(n);
  const double sign = family.orientation_sign();

  FitResult result;
  result.theta_hat = theta0;
  result.feasibility = existence_check(g, family);
  if (result.feasibility != Feasibility::Feasible) {
    result.existence = Existence::NonExistent;
    result.reason = "observed bi-degree is " + feasibility_name(result.feasibility) +
                    " to the mean parameter space";
    result.residual_norm_inf = moment_residual(theta0, g, family).lpNorm<Eigen::Infinity>();
    return result;
  }

  ParamVector theta = theta0;
  VectorXd residual = moment_residual(theta, g, family);
  double res = residual.lpNorm<Eigen::Infinity>();
  std::vector<double> history{res};

  auto newton_direction = [&](const ParamVector& at, const VectorXd& f, StepMode mode) {
    const StructuredFisher v = fisher_info(at, family);
    // F' = -sign V, so -F'^{-1} F = sign V^{-1} F.
    if (mode == StepMode::ExactSolve) return VectorXd(sign * structured_solve(v, f));
    return VectorXd(sign * corrected_s_step(v, f));
  };

  // Full (domain-damped) step when it lowers ||F||_inf; otherwise backtrack
  // on the concave log-likelihood along the direction.
  auto take_step = [&](const VectorXd& direction) {
    double lambda = 1.0;
    if (family.requires_positive_pair_sums()) lambda = domain_damping(theta, direction);
    const VectorXd x0 = theta.free();
    auto trial = [&](double t) {
      return ParamVector::from_free(x0 + t * direction, family.orientation());
    };
    ParamVector next = trial(lambda);
    VectorXd next_residual = moment_residual(next, g, family);
    const double slope = sign * residual.dot(direction);
    if (next_residual.lpNorm<Eigen::Infinity>() >= res && slope > 0.0) {
      const double ll0 = log_likelihood(theta, g, family);
      for (int halving = 0; halving < kMaxHalvings; ++halving) {
        if (log_likelihood(next, g, family) >= ll0 + kArmijo * lambda * slope) break;
        lambda *= 0.5;
        next = trial(lambda);
      }
      next_residual = moment_residual(next, g, family);
    }
    theta = std::move(next);
    residual = std::move(next_residual);
    res = residual.lpNorm<Eigen::Infinity>();
    return lambda * direction.lpNorm<Eigen::Infinity>();
  };

  bool diverged = false;
  bool failed = false;
  try {
    while (res > tol && result.iterations < cfg.max_iter) {
      const double step = take_step(newton_direction(theta, residual, cfg.step_mode));
      ++result.iterations;
      result.trace.push_back({res, step});
      history.push_back(res);
      const std::size_t k = history.size() - 1;
      if (theta.max_abs() > cfg.divergence_bound && k >= 10 &&
          res >= 0.99 * history[k - 10]) {
        diverged = true;
        result.reason = "parameters exceed the divergence bound while the residual stagnates";
        break;
      }
      if (step <= cfg.tol_step) break;
    }
    if (!diverged && cfg.step_mode == StepMode::SApproxStep && cfg.polish) {
      const double step = take_step(newton_direction(theta, residual, StepMode::ExactSolve));
      result.trace.push_back({res, step});
    }
  } catch (const DomainError& e) {
    failed = true;
    result.reason = std::string("iterate left the parameter domain: ") + e.what();
  } catch (const SingularMatrixError& e) {
    failed = true;
    result.reason = std::string("linear solve failed: ") + e.what();
  }

  result.theta_hat = theta;
  result.residual_norm_inf = res;
  result.converged = !diverged && !failed && res <= tol;
  if (result.converged) {
    result.existence = Existence::Exists;
  } else if (diverged || (failed && theta.max_abs() > cfg.divergence_bound)) {
    result.existence = Existence::NonExistent;
  } else {
    result.existence = Existence::Undetermined;
    if (result.reason.empty()) result.reason = "no convergence within the iteration budget";
  }
  return result;
}

NewtonDiagnostics newton_diagnostics(const ParamVector& theta0, const BiDegree& g,
                                     const WeightFamily& family, double c1) {
  require_compatible(theta0, family);
  NewtonDiagnostics out;
  const StructuredFisher v = fisher_info(theta0, family);
  const VectorXd f = moment_residual(theta0, g, family);
  out.r = structured_solve(v, f).lpNorm<Eigen::Infinity>();
  out.m = v.m;
  out.M = v.M;
  out.c1 = c1;

  const double n = static_cast<double>(theta0.n());
  const double inf = std::numeric_limits<double>::infinity();
  switch (family.kind()) {
    case FamilyKind::Binary:
      out.K1 = n - 1;
      out.K2 = (n - 1) / 2;
      break;
    case FamilyKind::Exponential:
    case FamilyKind::Geometric: {
      const double margin = theta0.min_pair_sum() - 4.0 * out.r;
      if (!(margin > 0.0)) {
        out.K1 = out.K2 = inf;
        out.reason = "q_n - 4r <= 0";
        break;
      }
      if (family.kind() == FamilyKind::Exponential) {
        out.K1 = 2 * (n - 1) / std::pow(margin, 3);
        out.K2 = (n - 1) / std::pow(margin, 3);
      } else {
        const double e = std::exp(margin);
        const double em1 = std::expm1(margin);
        out.K1 = 2 * (n - 1) * e * (1 + e) / (em1 * em1);
        out.K2 = (n - 1) * e * (1 + e) / (em1 * em1);
      }
      break;
    }
    case FamilyKind::FiniteDiscrete: {
      const double span = family.upper_bound();
      out.K1 = (n - 1) * span * span * span;
      out.K2 = out.K1 / 2;
      break;
    }
  }
  out.rho = c1 * (2 * n - 1) * out.M * out.M * out.K1 / (2 * std::pow(out.m, 3) * n * n) +
            out.K2 / ((n - 1) * out.m);
  out.contraction_ok = out.reason.empty() && out.rho * out.r < 0.5;
  return out;
}

}  // namespace bdm
