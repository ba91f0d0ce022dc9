#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bdm/family.hpp"
#include "bdm/fisher.hpp"
#include "bdm/model.hpp"

namespace bdm {

enum class StepMode { ExactSolve, SApproxStep };

struct FitConfig {
  StepMode step_mode = StepMode::ExactSolve;
  /// Unset means 1e-10 * (n - 1).
  std::optional<double> tol_residual;
  double tol_step = 1e-10;
  int max_iter = 100;
  /// Cap on ||theta||_inf beyond which a stagnating fit is declared divergent.
  double divergence_bound = 30.0;
  /// SApproxStep only: finish with one exact Newton step.
  bool polish = true;

  double residual_tolerance(std::size_t n) const;
  /// Throws ConfigError.
  void validate() const;
};

enum class Existence { Exists, NonExistent, Undetermined };
std::string existence_name(Existence e);

/// Verdict of the interior-of-mean-space test on an observed bi-degree.
enum class Feasibility { Feasible, Boundary, Infeasible };
std::string feasibility_name(Feasibility f);

struct IterationRecord {
  double residual_inf;
  double step_inf;
};

struct FitResult {
  ParamVector theta_hat;
  bool converged = false;
  Existence existence = Existence::Undetermined;
  Feasibility feasibility = Feasibility::Feasible;
  int iterations = 0;
  double residual_norm_inf = 0.0;
  std::vector<IterationRecord> trace;
  std::string reason;
};

/// Decides whether g lies in the interior of the mean parameter space.
/// Cheap screens (zero or saturated degrees) run first, then a transportation
/// max-flow asks whether some edge-mean matrix strictly inside the support
/// box reproduces g. For integer-valued g and integer support the flow test
/// is exact; for real-valued g it uses a relative slack and is a screen.
Feasibility existence_check(const BiDegree& g, const WeightFamily& family);

/// Moment-matched warm start.
ParamVector default_start(const BiDegree& g, const WeightFamily& family);

/// Newton-Raphson on F(theta) = 0.
FitResult newton_fit(const BiDegree& g, const WeightFamily& family, const ParamVector& theta0,
                     const FitConfig& cfg = {});
/// Same, starting from default_start(g, family).
FitResult newton_fit(const BiDegree& g, const WeightFamily& family, const FitConfig& cfg = {});

struct NewtonDiagnostics {
  double r = 0.0;    // ||F'(theta0)^{-1} F(theta0)||_inf
  double rho = 0.0;  // c1 (2n-1) M^2 K1 / (2 m^3 n^2) + K2 / ((n-1) m)
  double K1 = 0.0;
  double K2 = 0.0;
  double m = 0.0;
  double M = 0.0;
  double c1 = 1.0;
  bool contraction_ok = false;
  std::string reason;  // empty, or why the constants are unavailable
};

NewtonDiagnostics newton_diagnostics(const ParamVector& theta0, const BiDegree& g,
                                     const WeightFamily& family, double c1 = 1.0);

}  // namespace bdm
