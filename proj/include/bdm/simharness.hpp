#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdm/family.hpp"
#include "bdm/inference.hpp"
#include "bdm/sampler.hpp"
#include "bdm/solver.hpp"
#include "json.hpp"

namespace bdm {

/// Replicated coverage study over a grid of (n, L) cells.
struct ExperimentConfig {
  WeightFamily family = WeightFamily::binary();
  std::vector<std::size_t> n_values;
  std::vector<LRule> L_rules;
  /// 0-based vertex pairs (i, j) for alpha_i - alpha_j.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  int replications = 1000;
  double level = 0.95;
  std::uint64_t base_seed = 0;
  int parallelism = 1;
  FitConfig fit;

  /// Throws ConfigError.
  void validate() const;
  /// JSON mirror; pairs are 1-based there.
  static ExperimentConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

struct ExperimentRow {
  std::string family;
  std::size_t n = 0;
  LRule L_rule = LRule::Zero;
  std::size_t i = 0;  // 0-based
  std::size_t j = 0;
  std::optional<double> coverage_pct;    // empty when no fit exists
  std::optional<double> mean_ci_length;  // empty when no fit exists
  double nonexist_pct = 0.0;
  int replications_used = 0;
  int undetermined = 0;  // fits neither converged nor proven divergent
};

/// Deterministic in cfg (including base_seed), independent of parallelism.
/// Coverage and length are averaged over replications whose MLE exists.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg);

/// Header family,n,L_rule,i,j,coverage_pct,mean_ci_length,nonexist_pct,reps;
/// 1-based pairs; "NA" where no fit exists.
std::string rows_to_csv(const std::vector<ExperimentRow>& rows);

/// Standardized statistics over existing fits of the single (n, L) cell in
/// cfg. Throws ConfigError unless cfg has exactly one n and one L rule.
std::vector<double> collect_statistics(const ExperimentConfig& cfg, ContrastKind kind,
                                       std::pair<std::size_t, std::size_t> pair);

struct QQPoint {
  double theoretical;
  double empirical;
};

/// Sorted sample against N(0,1) quantiles at (k - 0.5)/R. Throws
/// ConfigError with fewer than 10 values.
std::vector<QQPoint> qq_table(std::vector<double> stats);
std::string qq_to_csv(const std::vector<QQPoint>& table);
std::string qq_export(const ExperimentConfig& cfg, ContrastKind kind,
                      std::pair<std::size_t, std::size_t> pair);

/// max |empirical - theoretical| over points whose plotting position lies in
/// [(1-central)/2, (1+central)/2].
double max_central_deviation(const std::vector<QQPoint>& table, double central = 0.98);
/// Kolmogorov-Smirnov distance of the sample to N(0,1).
double ks_statistic_normal(std::vector<double> stats);

}  // namespace bdm
