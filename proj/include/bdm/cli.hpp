#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdm/family.hpp"
#include "bdm/sampler.hpp"
#include "bdm/solver.hpp"

namespace bdm::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNonExistent = 2, kUndetermined = 3 };

struct GlobalOptions {
  WeightFamily family = WeightFamily::binary();
  std::optional<std::uint64_t> seed;
  std::optional<double> level;
  std::string output;  // empty: write to the output stream
};

struct FitOptions {
  std::string input;
  bool dense = false;  // input is an n x n CSV instead of an edge list
  std::optional<std::size_t> n;
  std::vector<std::pair<std::size_t, std::size_t>> cis;  // 1-based
  StepMode step_mode = StepMode::ExactSolve;
  int max_iter = 100;
};

struct SampleOptions {
  std::optional<std::size_t> n;
  LRule rule = LRule::Zero;
  std::optional<double> L;     // overrides rule
  std::string theta_path;      // explicit parameters instead of a design
};

struct ExperimentOptions {
  std::string config_path;
  std::optional<int> parallelism;
  /// When set, writes a QQ table of this contrast instead of the coverage CSV.
  std::optional<std::string> qq_kind;
  std::pair<std::size_t, std::size_t> qq_pair{1, 2};  // 1-based
};

struct DiagnoseOptions {
  std::vector<std::size_t> n_values;
  LRule rule = LRule::Zero;
  double c1 = 1.0;
  /// Use a sampled bi-degree instead of the noise-free expected one.
  bool sampled = false;
};

// Each command reports errors on err and returns an ExitCode.
int cmd_fit(const GlobalOptions& global, const FitOptions& opts, std::ostream& out, std::ostream& err);
/// Edge list to --output (or out) and, with --output, a sidecar
/// <output>.theta.json holding the generating parameters.
int cmd_sample(const GlobalOptions& global, const SampleOptions& opts, std::ostream& out,
               std::ostream& err);
int cmd_experiment(const GlobalOptions& global, const ExperimentOptions& opts, std::ostream& out,
                   std::ostream& err);
int cmd_diagnose(const GlobalOptions& global, const DiagnoseOptions& opts, std::ostream& out,
                 std::ostream& err);

}  // namespace bdm::cli
