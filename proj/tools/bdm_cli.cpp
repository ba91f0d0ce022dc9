#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "bdm/cli.hpp"
#include "bdm/error.hpp"

namespace {

std::pair<std::size_t, std::size_t> parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw bdm::ConfigError("expected a pair i,j, got '" + text + "'");
  return {std::stoul(text.substr(0, comma)), std::stoul(text.substr(comma + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fit and simulate directed bi-degree random graph models"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string family_name = "binary";
  std::uint64_t seed = 0;
  double level = 0.95;
  std::string output;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
  auto* level_opt = app.add_option("--level", level, "Confidence level");
  app.add_option("--family", family_name, "binary|exponential|geometric|finite:q");
  app.add_option("--output", output, "Write here instead of stdout");

  bdm::cli::FitOptions fit;
  std::vector<std::string> ci_pairs;
  std::string step_mode = "exact";
  auto* fit_cmd = app.add_subcommand("fit", "Fit the model to an observed graph");
  fit_cmd->add_option("input", fit.input, "Edge list (src,dst[,weight]) or dense CSV")->required();
  fit_cmd->add_flag("--dense", fit.dense, "Input is an n x n matrix");
  fit_cmd->add_option("--n", fit.n, "Vertex count (default: largest id)");
  fit_cmd->add_option("--ci", ci_pairs, "Interval for alpha_i - alpha_j, as i,j (1-based)");
  fit_cmd->add_option("--step", step_mode, "exact|sapprox")
      ->check(CLI::IsMember({"exact", "sapprox"}));
  fit_cmd->add_option("--max-iter", fit.max_iter);

  bdm::cli::SampleOptions sample;
  std::string sample_rule = "zero";
  auto* sample_cmd = app.add_subcommand("sample", "Draw a graph from a design or parameter file");
  sample_cmd->add_option("--n", sample.n);
  sample_cmd->add_option("--L-rule", sample_rule, "zero|loglog|sqrtlog|log|sqrtn");
  sample_cmd->add_option("--L", sample.L, "Explicit ramp magnitude");
  sample_cmd->add_option("--theta", sample.theta_path, "Parameter JSON (alpha, beta)");

  bdm::cli::ExperimentOptions experiment;
  std::string qq_kind;
  std::string qq_pair = "1,2";
  auto* exp_cmd = app.add_subcommand("experiment", "Run a coverage study from a JSON config");
  exp_cmd->add_option("config", experiment.config_path)->required();
  exp_cmd->add_option("--parallelism", experiment.parallelism);
  auto* qq_opt = exp_cmd->add_option("--qq", qq_kind, "xi|zeta|eta: write a QQ table instead");
  exp_cmd->add_option("--qq-pair", qq_pair);

  bdm::cli::DiagnoseOptions diagnose;
  std::string diag_rule = "zero";
  auto* diag_cmd = app.add_subcommand("diagnose", "Fisher-approximation and Newton diagnostics");
  diag_cmd->add_option("--n", diagnose.n_values, "Vertex counts to sweep")->required();
  diag_cmd->add_option("--L-rule", diag_rule);
  diag_cmd->add_option("--c1", diagnose.c1);
  diag_cmd->add_flag("--sampled", diagnose.sampled, "Use a sampled bi-degree");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bdm::cli::kUsage;
  }

  bdm::cli::GlobalOptions global;
  try {
    global.family = bdm::WeightFamily::parse(family_name);
    if (seed_opt->count() > 0) global.seed = seed;
    if (level_opt->count() > 0) global.level = level;
    global.output = output;
    if (*fit_cmd) {
      for (const auto& p : ci_pairs) fit.cis.push_back(parse_pair(p));
      fit.step_mode = step_mode == "sapprox" ? bdm::StepMode::SApproxStep : bdm::StepMode::ExactSolve;
      return bdm::cli::cmd_fit(global, fit, std::cout, std::cerr);
    }
    if (*sample_cmd) {
      sample.rule = bdm::parse_l_rule(sample_rule);
      return bdm::cli::cmd_sample(global, sample, std::cout, std::cerr);
    }
    if (*exp_cmd) {
      if (qq_opt->count() > 0) experiment.qq_kind = qq_kind;
      experiment.qq_pair = parse_pair(qq_pair);
      return bdm::cli::cmd_experiment(global, experiment, std::cout, std::cerr);
    }
    diagnose.rule = bdm::parse_l_rule(diag_rule);
    return bdm::cli::cmd_diagnose(global, diagnose, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bdm::cli::kUsage;
  }
}
