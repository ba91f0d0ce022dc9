#include "bdm/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "bdm/error.hpp"
#include "bdm/fisher.hpp"
#include "bdm/inference.hpp"
#include "bdm/io.hpp"
#include "bdm/model.hpp"
#include "bdm/simharness.hpp"
#include "json.hpp"

namespace bdm::cli {

namespace {

using nlohmann::json;

std::vector<double> to_std(const VectorXd& v) { return {v.begin(), v.end()}; }

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ParseError("cannot write '" + path + "'");
  file << text;
}

void emit(const GlobalOptions& global, const std::string& text, std::ostream& out) {
  if (global.output.empty()) {
    out << text;
  } else {
    write_file(global.output, text);
  }
}

// Library errors are all usage problems at this level: bad input, bad flags,
// or data outside the declared family.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const SingularMatrixError& e) {
    err << "error: " << e.what() << '\n';
  }
  return kUsage;
}

json fit_report(const FitResult& fit, const BiDegree& g, const WeightFamily& family,
                const std::vector<std::pair<std::size_t, std::size_t>>& cis, double level) {
  json doc;
  doc["family"] = family.name();
  doc["n"] = g.n();
  doc["existence"] = existence_name(fit.existence);
  doc["feasibility"] = feasibility_name(fit.feasibility);
  doc["converged"] = fit.converged;
  doc["iterations"] = fit.iterations;
  doc["residual_norm_inf"] = fit.residual_norm_inf;
  doc["reason"] = fit.reason;
  doc["out_degrees"] = to_std(g.d);
  doc["in_degrees"] = to_std(g.b);
  doc["theta_hat"] = nullptr;
  doc["v_hat"] = nullptr;
  doc["intervals"] = json::array();
  if (fit.existence != Existence::Exists) return doc;

  doc["theta_hat"] = {{"orientation", family.orientation() == Orientation::Natural ? "natural"
                                                                                     : "negated"},
                      {"alpha", to_std(fit.theta_hat.alpha())},
                      {"beta", to_std(fit.theta_hat.beta())}};
  const AsymptoticCov cov = plug_in_variances(fit.theta_hat, family);
  const auto n = static_cast<Eigen::Index>(g.n());
  doc["v_hat"] = {{"out", to_std(cov.v_hat_diag.head(n))}, {"in", to_std(cov.v_hat_diag.tail(n))}};
  for (const auto& [i, j] : cis) {
    if (i < 1 || j < 1 || i > g.n() || j > g.n() || i == j) {
      throw ConfigError("--ci pair (" + std::to_string(i) + "," + std::to_string(j) +
                        ") is not valid for n = " + std::to_string(g.n()));
    }
    const Interval ci = ci_for_contrast(i - 1, j - 1, fit.theta_hat, cov, level);
    doc["intervals"].push_back({{"i", i},
                                {"j", j},
                                {"estimate", fit.theta_hat.alpha()[static_cast<Eigen::Index>(i - 1)] -
                                                 fit.theta_hat.alpha()[static_cast<Eigen::Index>(j - 1)]},
                                {"lo", ci.lo},
                                {"hi", ci.hi},
                                {"level", level}});
  }
  return doc;
}

}  // namespace

int cmd_fit(const GlobalOptions& global, const FitOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream in = open_input(opts.input);
    const Graph graph = opts.dense ? read_dense_csv(in, global.family)
                                   : read_edge_list(in, global.family, opts.n);
    FitConfig cfg;
    cfg.step_mode = opts.step_mode;
    cfg.max_iter = opts.max_iter;
    cfg.validate();
    const double level = global.level.value_or(0.95);
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("--level must lie in (0, 1)");

    const BiDegree g = bi_degrees(graph);
    const FitResult fit = newton_fit(g, global.family, cfg);
    emit(global, fit_report(fit, g, global.family, opts.cis, level).dump(2) + "\n", out);
    switch (fit.existence) {
      case Existence::Exists:
        return static_cast<int>(kOk);
      case Existence::NonExistent:
        err << "MLE does not exist: " << fit.reason << '\n';
        return static_cast<int>(kNonExistent);
      case Existence::Undetermined:
        break;
    }
    err << "fit undetermined: " << fit.reason << '\n';
    return static_cast<int>(kUndetermined);
  });
}

int cmd_sample(const GlobalOptions& global, const SampleOptions& opts, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    ParamVector theta;
    if (!opts.theta_path.empty()) {
      std::ifstream in = open_input(opts.theta_path);
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::exception& e) {
        throw ParseError("'" + opts.theta_path + "': " + e.what());
      }
      theta = theta_from_json(doc, global.family);
      if (opts.n && *opts.n != theta.n()) {
        throw ConfigError("--n disagrees with the parameter file");
      }
    } else {
      if (!opts.n) throw ConfigError("sample needs --n or --theta");
      const double L = opts.L.value_or(l_value(opts.rule, *opts.n));
      theta = design_params({global.family, *opts.n, L});
    }
    const Graph graph = sample_graph(theta, global.family, global.seed.value_or(0));
    std::ostringstream edges;
    write_edge_list(edges, graph);
    emit(global, edges.str(), out);
    if (!global.output.empty()) {
      write_file(global.output + ".theta.json", theta_to_json(theta, global.family).dump(2) + "\n");
    }
    return static_cast<int>(kOk);
  });
}

int cmd_experiment(const GlobalOptions& global, const ExperimentOptions& opts, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream in = open_input(opts.config_path);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ParseError("'" + opts.config_path + "': " + e.what());
    }
    ExperimentConfig cfg = ExperimentConfig::from_json(doc);
    if (global.seed) cfg.base_seed = *global.seed;
    if (global.level) cfg.level = *global.level;
    if (opts.parallelism) cfg.parallelism = *opts.parallelism;
    cfg.validate();
    if (opts.qq_kind) {
      const auto [i, j] = opts.qq_pair;
      if (i < 1 || j < 1) throw ConfigError("--qq-pair is 1-based");
      emit(global, qq_export(cfg, parse_contrast_kind(*opts.qq_kind), {i - 1, j - 1}), out);
    } else {
      emit(global, rows_to_csv(run_experiment(cfg)), out);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_diagnose(const GlobalOptions& global, const DiagnoseOptions& opts, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    if (opts.n_values.empty()) throw ConfigError("diagnose needs at least one n");
    if (!(opts.c1 > 0.0)) throw ConfigError("--c1 must be positive");
    std::ostringstream csv;
    csv << "n,max_abs_err,bound_shape,fitted_c1,r,rho,contraction_ok\n";
    for (const std::size_t n : opts.n_values) {
      if (n < 3) throw ConfigError("diagnose needs n >= 3");
      if (n > kDenseGuard) throw ConfigError("n = " + std::to_string(n) + " exceeds the dense guard");
      const ParamVector truth = design_params({global.family, n, l_value(opts.rule, n)});
      const ApproxError ae = approx_error(fisher_info(truth, global.family));
      const BiDegree g = opts.sampled
                             ? bi_degrees(sample_graph(truth, global.family, global.seed.value_or(0)))
                             : expected_degrees(truth, global.family);
      const NewtonDiagnostics diag = newton_diagnostics(truth, g, global.family, opts.c1);
      csv << n << ',' << format_real(ae.max_abs_err) << ',' << format_real(ae.bound_shape) << ','
          << format_real(ae.max_abs_err / ae.bound_shape) << ',' << format_real(diag.r) << ','
          << format_real(diag.rho) << ',' << (diag.contraction_ok ? "true" : "false") << '\n';
    }
    emit(global, csv.str(), out);
    return static_cast<int>(kOk);
  });
}

}  // namespace bdm::cli
