#include "bdm/simharness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bdm/error.hpp"

namespace bdm {

void ExperimentConfig::validate() const {
  if (n_values.empty()) throw ConfigError("experiment needs at least one n");
  if (L_rules.empty()) throw ConfigError("experiment needs at least one L rule");
  if (pairs.empty()) throw ConfigError("experiment needs at least one vertex pair");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0, 1)");
  fit.validate();
  for (const std::size_t n : n_values) {
    if (n < 3) throw ConfigError("every n must be >= 3");
    for (const auto& [i, j] : pairs) {
      if (i >= n || j >= n || i == j) {
        throw ConfigError("pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") is not valid for n = " + std::to_string(n));
      }
    }
  }
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  ExperimentConfig cfg;
  try {
    cfg.family = WeightFamily::parse(doc.at("family").get<std::string>());
    cfg.n_values = doc.at("n_values").get<std::vector<std::size_t>>();
    for (const auto& rule : doc.at("L_rules")) cfg.L_rules.push_back(parse_l_rule(rule.get<std::string>()));
    for (const auto& p : doc.at("pairs")) {
      const auto ij = p.get<std::vector<long long>>();
      if (ij.size() != 2 || ij[0] < 1 || ij[1] < 1) {
        throw ConfigError("pairs must be [i, j] with 1-based indices");
      }
      cfg.pairs.emplace_back(static_cast<std::size_t>(ij[0] - 1), static_cast<std::size_t>(ij[1] - 1));
    }
    cfg.replications = doc.value("replications", cfg.replications);
    cfg.level = doc.value("level", cfg.level);
    cfg.base_seed = doc.value("base_seed", cfg.base_seed);
    cfg.parallelism = doc.value("parallelism", cfg.parallelism);
    if (doc.contains("step_mode")) {
      const auto mode = doc.at("step_mode").get<std::string>();
      if (mode == "exact") {
        cfg.fit.step_mode = StepMode::ExactSolve;
      } else if (mode == "sapprox") {
        cfg.fit.step_mode = StepMode::SApproxStep;
      } else {
        throw ConfigError("step_mode must be exact|sapprox");
      }
    }
    if (doc.contains("max_iter")) cfg.fit.max_iter = doc.at("max_iter").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json doc;
  doc["family"] = family.name();
  doc["n_values"] = n_values;
  auto& rules = doc["L_rules"] = nlohmann::json::array();
  for (const LRule r : L_rules) rules.push_back(l_rule_name(r));
  auto& ps = doc["pairs"] = nlohmann::json::array();
  for (const auto& [i, j] : pairs) ps.push_back({i + 1, j + 1});
  doc["replications"] = replications;
  doc["level"] = level;
  doc["base_seed"] = base_seed;
  doc["parallelism"] = parallelism;
  doc["step_mode"] = fit.step_mode == StepMode::ExactSolve ? "exact" : "sapprox";
  doc["max_iter"] = fit.max_iter;
  return doc;
}

namespace {

struct Replicate {
  Existence existence = Existence::Undetermined;
  ParamVector theta_hat;
  AsymptoticCov cov;
};

// One cell's replications in replication order; replication r always uses
// replication_seed(base_seed, r), whichever thread runs it.
std::vector<Replicate> run_cell(const ExperimentConfig& cfg, const ParamVector& truth) {
  const int reps = cfg.replications;
  std::vector<Replicate> out(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(dynamic, 1) num_threads(cfg.parallelism)
  for (int r = 0; r < reps; ++r) {
    Replicate& slot = out[static_cast<std::size_t>(r)];
    try {
      const Graph graph = sample_graph(truth, cfg.family, replication_seed(cfg.base_seed, r));
      const FitResult fit = newton_fit(bi_degrees(graph), cfg.family, cfg.fit);
      slot.existence = fit.existence;
      if (fit.existence == Existence::Exists) {
        slot.cov = plug_in_variances(fit.theta_hat, cfg.family);
        slot.theta_hat = fit.theta_hat;
      }
    } catch (const std::exception&) {
      slot.existence = Existence::Undetermined;
    }
  }
  return out;
}

std::string format_fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ExperimentRow> rows;
  for (const std::size_t n : cfg.n_values) {
    for (const LRule rule : cfg.L_rules) {
      const ParamVector truth = design_params({cfg.family, n, l_value(rule, n)});
      const std::vector<Replicate> reps = run_cell(cfg, truth);
      for (const auto& [i, j] : cfg.pairs) {
        ExperimentRow row;
        row.family = cfg.family.name();
        row.n = n;
        row.L_rule = rule;
        row.i = i;
        row.j = j;
        const double target = truth.alpha()[static_cast<Eigen::Index>(i)] -
                              truth.alpha()[static_cast<Eigen::Index>(j)];
        int covered = 0;
        int missing = 0;
        double length_sum = 0.0;
        for (const Replicate& rep : reps) {
          if (rep.existence != Existence::Exists) {
            ++missing;
            if (rep.existence == Existence::Undetermined) ++row.undetermined;
            continue;
          }
          const Interval ci = ci_for_contrast(i, j, rep.theta_hat, rep.cov, cfg.level);
          covered += ci.contains(target) ? 1 : 0;
          length_sum += ci.length();
          ++row.replications_used;
        }
        row.nonexist_pct = 100.0 * missing / cfg.replications;
        if (row.replications_used > 0) {
          row.coverage_pct = 100.0 * covered / row.replications_used;
          row.mean_ci_length = length_sum / row.replications_used;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "family,n,L_rule,i,j,coverage_pct,mean_ci_length,nonexist_pct,reps\n";
  for (const ExperimentRow& row : rows) {
    out << row.family << ',' << row.n << ',' << l_rule_name(row.L_rule) << ',' << row.i + 1 << ','
        << row.j + 1 << ',' << (row.coverage_pct ? format_fixed(*row.coverage_pct, 2) : "NA") << ','
        << (row.mean_ci_length ? format_fixed(*row.mean_ci_length, 4) : "NA") << ','
        << format_fixed(row.nonexist_pct, 2) << ',' << row.replications_used << '\n';
  }
  return out.str();
}

std::vector<double> collect_statistics(const ExperimentConfig& cfg, ContrastKind kind,
                                       std::pair<std::size_t, std::size_t> pair) {
  cfg.validate();
  if (cfg.n_values.size() != 1 || cfg.L_rules.size() != 1) {
    throw ConfigError("QQ export needs exactly one n and one L rule");
  }
  const std::size_t n = cfg.n_values.front();
  const ParamVector truth = design_params({cfg.family, n, l_value(cfg.L_rules.front(), n)});
  std::vector<double> stats;
  for (const Replicate& rep : run_cell(cfg, truth)) {
    if (rep.existence != Existence::Exists) continue;
    stats.push_back(contrast_stat(kind, pair.first, pair.second, rep.theta_hat, truth, rep.cov));
  }
  return stats;
}

std::vector<QQPoint> qq_table(std::vector<double> stats) {
  if (stats.size() < 10) {
    throw ConfigError("insufficient data for a QQ table: " + std::to_string(stats.size()) +
                      " existing fits, need at least 10");
  }
  std::sort(stats.begin(), stats.end());
  const double count = static_cast<double>(stats.size());
  std::vector<QQPoint> table;
  table.reserve(stats.size());
  for (std::size_t k = 0; k < stats.size(); ++k) {
    table.push_back({normal_quantile((static_cast<double>(k) + 0.5) / count), stats[k]});
  }
  return table;
}

std::string qq_to_csv(const std::vector<QQPoint>& table) {
  std::ostringstream out;
  out << "theoretical,empirical\n";
  char buf[96];
  for (const QQPoint& p : table) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.theoretical, p.empirical);
    out << buf;
  }
  return out.str();
}

std::string qq_export(const ExperimentConfig& cfg, ContrastKind kind,
                      std::pair<std::size_t, std::size_t> pair) {
  return qq_to_csv(qq_table(collect_statistics(cfg, kind, pair)));
}

double max_central_deviation(const std::vector<QQPoint>& table, double central) {
  const double count = static_cast<double>(table.size());
  const double lo = 0.5 * (1.0 - central);
  const double hi = 0.5 * (1.0 + central);
  double worst = 0.0;
  for (std::size_t k = 0; k < table.size(); ++k) {
    const double position = (static_cast<double>(k) + 0.5) / count;
    if (position < lo || position > hi) continue;
    worst = std::max(worst, std::abs(table[k].empirical - table[k].theoretical));
  }
  return worst;
}

double ks_statistic_normal(std::vector<double> stats) {
  std::sort(stats.begin(), stats.end());
  const double count = static_cast<double>(stats.size());
  double d = 0.0;
  for (std::size_t k = 0; k < stats.size(); ++k) {
    const double f = normal_cdf(stats[k]);
    d = std::max({d, (static_cast<double>(k) + 1.0) / count - f, f - static_cast<double>(k) / count});
  }
  return d;
}

}  // namespace bdm
