#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "bdm/family.hpp"
#include "bdm/model.hpp"

namespace bdm {

/// Magnitude of the linear parameter ramp as a function of n.
enum class LRule { Zero, LogLog, SqrtLog, Log, SqrtN };

double l_value(LRule rule, std::size_t n);
std::string l_rule_name(LRule rule);
LRule parse_l_rule(std::string_view name);

/// Linear-ramp parameter design: alpha_{i+1} = offset + (n-1-i) L/(n-1),
/// beta = alpha with beta_n = 0.
struct SimDesign {
  WeightFamily family = WeightFamily::binary();
  std::size_t n = 2;
  double L = 0.0;

  /// Binary 0, Geometric and FiniteDiscrete 0.2, Exponential 1.0.
  double offset() const;
};

ParamVector design_params(const SimDesign& design);

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);
/// Seed of replication r: base_seed XOR mix64(r).
std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t r);

/// Uniform on (0, 1] from the top 53 bits of one mt19937_64 output.
double uniform_open_closed(std::mt19937_64& rng);

/// Draws all n(n-1) edges independently, row by row. Deterministic in
/// (theta, family, seed) across platforms.
Graph sample_graph(const ParamVector& theta, const WeightFamily& family, std::uint64_t seed);

}  // namespace bdm
