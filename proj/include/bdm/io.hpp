#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "bdm/family.hpp"
#include "bdm/model.hpp"
#include "json.hpp"

namespace bdm {

/// Edge list: one "src,dst[,weight]" row per edge (comma or tab separated),
/// 1-based ids, optional header row, '#' comments. Missing weight means 1,
/// missing pairs mean 0. n defaults to the largest id seen.
Graph read_edge_list(std::istream& in, const WeightFamily& family,
                     std::optional<std::size_t> n = std::nullopt);

/// n rows of n comma or tab separated weights.
Graph read_dense_csv(std::istream& in, const WeightFamily& family);

/// Nonzero edges only, header "src,dst,weight", 17 significant digits.
void write_edge_list(std::ostream& out, const Graph& graph);

/// Shortest decimal form that round-trips (17 significant digits).
std::string format_real(double x);

nlohmann::json theta_to_json(const ParamVector& theta, const WeightFamily& family);
/// Reads {"alpha": [...], "beta": [...]}; beta_n must be 0.
ParamVector theta_from_json(const nlohmann::json& doc, const WeightFamily& family);

}  // namespace bdm
