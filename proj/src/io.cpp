#include "bdm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "bdm/error.hpp"

namespace bdm {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (const char c : line) {
    if (c == ',' || c == '\t') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(trim(current));
  return fields;
}

bool parse_double(const std::string& text, double& value) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end;
}

bool parse_id(const std::string& text, long long& value) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

Graph read_edge_list(std::istream& in, const WeightFamily& family, std::optional<std::size_t> n) {
  struct Edge {
    long long src, dst;
    double weight;
    std::size_t line;
  };
  std::vector<Edge> edges;
  std::map<std::pair<long long, long long>, std::size_t> seen;
  long long max_id = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const std::vector<std::string> fields = split_fields(body);
    long long src = 0;
    long long dst = 0;
    const bool ids_ok = fields.size() >= 2 && parse_id(fields[0], src) && parse_id(fields[1], dst);
    if (first_content) {
      first_content = false;
      if (!ids_ok) continue;  // header row
    }
    if (!ids_ok) parse_fail(line_no, "expected integer vertex ids");
    if (fields.size() > 3) parse_fail(line_no, "too many fields");
    double weight = 1.0;
    if (fields.size() == 3 && !parse_double(fields[2], weight)) {
      parse_fail(line_no, "cannot parse weight '" + fields[2] + "'");
    }
    if (src < 1 || dst < 1) parse_fail(line_no, "vertex ids are 1-based");
    if (src == dst) parse_fail(line_no, "self-loop at vertex " + std::to_string(src));
    if (!family.in_support(weight)) {
      std::ostringstream msg;
      msg << family.name() << ": edge (" << src << "," << dst << ") on line " << line_no
          << " has weight " << fields[2] << " outside the support";
      throw DomainError(msg.str());
    }
    const auto [it, inserted] = seen.emplace(std::make_pair(src, dst), line_no);
    if (!inserted) {
      parse_fail(line_no, "duplicate edge (" + std::to_string(src) + "," + std::to_string(dst) +
                              "), first on line " + std::to_string(it->second));
    }
    max_id = std::max({max_id, src, dst});
    edges.push_back({src, dst, weight, line_no});
  }
  const std::size_t count = n.value_or(static_cast<std::size_t>(max_id));
  if (count < 2) throw ParseError("edge list needs at least 2 vertices");
  if (static_cast<std::size_t>(max_id) > count) {
    throw ParseError("vertex id " + std::to_string(max_id) + " exceeds declared n = " +
                     std::to_string(count));
  }
  const auto size = static_cast<Eigen::Index>(count);
  MatrixXd weights = MatrixXd::Zero(size, size);
  for (const Edge& e : edges) weights(e.src - 1, e.dst - 1) = e.weight;
  return Graph(std::move(weights));
}

Graph read_dense_csv(std::istream& in, const WeightFamily& family) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::vector<double> row;
    for (const std::string& field : split_fields(body)) {
      double x = 0.0;
      if (!parse_double(field, x)) parse_fail(line_no, "cannot parse '" + field + "'");
      row.push_back(x);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      parse_fail(line_no, "row has " + std::to_string(row.size()) + " entries, expected " +
                              std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2 || rows.front().size() != rows.size()) {
    throw ParseError("dense matrix must be square with n >= 2");
  }
  const auto size = static_cast<Eigen::Index>(rows.size());
  MatrixXd weights(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) weights(i, j) = rows[i][j];
  }
  Graph graph(std::move(weights));
  graph.check_support(family);
  return graph;
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_edge_list(std::ostream& out, const Graph& graph) {
  out << "src,dst,weight\n";
  const auto n = static_cast<Eigen::Index>(graph.n());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = graph.weights()(i, j);
      if (i != j && w != 0.0) out << i + 1 << ',' << j + 1 << ',' << format_real(w) << '\n';
    }
  }
}

nlohmann::json theta_to_json(const ParamVector& theta, const WeightFamily& family) {
  nlohmann::json doc;
  doc["family"] = family.name();
  doc["orientation"] = theta.orientation() == Orientation::Natural ? "natural" : "negated";
  doc["n"] = theta.n();
  doc["alpha"] = std::vector<double>(theta.alpha().begin(), theta.alpha().end());
  doc["beta"] = std::vector<double>(theta.beta().begin(), theta.beta().end());
  return doc;
}

ParamVector theta_from_json(const nlohmann::json& doc, const WeightFamily& family) {
  std::vector<double> alpha;
  std::vector<double> beta;
  try {
    alpha = doc.at("alpha").get<std::vector<double>>();
    beta = doc.at("beta").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("parameter file: ") + e.what());
  }
  ParamVector theta(Eigen::Map<const VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size())),
                    Eigen::Map<const VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size())),
                    family.orientation());
  theta.check_domain(family);
  return theta;
}

}  // namespace bdm
