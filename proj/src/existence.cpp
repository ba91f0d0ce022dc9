#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "bdm/solver.hpp"

namespace bdm {

namespace {

// Dinic max-flow on real capacities.
class FlowNetwork {
 public:
  FlowNetwork(int nodes, double zero) : head_(nodes, -1), level_(nodes), next_(nodes), zero_(zero) {}

  void add_edge(int from, int to, double cap) {
    edges_.push_back({to, head_[from], cap});
    head_[from] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({from, head_[to], 0.0});
    head_[to] = static_cast<int>(edges_.size()) - 1;
  }

  double max_flow(int source, int sink) {
    double total = 0.0;
    while (build_levels(source, sink)) {
      next_ = head_;
      while (true) {
        const double pushed = augment(source, sink, std::numeric_limits<double>::infinity());
        if (pushed <= zero_) break;
        total += pushed;
      }
    }
    return total;
  }

 private:
  struct Edge {
    int to;
    int next;
    double cap;
  };

  bool build_levels(int source, int sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> frontier;
    level_[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int e = head_[u]; e != -1; e = edges_[e].next) {
        if (edges_[e].cap > zero_ && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[u] + 1;
          frontier.push(edges_[e].to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  double augment(int u, int sink, double limit) {
    if (u == sink) return limit;
    for (int& e = next_[u]; e != -1; e = edges_[e].next) {
      Edge& edge = edges_[e];
      if (edge.cap <= zero_ || level_[edge.to] != level_[u] + 1) continue;
      const double pushed = augment(edge.to, sink, std::min(limit, edge.cap));
      if (pushed > zero_) {
        edge.cap -= pushed;
        edges_[e ^ 1].cap += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  std::vector<Edge> edges_;
  std::vector<int> head_;
  std::vector<int> level_;
  std::vector<int> next_;
  double zero_;
};

// Is there x with slack <= x_ij <= upper - slack (i != j) whose row sums are d
// and column sums are b?
bool box_transport_feasible(const BiDegree& g, double upper, double slack, double tolerance) {
  const int n = static_cast<int>(g.n());
  const double nm1 = n - 1;
  double supply_total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double supply = g.d[i] - nm1 * slack;
    const double demand = g.b[i] - nm1 * slack;
    if (supply < -tolerance || demand < -tolerance) return false;
    supply_total += std::max(supply, 0.0);
  }
  const double cap = std::isfinite(upper) ? upper - 2.0 * slack : g.d.sum() + 1.0;
  if (cap < -tolerance) return false;

  const int source = 0;
  const int sink = 2 * n + 1;
  FlowNetwork net(2 * n + 2, tolerance * 1e-6);
  for (int i = 0; i < n; ++i) {
    net.add_edge(source, 1 + i, std::max(g.d[i] - nm1 * slack, 0.0));
    net.add_edge(1 + n + i, sink, std::max(g.b[i] - nm1 * slack, 0.0));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) net.add_edge(1 + i, 1 + n + j, std::max(cap, 0.0));
    }
  }
  return net.max_flow(source, sink) >= supply_total - tolerance;
}

bool all_integer(const VectorXd& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == std::floor(x); });
}

}  // namespace

Feasibility existence_check(const BiDegree& g, const WeightFamily& family) {
  const std::size_t n = g.n();
  if (n < 2 || static_cast<std::size_t>(g.b.size()) != n) return Feasibility::Infeasible;
  if (!g.d.allFinite() || !g.b.allFinite()) return Feasibility::Infeasible;
  if (g.d.minCoeff() < 0.0 || g.b.minCoeff() < 0.0) return Feasibility::Infeasible;

  const double upper = family.upper_bound();
  const double nm1 = static_cast<double>(n - 1);
  const double total = g.d.sum();
  const double scale = std::max(1.0, total);
  if (std::abs(total - g.b.sum()) > 1e-9 * static_cast<double>(n) * scale) {
    return Feasibility::Infeasible;
  }
  const bool integer_data = family.integer_support() && all_integer(g.d) && all_integer(g.b);
  const double saturated = nm1 * upper;
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    if (g.d[i] > saturated || g.b[i] > saturated) return Feasibility::Infeasible;
  }
  // Zero or saturated degrees pin a whole row or column to the support edge.
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    if (g.d[i] == 0.0 || g.b[i] == 0.0) return Feasibility::Boundary;
    if (std::isfinite(upper) && (g.d[i] == saturated || g.b[i] == saturated)) {
      return Feasibility::Boundary;
    }
  }
  if (n == 2) {
    // Two vertices give three free coordinates but only two edges; the mean
    // space has empty interior.
    return Feasibility::Boundary;
  }

  const double tolerance = 1e-12 * scale * static_cast<double>(n);
  if (!box_transport_feasible(g, upper, 0.0, tolerance)) return Feasibility::Infeasible;

  // Any cut constraint that is slack at zero has integer slack >= 1 and
  // coefficient <= 3n^2 in the box margin, so 1/(4n^2) separates exactly.
  const double nn = static_cast<double>(n);
  const double slack = integer_data ? 1.0 / (4.0 * nn * nn) : 1e-9 * total / (nn * nm1);
  const double slack_tol = integer_data ? std::max(tolerance, 0.25 * slack) : tolerance;
  if (!box_transport_feasible(g, upper, slack, slack_tol)) return Feasibility::Boundary;
  return Feasibility::Feasible;
}

}  // namespace bdm
