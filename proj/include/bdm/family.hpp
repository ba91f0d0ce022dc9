#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace bdm {

/// Whether stored parameters are the natural parameters theta or their
/// negation theta_bar = -theta (positive rates).
enum class Orientation { Natural, Negated };

enum class FamilyKind { Binary, Exponential, Geometric, FiniteDiscrete };

/// Edge-weight distribution. Every function below takes the pair sum
/// s = alpha_i + beta_j expressed in the family's stored orientation:
///   Binary          P(a=1) = e^s / (1 + e^s)            s in R
///   Exponential     density s e^{-s a} on [0, inf)      s > 0
///   Geometric       P(a) = (1 - e^{-s}) e^{-s a}        s > 0
///   FiniteDiscrete  P(a) proportional to e^{-s a}, a < q  s in R
class WeightFamily {
 public:
  static WeightFamily binary() { return WeightFamily(FamilyKind::Binary, 0); }
  static WeightFamily exponential() { return WeightFamily(FamilyKind::Exponential, 0); }
  static WeightFamily geometric() { return WeightFamily(FamilyKind::Geometric, 0); }
  /// Throws DomainError when q < 2.
  static WeightFamily finite_discrete(int q);
  /// Parses "binary", "exponential", "geometric" or "finite:q".
  static WeightFamily parse(std::string_view name);

  FamilyKind kind() const { return kind_; }
  int support_size() const { return q_; }
  Orientation orientation() const {
    return kind_ == FamilyKind::Binary ? Orientation::Natural : Orientation::Negated;
  }
  /// +1 when stored parameters are natural, -1 when negated.
  double orientation_sign() const { return orientation() == Orientation::Natural ? 1.0 : -1.0; }
  /// Exponential and Geometric need every pair sum strictly positive.
  bool requires_positive_pair_sums() const {
    return kind_ == FamilyKind::Exponential || kind_ == FamilyKind::Geometric;
  }
  /// Support bounded above (largest weight value), or infinity.
  double upper_bound() const;
  /// Support is a subset of the integers.
  bool integer_support() const { return kind_ != FamilyKind::Exponential; }
  bool in_domain(double s) const;
  /// Whether a weight value lies in the family's support.
  bool in_support(double a) const;

  std::string name() const;

  friend bool operator==(const WeightFamily&, const WeightFamily&) = default;

 private:
  WeightFamily(FamilyKind kind, int q) : kind_(kind), q_(q) {}
  FamilyKind kind_;
  int q_;
};

/// E[a] at pair sum s. Throws DomainError outside the domain.
double edge_mean(const WeightFamily& family, double s);
/// Var[a] at pair sum s; this is also the Fisher cross entry.
double edge_variance(const WeightFamily& family, double s);
/// Per-edge log-partition Z1 at the natural parameter implied by s.
double log_partition(const WeightFamily& family, double s);

/// Mean and variance evaluated together; cheaper for FiniteDiscrete.
struct EdgeMoments {
  double mean;
  double variance;
};
EdgeMoments edge_moments(const WeightFamily& family, double s);

/// Draws one edge weight by inversion from a uniform u in (0, 1].
double draw_edge(const WeightFamily& family, double s, double u);

}  // namespace bdm
