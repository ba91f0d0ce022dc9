#include "bdm/family.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bdm/error.hpp"

namespace bdm {

namespace {

double sigmoid(double s) {
  if (s >= 0) {
    return 1.0 / (1.0 + std::exp(-s));
  }
  const double e = std::exp(s);
  return e / (1.0 + e);
}

// log(1 + e^s) without overflow.
double softplus(double s) {
  if (s > 0) {
    return s + std::log1p(std::exp(-s));
  }
  return std::log1p(std::exp(s));
}

[[noreturn]] void throw_domain(const WeightFamily& family, double s) {
  std::ostringstream msg;
  msg << family.name() << ": pair sum " << s << " outside the natural parameter space";
  throw DomainError(msg.str());
}

// Exact moments of the q-point pmf P(a) proportional to e^{-s a}, weights
// shifted so the largest one is 1.
EdgeMoments finite_moments(int q, double s) {
  const double anchor = s >= 0 ? 0.0 : static_cast<double>(q - 1);
  double total = 0.0;
  double first = 0.0;
  for (int a = 0; a < q; ++a) {
    const double w = std::exp(-s * (a - anchor));
    total += w;
    first += a * w;
  }
  const double mean = first / total;
  double second = 0.0;
  for (int a = 0; a < q; ++a) {
    const double w = std::exp(-s * (a - anchor));
    const double dev = a - mean;
    second += dev * dev * w;
  }
  return {mean, second / total};
}

}  // namespace

WeightFamily WeightFamily::finite_discrete(int q) {
  if (q < 2) {
    throw DomainError("finite-discrete family needs support size q >= 2, got " + std::to_string(q));
  }
  return WeightFamily(FamilyKind::FiniteDiscrete, q);
}

WeightFamily WeightFamily::parse(std::string_view name) {
  if (name == "binary") return binary();
  if (name == "exponential" || name == "continuous") return exponential();
  if (name == "geometric" || name == "discrete") return geometric();
  constexpr std::string_view prefix = "finite:";
  if (name.substr(0, prefix.size()) == prefix) {
    const std::string digits(name.substr(prefix.size()));
    std::size_t used = 0;
    int q = 0;
    try {
      q = std::stoi(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != digits.size()) {
      throw ConfigError("bad finite-discrete support size in '" + std::string(name) + "'");
    }
    return finite_discrete(q);
  }
  throw ConfigError("unknown weight family '" + std::string(name) +
                    "' (expected binary|exponential|geometric|finite:q)");
}

double WeightFamily::upper_bound() const {
  switch (kind_) {
    case FamilyKind::Binary:
      return 1.0;
    case FamilyKind::FiniteDiscrete:
      return static_cast<double>(q_ - 1);
    default:
      return std::numeric_limits<double>::infinity();
  }
}

bool WeightFamily::in_domain(double s) const {
  if (!std::isfinite(s)) return false;
  return !requires_positive_pair_sums() || s > 0.0;
}

bool WeightFamily::in_support(double a) const {
  if (!std::isfinite(a) || a < 0.0) return false;
  if (kind_ == FamilyKind::Exponential) return true;
  if (a != std::floor(a)) return false;
  return a <= upper_bound();
}

std::string WeightFamily::name() const {
  switch (kind_) {
    case FamilyKind::Binary:
      return "binary";
    case FamilyKind::Exponential:
      return "exponential";
    case FamilyKind::Geometric:
      return "geometric";
    case FamilyKind::FiniteDiscrete:
      return "finite:" + std::to_string(q_);
  }
  return "unknown";
}

EdgeMoments edge_moments(const WeightFamily& family, double s) {
  if (!family.in_domain(s)) throw_domain(family, s);
  switch (family.kind()) {
    case FamilyKind::Binary: {
      const double p = sigmoid(s);
      return {p, p * sigmoid(-s)};
    }
    case FamilyKind::Exponential: {
      const double mean = 1.0 / s;
      return {mean, mean * mean};
    }
    case FamilyKind::Geometric: {
      // 1/(e^s - 1) and e^s/(e^s - 1)^2 = 1/((e^s - 1)(1 - e^{-s})).
      const double up = std::expm1(s);
      const double down = -std::expm1(-s);
      return {1.0 / up, 1.0 / (up * down)};
    }
    case FamilyKind::FiniteDiscrete:
      return finite_moments(family.support_size(), s);
  }
  throw_domain(family, s);
}

double edge_mean(const WeightFamily& family, double s) { return edge_moments(family, s).mean; }

double edge_variance(const WeightFamily& family, double s) {
  return edge_moments(family, s).variance;
}

double log_partition(const WeightFamily& family, double s) {
  if (!family.in_domain(s)) throw_domain(family, s);
  switch (family.kind()) {
    case FamilyKind::Binary:
      return softplus(s);
    case FamilyKind::Exponential:
      return -std::log(s);
    case FamilyKind::Geometric:
      return -std::log(-std::expm1(-s));
    case FamilyKind::FiniteDiscrete: {
      const double q = family.support_size();
      if (s == 0.0) return std::log(q);
      // Z1(s) = Z1(-s) - (q-1)s by reversing the support, so only t > 0 is
      // evaluated: log1p(e^{-t}(1 - e^{-(q-1)t}) / (1 - e^{-t})) keeps full
      // relative accuracy when Z1 is tiny.
      const double t = std::abs(s);
      const double tail = std::exp(-t) * -std::expm1(-(q - 1) * t) / -std::expm1(-t);
      return std::log1p(tail) + (s < 0 ? -(q - 1) * s : 0.0);
    }
  }
  throw_domain(family, s);
}

double draw_edge(const WeightFamily& family, double s, double u) {
  switch (family.kind()) {
    case FamilyKind::Binary:
      return u <= sigmoid(s) ? 1.0 : 0.0;
    case FamilyKind::Exponential:
      return -std::log(u) / s;
    case FamilyKind::Geometric:
      return std::floor(-std::log(u) / s);
    case FamilyKind::FiniteDiscrete: {
      const int q = family.support_size();
      const double anchor = s >= 0 ? 0.0 : static_cast<double>(q - 1);
      double total = 0.0;
      for (int a = 0; a < q; ++a) total += std::exp(-s * (a - anchor));
      double cumulative = 0.0;
      for (int a = 0; a < q - 1; ++a) {
        cumulative += std::exp(-s * (a - anchor)) / total;
        if (u <= cumulative) return a;
      }
      return q - 1;
    }
  }
  throw_domain(family, s);
}

}  // namespace bdm
