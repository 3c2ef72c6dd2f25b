#include "lqo/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "lqo/csv.hpp"

namespace lqo {

namespace {

void check_interval(double a, double b, Index n, const char* who) {
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) {
    throw std::invalid_argument(std::string(who) + ": need 0 < a < b");
  }
  if (n < 2) throw std::invalid_argument(std::string(who) + ": need at least 2 nodes");
}

}  // namespace

std::string to_string(RuleKind kind) {
  return kind == RuleKind::LogTrapezoid ? "trapezoid" : "clenshaw-curtis";
}

RuleKind parse_rule_kind(const std::string& name) {
  if (name == "trapezoid" || name == "log-trapezoid") return RuleKind::LogTrapezoid;
  if (name == "clenshaw-curtis" || name == "cc") return RuleKind::ClenshawCurtis;
  throw std::invalid_argument("unknown quadrature rule '" + name + "'");
}

QuadratureRule make_rule(Vector nodes, const Vector& weights, RuleKind kind) {
  if (nodes.size() != weights.size() || nodes.size() == 0) {
    throw std::invalid_argument("quadrature rule: nodes and weights must be nonempty, equal length");
  }
  for (Index i = 0; i < nodes.size(); ++i) {
    if (!(weights(i) > 0.0) || !std::isfinite(weights(i))) {
      throw std::invalid_argument("quadrature rule: weights must be positive");
    }
    if (!(nodes(i) > 0.0) || !std::isfinite(nodes(i)) || (i > 0 && !(nodes(i) > nodes(i - 1)))) {
      throw std::invalid_argument("quadrature rule: nodes must be positive and increasing");
    }
  }
  QuadratureRule rule;
  rule.nodes = std::move(nodes);
  rule.sqrt_weights = weights.cwiseSqrt();
  rule.weights = rule.sqrt_weights.cwiseProduct(rule.sqrt_weights);
  rule.kind = kind;
  return rule;
}

QuadratureRule log_trapezoid(double a, double b, Index n) {
  check_interval(a, b, n, "log_trapezoid");
  const double la = std::log10(a);
  const double lb = std::log10(b);
  Vector t(n);
  for (Index i = 0; i < n; ++i) {
    t(i) = std::pow(10.0, la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  t(0) = a;
  t(n - 1) = b;
  Vector w(n);
  w(0) = 0.5 * (t(1) - t(0));
  w(n - 1) = 0.5 * (t(n - 1) - t(n - 2));
  for (Index i = 1; i + 1 < n; ++i) w(i) = 0.5 * (t(i + 1) - t(i - 1));
  return make_rule(std::move(t), w, RuleKind::LogTrapezoid);
}

QuadratureRule clenshaw_curtis(double a, double b, Index n) {
  check_interval(a, b, n, "clenshaw_curtis");
  const Index deg = n - 1;
  const double pi = std::numbers::pi;
  // Weights for the extrema cos(pi k / deg), k = 0..deg, on [-1, 1].
  Vector cc(n);
  for (Index k = 0; k <= deg; ++k) {
    const double theta = pi * static_cast<double>(k) / static_cast<double>(deg);
    if (k == 0 || k == deg) {
      cc(k) = deg % 2 == 0 ? 1.0 / (static_cast<double>(deg * deg) - 1.0)
                           : 1.0 / static_cast<double>(deg * deg);
      continue;
    }
    double v = 1.0;
    const Index half = deg / 2;
    if (deg % 2 == 0) {
      for (Index j = 1; j < half; ++j) {
        v -= 2.0 * std::cos(2.0 * j * theta) / (4.0 * j * j - 1.0);
      }
      v -= std::cos(deg * theta) / (static_cast<double>(deg * deg) - 1.0);
    } else {
      for (Index j = 1; j <= half; ++j) {
        v -= 2.0 * std::cos(2.0 * j * theta) / (4.0 * j * j - 1.0);
      }
    }
    cc(k) = 2.0 * v / static_cast<double>(deg);
  }
  const double la = std::log(a);
  const double lb = std::log(b);
  const double mid = 0.5 * (la + lb);
  const double half_width = 0.5 * (lb - la);
  Vector t(n), w(n);
  // Index k runs from +1 down to -1, so reverse for increasing nodes.
  for (Index i = 0; i < n; ++i) {
    const Index k = deg - i;
    const double x = std::cos(pi * static_cast<double>(k) / static_cast<double>(deg));
    t(i) = std::exp(mid + half_width * x);
    w(i) = cc(k) * half_width * t(i);
  }
  t(0) = a;
  t(n - 1) = b;
  w(0) = cc(deg) * half_width * a;
  w(n - 1) = cc(0) * half_width * b;
  return make_rule(std::move(t), w, RuleKind::ClenshawCurtis);
}

QuadratureRule make_rule(RuleKind kind, double a, double b, Index n) {
  return kind == RuleKind::LogTrapezoid ? log_trapezoid(a, b, n) : clenshaw_curtis(a, b, n);
}

void write_rule_csv(std::ostream& out, const QuadratureRule& rule) {
  out << "node,weight,sqrt_weight\n";
  for (Index i = 0; i < rule.size(); ++i) {
    out << format_double(rule.nodes(i)) << ',' << format_double(rule.weights(i)) << ','
        << format_double(rule.sqrt_weights(i)) << '\n';
  }
}

}  // namespace lqo
