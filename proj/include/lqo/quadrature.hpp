#pragma once

#include <iosfwd>
#include <string>

#include "lqo/types.hpp"

namespace lqo {

enum class RuleKind { LogTrapezoid, ClenshawCurtis };

std::string to_string(RuleKind kind);
RuleKind parse_rule_kind(const std::string& name);  ///< "trapezoid" | "clenshaw-curtis"

/// Nodes and square-root weights on one axis (seconds or rad/s).
/// weights == sqrt_weights^2 entrywise, computed once from sqrt_weights.
struct QuadratureRule {
  Vector nodes;
  Vector sqrt_weights;
  Vector weights;
  RuleKind kind = RuleKind::LogTrapezoid;

  Index size() const { return nodes.size(); }
};

/// Builds a rule from explicit nodes and weights; validates ordering and positivity.
QuadratureRule make_rule(Vector nodes, const Vector& weights, RuleKind kind);

/// n logarithmically equispaced nodes on [a, b] with composite trapezoid
/// weights for the resulting nonuniform spacing.
QuadratureRule log_trapezoid(double a, double b, Index n);

/// Clenshaw-Curtis on [log a, log b], mapped back by t = exp(u); the weights
/// carry the Jacobian dt = t du.
QuadratureRule clenshaw_curtis(double a, double b, Index n);

QuadratureRule make_rule(RuleKind kind, double a, double b, Index n);

/// CSV with header node,weight,sqrt_weight; doubles in shortest round-trip form.
void write_rule_csv(std::ostream& out, const QuadratureRule& rule);

}  // namespace lqo
