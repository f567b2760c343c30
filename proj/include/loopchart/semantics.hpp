#pragma once

#include <compare>
#include <set>
#include <string>
#include <utility>

#include "loopchart/expr.hpp"

namespace loopchart {

/// Transition label of a 1-LTS: a proper action or the reserved empty step.
/// The empty step prints as the literal "1" and never equals a proper action
/// (action symbols cannot start with a digit).
class StepLabel {
public:
  static StepLabel empty_step() { return StepLabel("1"); }
  static StepLabel action(std::string symbol);

  bool is_empty_step() const noexcept { return text_ == "1"; }
  const std::string& text() const noexcept { return text_; }

  friend std::strong_ordering operator<=>(const StepLabel&, const StepLabel&) = default;

private:
  explicit StepLabel(std::string text) : text_(std::move(text)) {}
  std::string text_;
};

/// Marking label on a transition: 0 marks a body transition, n >= 1 marks a
/// loop-entry transition at loop level n.
using Marking = int;

/// Immediate termination of a plain star expression: 1 and every iteration
/// terminate, a sum terminates if either summand does, a product if both
/// factors do.
bool terminates(const StarExpr& e);

/// Immediate termination of a stacked star expression: only lifted plain
/// expressions can terminate; a stacked product or stacked spine never does.
bool terminates(const StackedExpr& e);

/// One-step derivatives of a plain star expression. Labels are always proper
/// actions. Duplicate derivations collapse (the LTS is a relation).
std::set<std::pair<StepLabel, StarExpr>> plain_steps(const StarExpr& e);

/// One-step subderivatives of a stacked star expression. Steps from lifted
/// plain expressions are always proper; empty steps arise only from a stacked
/// product whose left part is plain and terminating.
std::set<std::pair<StepLabel, StackedExpr>> stacked_steps(const StackedExpr& e);

struct MarkedStep {
  StepLabel label;
  Marking marking;
  StackedExpr target;

  friend std::strong_ordering operator<=>(const MarkedStep&, const MarkedStep&) = default;
};

/// Marking-labeled subderivatives. Erasing markings yields stacked_steps.
/// A step out of an iteration whose body can return to the iteration carries
/// the star height of the iteration as its loop level; every other rule
/// produces or propagates markings as fixed by the rule system: sums and
/// the exit of a terminating left factor reset to 0, contexts propagate, and
/// empty steps are always marked 0.
std::set<MarkedStep> marked_steps(const StackedExpr& e);

/// Termination is reachable by a finite (possibly empty) path of
/// stacked_steps transitions, empty steps included.
bool normed(const StackedExpr& e);

/// Some transition leads to a normed expression. On every expression that
/// occurs as a generated chart vertex this agrees with the positive-length
/// induced-path formulation (checked by the corpus suite).
bool normed_plus(const StackedExpr& e);

}  // namespace loopchart
