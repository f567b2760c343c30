#include "loopchart/semantics.hpp"

#include <deque>
#include <stdexcept>

namespace loopchart {

StepLabel StepLabel::action(std::string symbol) {
  if (!is_valid_action_symbol(symbol)) {
    throw std::invalid_argument("invalid action symbol: '" + symbol + "'");
  }
  return StepLabel(std::move(symbol));
}

bool terminates(const StarExpr& e) {
  switch (e.kind()) {
    case ExprKind::Zero:
    case ExprKind::Act:
      return false;
    case ExprKind::One:
    case ExprKind::Star:
      return true;
    case ExprKind::Plus:
      return terminates(e.left()) || terminates(e.right());
    case ExprKind::Dot:
      return terminates(e.left()) && terminates(e.right());
  }
  return false;
}

bool terminates(const StackedExpr& e) {
  return e.is_plain() && terminates(e.plain());
}

std::set<std::pair<StepLabel, StarExpr>> plain_steps(const StarExpr& e) {
  std::set<std::pair<StepLabel, StarExpr>> out;
  switch (e.kind()) {
    case ExprKind::Zero:
    case ExprKind::One:
      break;
    case ExprKind::Act:
      out.emplace(StepLabel::action(e.symbol()), StarExpr::one());
      break;
    case ExprKind::Plus: {
      for (const auto& s : plain_steps(e.left())) out.insert(s);
      for (const auto& s : plain_steps(e.right())) out.insert(s);
      break;
    }
    case ExprKind::Dot: {
      for (const auto& [a, l] : plain_steps(e.left())) {
        out.emplace(a, StarExpr::dot(l, e.right()));
      }
      if (terminates(e.left())) {
        for (const auto& s : plain_steps(e.right())) out.insert(s);
      }
      break;
    }
    case ExprKind::Star: {
      for (const auto& [a, b] : plain_steps(e.body())) {
        out.emplace(a, StarExpr::dot(b, e));
      }
      break;
    }
  }
  return out;
}

namespace {

// Steps of a lifted plain expression under the stacked rule system. The
// results may be genuinely stacked (descending into an iteration introduces a
// stacked product), but the labels are always proper actions.
std::set<std::pair<StepLabel, StackedExpr>> lifted_steps(const StarExpr& e) {
  std::set<std::pair<StepLabel, StackedExpr>> out;
  switch (e.kind()) {
    case ExprKind::Zero:
    case ExprKind::One:
      break;
    case ExprKind::Act:
      out.emplace(StepLabel::action(e.symbol()), StackedExpr::lift(StarExpr::one()));
      break;
    case ExprKind::Plus: {
      for (const auto& s : lifted_steps(e.left())) out.insert(s);
      for (const auto& s : lifted_steps(e.right())) out.insert(s);
      break;
    }
    case ExprKind::Dot: {
      for (const auto& [a, l] : lifted_steps(e.left())) {
        out.emplace(a, StackedExpr::dot(l, e.right()));
      }
      if (terminates(e.left())) {
        for (const auto& s : lifted_steps(e.right())) out.insert(s);
      }
      break;
    }
    case ExprKind::Star: {
      for (const auto& [a, b] : lifted_steps(e.body())) {
        out.emplace(a, StackedExpr::star_prod(b, e));
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::set<std::pair<StepLabel, StackedExpr>> stacked_steps(const StackedExpr& e) {
  switch (e.kind()) {
    case StackedKind::Lift:
      return lifted_steps(e.plain());
    case StackedKind::DotC: {
      std::set<std::pair<StepLabel, StackedExpr>> out;
      for (const auto& [l, inner] : stacked_steps(e.inner())) {
        out.emplace(l, StackedExpr::dot(inner, e.factor()));
      }
      return out;
    }
    case StackedKind::StarC: {
      std::set<std::pair<StepLabel, StackedExpr>> out;
      for (const auto& [l, inner] : stacked_steps(e.inner())) {
        out.emplace(l, StackedExpr::star_prod(inner, e.factor()));
      }
      if (terminates(e.inner())) {
        out.emplace(StepLabel::empty_step(), StackedExpr::lift(e.factor()));
      }
      return out;
    }
  }
  return {};
}

namespace {

std::set<MarkedStep> lifted_marked_steps(const StarExpr& e) {
  std::set<MarkedStep> out;
  switch (e.kind()) {
    case ExprKind::Zero:
    case ExprKind::One:
      break;
    case ExprKind::Act:
      out.insert({StepLabel::action(e.symbol()), 0, StackedExpr::lift(StarExpr::one())});
      break;
    case ExprKind::Plus: {
      // a step through a sum is never an entry
      for (const auto& s : lifted_marked_steps(e.left())) out.insert({s.label, 0, s.target});
      for (const auto& s : lifted_marked_steps(e.right())) out.insert({s.label, 0, s.target});
      break;
    }
    case ExprKind::Dot: {
      for (const auto& s : lifted_marked_steps(e.left())) {
        out.insert({s.label, s.marking, StackedExpr::dot(s.target, e.right())});
      }
      if (terminates(e.left())) {
        for (const auto& s : lifted_marked_steps(e.right())) out.insert({s.label, 0, s.target});
      }
      break;
    }
    case ExprKind::Star: {
      // Only an iteration whose body can return creates a loop entry; the
      // level is the star height of the iteration itself.
      const Marking level = normed_plus(StackedExpr::lift(e.body())) ? star_height(e) : 0;
      for (const auto& s : lifted_marked_steps(e.body())) {
        out.insert({s.label, level, StackedExpr::star_prod(s.target, e)});
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::set<MarkedStep> marked_steps(const StackedExpr& e) {
  switch (e.kind()) {
    case StackedKind::Lift:
      return lifted_marked_steps(e.plain());
    case StackedKind::DotC: {
      std::set<MarkedStep> out;
      for (const auto& s : marked_steps(e.inner())) {
        out.insert({s.label, s.marking, StackedExpr::dot(s.target, e.factor())});
      }
      return out;
    }
    case StackedKind::StarC: {
      std::set<MarkedStep> out;
      for (const auto& s : marked_steps(e.inner())) {
        out.insert({s.label, s.marking, StackedExpr::star_prod(s.target, e.factor())});
      }
      if (terminates(e.inner())) {
        out.insert({StepLabel::empty_step(), 0, StackedExpr::lift(e.factor())});
      }
      return out;
    }
  }
  return {};
}

bool normed(const StackedExpr& e) {
  // Breadth-first reachability of a terminating expression. The set of
  // iterated subderivatives of any expression is finite, so this terminates.
  std::set<StackedExpr> seen{e};
  std::deque<StackedExpr> queue{e};
  while (!queue.empty()) {
    StackedExpr current = queue.front();
    queue.pop_front();
    if (terminates(current)) return true;
    for (const auto& [label, target] : stacked_steps(current)) {
      (void)label;
      if (seen.insert(target).second) queue.push_back(target);
    }
  }
  return false;
}

bool normed_plus(const StackedExpr& e) {
  for (const auto& [label, target] : stacked_steps(e)) {
    (void)label;
    if (normed(target)) return true;
  }
  return false;
}

}  // namespace loopchart
