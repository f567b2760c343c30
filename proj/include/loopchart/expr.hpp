#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace loopchart {

/// Error raised on malformed expression text. `position()` is a byte offset
/// into the input at which the problem was detected.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

enum class ExprKind { Zero, One, Act, Plus, Dot, Star };

/// Immutable star expression tree. Values are cheap to copy (shared nodes).
/// Structural equality doubles as vertex identity in generated charts, so no
/// rewriting (not even 1.x -> x) is ever applied.
class StarExpr {
public:
  static StarExpr zero();
  static StarExpr one();
  static StarExpr act(std::string symbol);
  static StarExpr plus(StarExpr left, StarExpr right);
  static StarExpr dot(StarExpr left, StarExpr right);
  static StarExpr star(StarExpr body);

  ExprKind kind() const noexcept;
  const std::string& symbol() const;  // Act
  StarExpr left() const;              // Plus/Dot
  StarExpr right() const;             // Plus/Dot
  StarExpr body() const;              // Star

  friend std::strong_ordering operator<=>(const StarExpr& a, const StarExpr& b);
  friend bool operator==(const StarExpr& a, const StarExpr& b);

private:
  struct Node;
  explicit StarExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Action symbols are identifiers [a-zA-Z][a-zA-Z0-9_]*. "0" and "1" are
/// reserved literals and can never name an action.
bool is_valid_action_symbol(std::string_view symbol);

int star_height(const StarExpr& e);
std::size_t node_count(const StarExpr& e);

/// Canonical minimal-parentheses text. parse_star_expr(render(e)) == e.
std::string render(const StarExpr& e);

/// Concrete syntax: postfix `*` binds tightest, then `.`, then `+`; `+` and
/// `.` are left-associative; whitespace is ignored.
StarExpr parse_star_expr(std::string_view text);

enum class StackedKind { Lift, DotC, StarC };

/// Stacked star expression: a plain expression, a product with a plain right
/// factor, or a stacked product recording descent into an iteration body.
/// Lift is the only embedding of plain expressions: the `dot` constructor
/// folds a plain left operand back into a plain product, so every value has
/// exactly one representation and structural equality is vertex identity.
class StackedExpr {
public:
  static StackedExpr lift(StarExpr e);
  static StackedExpr dot(StackedExpr left, StarExpr factor);
  static StackedExpr star_prod(StackedExpr left, StarExpr iteration);  // iteration must be a Star

  StackedKind kind() const noexcept;
  const StarExpr& plain() const;   // Lift
  StackedExpr inner() const;       // DotC/StarC
  const StarExpr& factor() const;  // DotC/StarC

  bool is_plain() const noexcept { return kind() == StackedKind::Lift; }

  friend std::strong_ordering operator<=>(const StackedExpr& a, const StackedExpr& b);
  friend bool operator==(const StackedExpr& a, const StackedExpr& b);

private:
  struct Node;
  explicit StackedExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

int star_height(const StackedExpr& e);
std::size_t node_count(const StackedExpr& e);

/// Display form; the stacked product prints as ` * ` and is never parsed back.
std::string render(const StackedExpr& e);

/// Replaces every stacked product by plain concatenation.
StarExpr project(const StackedExpr& e);

}  // namespace loopchart
