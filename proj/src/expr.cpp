#include "loopchart/expr.hpp"

#include <algorithm>
#include <cctype>
#include <utility>
#include <vector>

namespace loopchart {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
      position_(position) {}

struct StarExpr::Node {
  ExprKind kind;
  std::string symbol;                      // Act
  std::shared_ptr<const Node> left;        // Plus/Dot/Star
  std::shared_ptr<const Node> right;       // Plus/Dot
};

bool is_valid_action_symbol(std::string_view symbol) {
  if (symbol.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(symbol[0]))) return false;
  for (char c : symbol) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

StarExpr StarExpr::zero() {
  // the leaf literals are shared singletons
  static const auto node =
      std::make_shared<const Node>(Node{ExprKind::Zero, "", nullptr, nullptr});
  return StarExpr(node);
}

StarExpr StarExpr::one() {
  static const auto node = std::make_shared<const Node>(Node{ExprKind::One, "", nullptr, nullptr});
  return StarExpr(node);
}

StarExpr StarExpr::act(std::string symbol) {
  if (!is_valid_action_symbol(symbol)) {
    throw std::invalid_argument("invalid action symbol: '" + symbol + "'");
  }
  return StarExpr(std::make_shared<const Node>(Node{ExprKind::Act, std::move(symbol), nullptr, nullptr}));
}

StarExpr StarExpr::plus(StarExpr left, StarExpr right) {
  return StarExpr(std::make_shared<const Node>(Node{ExprKind::Plus, "", std::move(left.node_), std::move(right.node_)}));
}

StarExpr StarExpr::dot(StarExpr left, StarExpr right) {
  return StarExpr(std::make_shared<const Node>(Node{ExprKind::Dot, "", std::move(left.node_), std::move(right.node_)}));
}

StarExpr StarExpr::star(StarExpr body) {
  return StarExpr(std::make_shared<const Node>(Node{ExprKind::Star, "", std::move(body.node_), nullptr}));
}

ExprKind StarExpr::kind() const noexcept { return node_->kind; }
const std::string& StarExpr::symbol() const { return node_->symbol; }

StarExpr StarExpr::left() const { return StarExpr(node_->left); }
StarExpr StarExpr::right() const { return StarExpr(node_->right); }
StarExpr StarExpr::body() const { return StarExpr(node_->left); }

std::strong_ordering operator<=>(const StarExpr& a, const StarExpr& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = static_cast<int>(a.kind()) <=> static_cast<int>(b.kind()); c != 0) return c;
  switch (a.kind()) {
    case ExprKind::Zero:
    case ExprKind::One:
      return std::strong_ordering::equal;
    case ExprKind::Act:
      return a.symbol().compare(b.symbol()) <=> 0;
    case ExprKind::Star:
      return a.body() <=> b.body();
    case ExprKind::Plus:
    case ExprKind::Dot:
      if (auto c = a.left() <=> b.left(); c != 0) return c;
      return a.right() <=> b.right();
  }
  return std::strong_ordering::equal;
}
bool operator==(const StarExpr& a, const StarExpr& b) { return (a <=> b) == 0; }

int star_height(const StarExpr& e) {
  switch (e.kind()) {
    case ExprKind::Zero:
    case ExprKind::One:
    case ExprKind::Act:
      return 0;
    case ExprKind::Plus:
    case ExprKind::Dot:
      return std::max(star_height(e.left()), star_height(e.right()));
    case ExprKind::Star:
      return 1 + star_height(e.body());
  }
  return 0;
}

std::size_t node_count(const StarExpr& e) {
  switch (e.kind()) {
    case ExprKind::Zero:
    case ExprKind::One:
    case ExprKind::Act:
      return 1;
    case ExprKind::Plus:
    case ExprKind::Dot:
      return 1 + node_count(e.left()) + node_count(e.right());
    case ExprKind::Star:
      return 1 + node_count(e.body());
  }
  return 1;
}

namespace {

// Precedence levels for rendering: + is 1, . is 2, postfix * is 3, atoms 4.
int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Plus: return 1;
    case ExprKind::Dot: return 2;
    case ExprKind::Star: return 3;
    default: return 4;
  }
}

void render_into(const StarExpr& e, int min_prec, std::string& out) {
  const bool parens = precedence(e.kind()) < min_prec;
  if (parens) out += '(';
  switch (e.kind()) {
    case ExprKind::Zero: out += '0'; break;
    case ExprKind::One: out += '1'; break;
    case ExprKind::Act: out += e.symbol(); break;
    case ExprKind::Plus:
      render_into(e.left(), 1, out);
      out += '+';
      render_into(e.right(), 2, out);
      break;
    case ExprKind::Dot:
      render_into(e.left(), 2, out);
      out += '.';
      render_into(e.right(), 3, out);
      break;
    case ExprKind::Star:
      render_into(e.body(), 3, out);
      out += '*';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string render(const StarExpr& e) {
  std::string out;
  render_into(e, 0, out);
  return out;
}

namespace {

struct Token {
  enum class Type { Zero, One, Ident, Plus, Dot, Star, LParen, RParen, End };
  Type type;
  std::string text;
  std::size_t pos;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      current_ = {Token::Type::End, "", start};
      return;
    }
    const char c = text_[pos_];
    switch (c) {
      case '+': ++pos_; current_ = {Token::Type::Plus, "+", start}; return;
      case '.': ++pos_; current_ = {Token::Type::Dot, ".", start}; return;
      case '*': ++pos_; current_ = {Token::Type::Star, "*", start}; return;
      case '(': ++pos_; current_ = {Token::Type::LParen, "(", start}; return;
      case ')': ++pos_; current_ = {Token::Type::RParen, ")", start}; return;
      case '0': ++pos_; current_ = {Token::Type::Zero, "0", start}; return;
      case '1': ++pos_; current_ = {Token::Type::One, "1", start}; return;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_ + 1;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
        ++end;
      }
      current_ = {Token::Type::Ident, std::string(text_.substr(pos_, end - pos_)), start};
      pos_ = end;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError("actions must not start with a digit; '0' and '1' are reserved literals", start);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_{Token::Type::End, "", 0};
};

class Parser {
public:
  explicit Parser(std::string_view text) : lex_(text) {}

  StarExpr parse() {
    StarExpr e = parse_sum();
    const Token& t = lex_.peek();
    if (t.type != Token::Type::End) {
      throw ParseError("unexpected token '" + t.text + "'", t.pos);
    }
    return e;
  }

private:
  StarExpr parse_sum() {
    StarExpr e = parse_product();
    while (lex_.peek().type == Token::Type::Plus) {
      lex_.take();
      StarExpr rhs = parse_product();
      e = StarExpr::plus(std::move(e), std::move(rhs));
    }
    return e;
  }

  StarExpr parse_product() {
    StarExpr e = parse_starred();
    while (lex_.peek().type == Token::Type::Dot) {
      lex_.take();
      StarExpr rhs = parse_starred();
      e = StarExpr::dot(std::move(e), std::move(rhs));
    }
    return e;
  }

  StarExpr parse_starred() {
    StarExpr e = parse_atom();
    while (lex_.peek().type == Token::Type::Star) {
      lex_.take();
      e = StarExpr::star(std::move(e));
    }
    return e;
  }

  StarExpr parse_atom() {
    Token t = lex_.take();
    switch (t.type) {
      case Token::Type::Zero: return StarExpr::zero();
      case Token::Type::One: return StarExpr::one();
      case Token::Type::Ident: return StarExpr::act(std::move(t.text));
      case Token::Type::LParen: {
        StarExpr e = parse_sum();
        const Token& close = lex_.peek();
        if (close.type != Token::Type::RParen) {
          throw ParseError("expected ')'", close.pos);
        }
        lex_.take();
        return e;
      }
      case Token::Type::End:
        throw ParseError("unexpected end of input", t.pos);
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.pos);
    }
  }

  Lexer lex_;
};

}  // namespace

StarExpr parse_star_expr(std::string_view text) { return Parser(text).parse(); }

struct StackedExpr::Node {
  StackedKind kind;
  std::shared_ptr<const Node> inner;              // DotC/StarC
  std::shared_ptr<const StarExpr> plain_or_factor;  // Lift payload, or DotC/StarC right factor
};

StackedExpr StackedExpr::lift(StarExpr e) {
  return StackedExpr(std::make_shared<const Node>(
      Node{StackedKind::Lift, nullptr, std::make_shared<const StarExpr>(std::move(e))}));
}

StackedExpr StackedExpr::dot(StackedExpr left, StarExpr factor) {
  // A plain product stays plain: the spine only grows below a stacked product.
  if (left.is_plain()) {
    return lift(StarExpr::dot(left.plain(), std::move(factor)));
  }
  return StackedExpr(std::make_shared<const Node>(
      Node{StackedKind::DotC, std::move(left.node_), std::make_shared<const StarExpr>(std::move(factor))}));
}

StackedExpr StackedExpr::star_prod(StackedExpr left, StarExpr iteration) {
  if (iteration.kind() != ExprKind::Star) {
    throw std::invalid_argument("the right operand of a stacked product must be an iteration");
  }
  return StackedExpr(std::make_shared<const Node>(
      Node{StackedKind::StarC, std::move(left.node_), std::make_shared<const StarExpr>(std::move(iteration))}));
}

StackedKind StackedExpr::kind() const noexcept { return node_->kind; }

const StarExpr& StackedExpr::plain() const { return *node_->plain_or_factor; }

StackedExpr StackedExpr::inner() const { return StackedExpr(node_->inner); }

const StarExpr& StackedExpr::factor() const { return *node_->plain_or_factor; }

std::strong_ordering operator<=>(const StackedExpr& a, const StackedExpr& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = static_cast<int>(a.kind()) <=> static_cast<int>(b.kind()); c != 0) return c;
  if (a.kind() == StackedKind::Lift) return a.plain() <=> b.plain();
  if (auto c = a.inner() <=> b.inner(); c != 0) return c;
  return a.factor() <=> b.factor();
}
bool operator==(const StackedExpr& a, const StackedExpr& b) { return (a <=> b) == 0; }

int star_height(const StackedExpr& e) {
  if (e.is_plain()) return star_height(e.plain());
  return std::max(star_height(e.inner()), star_height(e.factor()));
}

std::size_t node_count(const StackedExpr& e) {
  if (e.is_plain()) return node_count(e.plain());
  return 1 + node_count(e.inner()) + node_count(e.factor());
}

std::string render(const StackedExpr& e) {
  switch (e.kind()) {
    case StackedKind::Lift:
      return render(e.plain());
    case StackedKind::DotC: {
      // The left operand of DotC is never a Lift; parenthesize a stacked
      // product so the infix ` * ` cannot be read as part of the product.
      std::string left = render(e.inner());
      if (e.inner().kind() == StackedKind::StarC) left = "(" + left + ")";
      std::string right;
      render_into(e.factor(), 3, right);
      return left + "." + right;
    }
    case StackedKind::StarC: {
      std::string left = render(e.inner());
      if (!e.inner().is_plain()) left = "(" + left + ")";
      return left + " * " + render(e.factor());
    }
  }
  return {};
}

StarExpr project(const StackedExpr& e) {
  switch (e.kind()) {
    case StackedKind::Lift:
      return e.plain();
    case StackedKind::DotC:
    case StackedKind::StarC:
      return StarExpr::dot(project(e.inner()), e.factor());
  }
  return StarExpr::zero();
}

}  // namespace loopchart
