#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "loopchart/corpus.hpp"
#include "loopchart/expr.hpp"

using namespace loopchart;

namespace {

StarExpr p(const std::string& text) { return parse_star_expr(text); }

}  // namespace

TEST_CASE("parsing precedence and literals") {
  const StarExpr e = p("(a*.b*)*");
  REQUIRE(e.kind() == ExprKind::Star);
  const StarExpr body = e.body();
  REQUIRE(body.kind() == ExprKind::Dot);
  CHECK(body.left() == StarExpr::star(StarExpr::act("a")));
  CHECK(body.right() == StarExpr::star(StarExpr::act("b")));

  CHECK(p("0") == StarExpr::zero());
  CHECK(p("1") == StarExpr::one());

  // product binds tighter than sum
  CHECK(p("a+b.c") == StarExpr::plus(StarExpr::act("a"),
                                     StarExpr::dot(StarExpr::act("b"), StarExpr::act("c"))));

  // left associativity
  CHECK(p("a+b+c") == p("(a+b)+c"));
  CHECK(p("a.b.c") == p("(a.b).c"));
  CHECK(p("a+(b+c)") != p("a+b+c"));

  // postfix star stacks
  CHECK(p("a**") == StarExpr::star(StarExpr::star(StarExpr::act("a"))));

  // identifiers may carry digits and underscores after the first letter
  CHECK(p("a1.b_2") == StarExpr::dot(StarExpr::act("a1"), StarExpr::act("b_2")));

  CHECK(p(" a + 1 ") == StarExpr::plus(StarExpr::act("a"), StarExpr::one()));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(p(""), ParseError);
  CHECK_THROWS_AS(p("a+"), ParseError);
  CHECK_THROWS_AS(p("(a"), ParseError);
  CHECK_THROWS_AS(p("a)"), ParseError);
  CHECK_THROWS_AS(p("a b"), ParseError);
  CHECK_THROWS_AS(p("*a"), ParseError);
  CHECK_THROWS_AS(p("2a"), ParseError);
  CHECK_THROWS_AS(p("a$b"), ParseError);
  try {
    p("a+%");
    FAIL("expected a parse error");
  } catch (const ParseError& err) {
    CHECK(err.position() == 2);
  }
}

TEST_CASE("action symbols exclude the reserved literals") {
  CHECK_THROWS_AS(StarExpr::act("0"), std::invalid_argument);
  CHECK_THROWS_AS(StarExpr::act("1"), std::invalid_argument);
  CHECK_THROWS_AS(StarExpr::act(""), std::invalid_argument);
  CHECK_THROWS_AS(StarExpr::act("_a"), std::invalid_argument);
  CHECK(is_valid_action_symbol("a1_b"));
  CHECK_FALSE(is_valid_action_symbol("1a"));
}

TEST_CASE("rendering uses minimal parentheses") {
  CHECK(render(StarExpr::star(StarExpr::dot(StarExpr::star(StarExpr::act("a")),
                                            StarExpr::star(StarExpr::act("b"))))) == "(a*.b*)*");
  CHECK(render(p("a+(b+c)")) == "a+(b+c)");
  CHECK(render(p("(a+b)+c")) == "a+b+c");
  CHECK(render(p("a.(b.c)")) == "a.(b.c)");
  CHECK(render(p("(a+b).c")) == "(a+b).c");
  CHECK(render(p("a**")) == "a**");
  CHECK(render(p("((1.a).(c.a+a.(b+b.a))*).0")) == "1.a.(c.a+a.(b+b.a))*.0");
}

TEST_CASE("stacked rendering") {
  const StarExpr a_star = StarExpr::star(StarExpr::act("a"));
  const StarExpr b_star = StarExpr::star(StarExpr::act("b"));
  const StarExpr e = p("(a*.b*)*");

  CHECK(render(StackedExpr::star_prod(StackedExpr::lift(StarExpr::one()), b_star)) == "1 * b*");

  const StackedExpr one_astar = StackedExpr::star_prod(StackedExpr::lift(StarExpr::one()), a_star);
  const StackedExpr left = StackedExpr::dot(one_astar, b_star);
  CHECK(render(left) == "(1 * a*).b*");
  CHECK(render(StackedExpr::star_prod(left, e)) == "((1 * a*).b*) * (a*.b*)*");
}

TEST_CASE("stacked products require an iteration on the right") {
  CHECK_THROWS_AS(StackedExpr::star_prod(StackedExpr::lift(StarExpr::one()), StarExpr::act("b")),
                  std::invalid_argument);
}

TEST_CASE("a plain product folds back into a lifted expression") {
  const StackedExpr folded = StackedExpr::dot(StackedExpr::lift(StarExpr::act("a")),
                                              StarExpr::act("b"));
  CHECK(folded.is_plain());
  CHECK(folded.plain() == p("a.b"));
}

TEST_CASE("star height") {
  CHECK(star_height(p("0")) == 0);
  CHECK(star_height(p("1")) == 0);
  CHECK(star_height(p("a")) == 0);
  CHECK(star_height(p("(a*.b*)*")) == 2);

  // (1 * a*).b* as a stacked expression
  const StackedExpr left = StackedExpr::dot(
      StackedExpr::star_prod(StackedExpr::lift(StarExpr::one()), p("a*")), p("b*"));
  CHECK(star_height(left) == 1);
}

TEST_CASE("projection") {
  const StarExpr e = p("(a*.b*)*");
  CHECK(project(StackedExpr::lift(e)) == e);

  // (1 * b*) * (a*.b*)*  ->  (1.b*).(a*.b*)*
  const StackedExpr e2 = StackedExpr::star_prod(
      StackedExpr::star_prod(StackedExpr::lift(StarExpr::one()), p("b*")), e);
  CHECK(project(e2) == p("(1.b*).(a*.b*)*"));

  // ((1 * a*).b*) * (a*.b*)*  ->  ((1.a*).b*).(a*.b*)*
  const StackedExpr e1 = StackedExpr::star_prod(
      StackedExpr::dot(StackedExpr::star_prod(StackedExpr::lift(StarExpr::one()), p("a*")),
                       p("b*")),
      e);
  CHECK(project(e1) == p("((1.a*).b*).(a*.b*)*"));

  // projection preserves star height
  CHECK(star_height(project(e1)) == star_height(e1));
  CHECK(star_height(project(e2)) == star_height(e2));
}

TEST_CASE("round trip over a random corpus") {
  const CorpusConfig config{7, 300, 5, 3, kDefaultVertexCap};
  for (std::size_t i = 0; i < config.count; ++i) {
    const StarExpr e = random_expr(config, i);
    CAPTURE(render(e));
    CHECK(parse_star_expr(render(e)) == e);
  }
}

TEST_CASE("ordering is a strict total order") {
  const CorpusConfig config{11, 60, 4, 3, kDefaultVertexCap};
  std::vector<StarExpr> exprs;
  for (std::size_t i = 0; i < config.count; ++i) exprs.push_back(random_expr(config, i));

  for (const auto& a : exprs) {
    for (const auto& b : exprs) {
      const auto ab = a <=> b;
      const auto ba = b <=> a;
      CHECK((ab == 0) == (ba == 0));
      if (ab < 0) CHECK(ba > 0);
      if (ab == 0) CHECK(render(a) == render(b));
      for (const auto& c : exprs) {
        if (a <=> b < 0 && b <=> c < 0) CHECK(a <=> c < 0);
      }
    }
  }
}
