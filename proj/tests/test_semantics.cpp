#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <deque>

#include "loopchart/corpus.hpp"
#include "loopchart/semantics.hpp"

using namespace loopchart;

namespace {

StarExpr p(const std::string& text) { return parse_star_expr(text); }

StackedExpr lift(const std::string& text) { return StackedExpr::lift(p(text)); }

// All iterated subderivatives of a root, stacked rule system.
std::vector<StackedExpr> closure(const StackedExpr& root, std::size_t limit = 5000) {
  std::set<StackedExpr> seen{root};
  std::deque<StackedExpr> queue{root};
  std::vector<StackedExpr> order{root};
  while (!queue.empty()) {
    StackedExpr current = queue.front();
    queue.pop_front();
    for (const auto& [label, target] : stacked_steps(current)) {
      (void)label;
      if (seen.insert(target).second) {
        REQUIRE(seen.size() <= limit);
        queue.push_back(target);
        order.push_back(target);
      }
    }
  }
  return order;
}

const StarExpr kE = p("(a*.b*)*");

StackedExpr e_prime_1() {
  return StackedExpr::star_prod(
      StackedExpr::dot(StackedExpr::star_prod(StackedExpr::lift(StarExpr::one()), p("a*")),
                       p("b*")),
      kE);
}

StackedExpr e_prime_2() {
  return StackedExpr::star_prod(
      StackedExpr::star_prod(StackedExpr::lift(StarExpr::one()), p("b*")), kE);
}

}  // namespace

TEST_CASE("immediate termination, plain") {
  CHECK(terminates(p("1")));
  CHECK_FALSE(terminates(p("a.b*")));
  CHECK(terminates(p("(a*.b*)*")));
  CHECK_FALSE(terminates(p("0")));
  CHECK(terminates(p("0+1")));
  CHECK_FALSE(terminates(p("0.1")));
}

TEST_CASE("immediate termination, stacked") {
  CHECK(terminates(lift("(a*.b*)*")));
  CHECK_FALSE(terminates(lift("0")));
  // a stacked product never permits immediate termination
  CHECK_FALSE(terminates(StackedExpr::star_prod(StackedExpr::lift(StarExpr::one()), p("b*"))));
  CHECK_FALSE(terminates(e_prime_2()));
}

TEST_CASE("plain steps") {
  CHECK(plain_steps(p("a")) ==
        std::set<std::pair<StepLabel, StarExpr>>{{StepLabel::action("a"), StarExpr::one()}});
  CHECK(plain_steps(p("0")).empty());
  CHECK(plain_steps(p("1")).empty());

  const auto steps = plain_steps(kE);
  CHECK(steps == std::set<std::pair<StepLabel, StarExpr>>{
                     {StepLabel::action("a"), p("((1.a*).b*).(a*.b*)*")},
                     {StepLabel::action("b"), p("(1.b*).(a*.b*)*")}});
}

TEST_CASE("duplicate derivations collapse") {
  // both summands step to 1 with the same action
  CHECK(plain_steps(p("a+a")).size() == 1);
}

TEST_CASE("stacked steps") {
  const auto root_steps = stacked_steps(lift("(a*.b*)*"));
  CHECK(root_steps == std::set<std::pair<StepLabel, StackedExpr>>{
                          {StepLabel::action("a"), e_prime_1()},
                          {StepLabel::action("b"), e_prime_2()}});

  // (1 * b*) * e  --1-->  b* * e
  const auto from_e2 = stacked_steps(e_prime_2());
  CHECK(from_e2 == std::set<std::pair<StepLabel, StackedExpr>>{
                       {StepLabel::empty_step(),
                        StackedExpr::star_prod(StackedExpr::lift(p("b*")), kE)}});

  CHECK(stacked_steps(lift("1")).empty());
}

TEST_CASE("marked steps") {
  const auto root_steps = marked_steps(lift("(a*.b*)*"));
  CHECK(root_steps == std::set<MarkedStep>{{StepLabel::action("a"), 2, e_prime_1()},
                                           {StepLabel::action("b"), 2, e_prime_2()}});

  const auto from_e2 = marked_steps(e_prime_2());
  CHECK(from_e2 == std::set<MarkedStep>{{StepLabel::empty_step(), 0,
                                         StackedExpr::star_prod(StackedExpr::lift(p("b*")), kE)}});

  CHECK(marked_steps(lift("0*")).empty());
  CHECK(stacked_steps(lift("0*")).empty());
}

TEST_CASE("an iteration with a dead body yields a body-marked step") {
  // the body of (a.0)* never reaches termination, so no loop entry arises
  const auto steps = marked_steps(lift("(a.0)*"));
  REQUIRE(steps.size() == 1);
  CHECK(steps.begin()->marking == 0);
}

TEST_CASE("normed") {
  CHECK(normed(lift("1")));
  CHECK_FALSE(normed(lift("0")));
  CHECK(normed(lift("a.b*")));
  CHECK_FALSE(normed(lift("a.0")));
}

TEST_CASE("normed plus") {
  CHECK_FALSE(normed_plus(lift("1")));
  CHECK(normed_plus(lift("a")));
  CHECK(normed_plus(lift("a*.b*")));
  CHECK_FALSE(normed_plus(lift("0")));
  CHECK_FALSE(normed_plus(lift("0*")));
}

TEST_CASE("step-relation invariants over a random sample") {
  const CorpusConfig config{5, 60, 4, 3, kDefaultVertexCap};
  for (std::size_t i = 0; i < config.count; ++i) {
    const StarExpr root = random_expr(config, i);
    CAPTURE(render(root));
    for (const auto& vertex : closure(StackedExpr::lift(root))) {
      CAPTURE(render(vertex));

      // erasing markings reproduces the unlabeled step relation
      std::set<std::pair<StepLabel, StackedExpr>> erased;
      for (const auto& step : marked_steps(vertex)) {
        erased.emplace(step.label, step.target);
        if (step.label.is_empty_step()) CHECK(step.marking == 0);
      }
      CHECK(erased == stacked_steps(vertex));

      for (const auto& [label, target] : stacked_steps(vertex)) {
        // empty steps strictly shrink the expression
        if (label.is_empty_step()) CHECK(node_count(target) < node_count(vertex));
        // no empty steps leave plain expressions
        if (vertex.is_plain()) CHECK_FALSE(label.is_empty_step());
      }

      if (terminates(vertex)) CHECK(normed(vertex));
      if (normed_plus(vertex)) CHECK(normed(vertex));
    }
  }
}
