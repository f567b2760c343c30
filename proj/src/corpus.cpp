#include "loopchart/corpus.hpp"

#include <deque>
#include <map>
#include <random>
#include <set>

namespace loopchart {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

void validate(const CorpusConfig& config) {
  if (config.count < 1) throw PreconditionError("corpus count must be at least 1");
  if (config.max_depth < 1) throw PreconditionError("corpus max depth must be at least 1");
  if (config.alphabet_size < 1 || config.alphabet_size > 26) {
    throw PreconditionError("corpus alphabet size must be between 1 and 26");
  }
}

StarExpr random_action(std::mt19937_64& rng, int alphabet_size) {
  const char c = static_cast<char>('a' + draw(rng, static_cast<std::uint64_t>(alphabet_size)));
  return StarExpr::act(std::string(1, c));
}

StarExpr generate(std::mt19937_64& rng, int depth, int alphabet_size) {
  if (depth == 0) {
    switch (draw(rng, 4)) {
      case 0: return StarExpr::zero();
      case 1: return StarExpr::one();
      default: return random_action(rng, alphabet_size);
    }
  }
  switch (draw(rng, 6)) {
    case 0: return StarExpr::zero();
    case 1: return StarExpr::one();
    case 2: return random_action(rng, alphabet_size);
    case 3: {
      StarExpr l = generate(rng, depth - 1, alphabet_size);
      StarExpr r = generate(rng, depth - 1, alphabet_size);
      return StarExpr::plus(std::move(l), std::move(r));
    }
    case 4: {
      StarExpr l = generate(rng, depth - 1, alphabet_size);
      StarExpr r = generate(rng, depth - 1, alphabet_size);
      return StarExpr::dot(std::move(l), std::move(r));
    }
    default:
      return StarExpr::star(generate(rng, depth - 1, alphabet_size));
  }
}

}  // namespace

StarExpr random_expr(const CorpusConfig& config, std::size_t index) {
  validate(config);
  if (index >= config.count) throw PreconditionError("corpus index out of range");
  std::mt19937_64 rng(splitmix64(config.seed ^ (0x9E3779B97F4A7C15ULL * (index + 1))));
  return generate(rng, config.max_depth, config.alphabet_size);
}

bool normed_plus_by_path(const StackedExpr& e) {
  // Finite sub-LTS from e, explored through the raw step relation.
  std::set<StackedExpr> states{e};
  std::deque<StackedExpr> queue{e};
  while (!queue.empty()) {
    StackedExpr current = queue.front();
    queue.pop_front();
    for (const auto& [label, target] : stacked_steps(current)) {
      (void)label;
      if (states.insert(target).second) queue.push_back(target);
    }
  }

  auto eps_closure = [&](const StackedExpr& from) {
    std::set<StackedExpr> reach{from};
    std::deque<StackedExpr> work{from};
    while (!work.empty()) {
      StackedExpr current = work.front();
      work.pop_front();
      for (const auto& [label, target] : stacked_steps(current)) {
        if (label.is_empty_step() && reach.insert(target).second) work.push_back(target);
      }
    }
    return reach;
  };

  auto induced_termination = [&](const StackedExpr& from) {
    for (const auto& state : eps_closure(from)) {
      if (terminates(state)) return true;
    }
    return false;
  };

  auto induced_successors = [&](const StackedExpr& from) {
    std::set<StackedExpr> succ;
    for (const auto& state : eps_closure(from)) {
      for (const auto& [label, target] : stacked_steps(state)) {
        if (!label.is_empty_step()) succ.insert(target);
      }
    }
    return succ;
  };

  // Breadth-first over induced transitions, starting after the first one.
  std::set<StackedExpr> seen;
  std::deque<StackedExpr> work;
  for (const auto& next : induced_successors(e)) {
    if (seen.insert(next).second) work.push_back(next);
  }
  while (!work.empty()) {
    StackedExpr current = work.front();
    work.pop_front();
    if (induced_termination(current)) return true;
    for (const auto& next : induced_successors(current)) {
      if (seen.insert(next).second) work.push_back(next);
    }
  }
  return false;
}

namespace {

bool body_subgraph_acyclic(const Chart& labeled) {
  std::map<VertexId, std::size_t> indegree;
  for (const auto& [v, data] : labeled.vertices) {
    (void)data;
    indegree[v] = 0;
  }
  for (const auto& t : labeled.transitions) {
    if (t.marking == 0) ++indegree[t.dst];
  }
  std::deque<VertexId> ready;
  for (const auto& [v, d] : indegree) {
    if (d == 0) ready.push_back(v);
  }
  std::size_t processed = 0;
  while (!ready.empty()) {
    VertexId v = ready.front();
    ready.pop_front();
    ++processed;
    for (const auto& t : labeled.out(v)) {
      if (t.marking == 0 && --indegree[t.dst] == 0) ready.push_back(t.dst);
    }
  }
  return processed == labeled.vertices.size();
}

struct ItemChecker {
  const CorpusConfig& config;
  std::size_t index;
  const StarExpr& expr;
  CorpusReport& report;

  void fail(const std::string& what) {
    report.failures.push_back({index, render(expr), what});
  }

  void check_props() {
    const Chart plain = chart_of(expr, config.vertex_cap);
    const Chart one = onechart_of(expr, config.vertex_cap);
    const Chart labeled = labeled_onechart_of(expr, config.vertex_cap);

    if (!same_chart(erase_markings(labeled), one)) {
      fail("erasing markings does not reproduce the 1-chart");
      return;
    }
    if (!body_subgraph_acyclic(labeled)) {
      fail("body transitions admit a cycle");
    }
    for (const auto& t : labeled.transitions) {
      if (star_height(labeled.exprs.at(t.dst)) > star_height(labeled.exprs.at(t.src))) {
        fail("star height increases along " + t.src + " -" + t.label.text() + "-> " + t.dst);
        break;
      }
    }
    for (const auto& t : one.transitions) {
      if (t.label.is_empty_step()) continue;
      const StarExpr src = project(one.exprs.at(t.src));
      const StarExpr dst = project(one.exprs.at(t.dst));
      if (plain_steps(src).count({t.label, dst}) == 0) {
        fail("projected step missing: " + render(src) + " -" + t.label.text() + "-> " +
             render(dst));
        break;
      }
    }
    for (const auto& [v, vertex_expr] : one.exprs) {
      if (normed_plus(vertex_expr) != normed_plus_by_path(vertex_expr)) {
        fail("normed-plus characterizations disagree at '" + v + "'");
        break;
      }
    }

    const LLEEVerdict direct = verify_llee(labeled);
    const LLEEVerdict alt = verify_llee_alt(labeled);
    if (direct.pass != alt.pass) {
      fail("witness verifiers disagree on the generated labeling");
      return;
    }
    if (!direct.pass) {
      fail("generated labeling rejected: " + direct.condition + " : " + direct.detail);
      return;
    }

    check_mutations(labeled);
    check_strategy(labeled);
  }

  void check_mutations(const Chart& labeled) {
    if (labeled.transitions.empty()) return;
    std::vector<ChartTransition> transitions(labeled.transitions.begin(),
                                             labeled.transitions.end());
    Marking max_level = 1;
    for (const auto& t : transitions) max_level = std::max(max_level, t.marking);

    std::mt19937_64 rng(
        splitmix64(config.seed ^ 0xB5E51337u ^ (0xD1B54A32D192ED03ULL * (index + 1))));
    for (std::size_t k = 0; k < kMutationsPerChart; ++k) {
      const auto& victim = transitions[draw(rng, transitions.size())];
      const Marking fresh =
          victim.marking == 0
              ? static_cast<Marking>(1 + draw(rng, static_cast<std::uint64_t>(max_level) + 1))
              : 0;
      Chart mutated = labeled;
      mutated.transitions.erase(victim);
      mutated.transitions.insert({victim.src, victim.label, fresh, victim.dst});

      const LLEEVerdict direct = verify_llee(mutated);
      const LLEEVerdict alt = verify_llee_alt(mutated);
      ++report.mutation_total;
      if (direct.pass != alt.pass) {
        fail("witness verifiers disagree after mutating " + victim.src + " -" +
             victim.label.text() + "-> " + victim.dst + " to marking " + std::to_string(fresh));
        return;
      }
      if (!direct.pass) ++report.mutation_failed;
    }
  }

  void check_strategy(const Chart& labeled) {
    try {
      const EliminationRun run = llee_elimination_strategy(labeled);
      const Chart residual = replay_run(erase_markings(labeled), run);
      if (!reachable_part_acyclic(residual)) {
        fail("elimination strategy leaves an infinite path");
      }
    } catch (const PreconditionError& err) {
      fail(std::string("elimination strategy failed: ") + err.what());
    }
  }
};

}  // namespace

CorpusReport run_corpus_checks(const CorpusConfig& config, const CorpusCheckSelection& select) {
  validate(config);
  CorpusReport report;
  for (std::size_t index = 0; index < config.count; ++index) {
    const StarExpr expr = random_expr(config, index);
    ++report.checked;
    ItemChecker checker{config, index, expr, report};
    if (select.projection) {
      const CheckVerdict verdict = check_projection_bisimulation(expr, config.vertex_cap);
      if (!verdict.pass) checker.fail("projection check: " + verdict.detail);
    }
    if (select.witness) {
      const CheckVerdict verdict = check_labeled_witness(expr, config.vertex_cap);
      if (!verdict.pass) checker.fail("witness check: " + verdict.detail);
    }
    if (select.props) checker.check_props();
  }
  return report;
}

}  // namespace loopchart
