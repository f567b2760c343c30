#include "loopchart/lee.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <map>

namespace loopchart {

std::string to_string(LoopCond c) {
  switch (c) {
    case LoopCond::L1: return "L1";
    case LoopCond::L2: return "L2";
    case LoopCond::L3: return "L3";
  }
  return "?";
}

namespace {

std::set<VertexId> reachable_from(const Chart& g, const VertexId& start) {
  std::set<VertexId> seen{start};
  std::deque<VertexId> queue{start};
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (const auto& t : g.out(v)) {
      if (seen.insert(t.dst).second) queue.push_back(t.dst);
    }
  }
  return seen;
}

// Cycle search over the subgraph spanned by `verts`, following transitions
// accepted by `edge_ok`. Returns the vertices of one cycle.
std::optional<std::vector<VertexId>> find_cycle(
    const Chart& g, const std::set<VertexId>& verts,
    const std::function<bool(const ChartTransition&)>& edge_ok) {
  enum class Color { White, Gray, Black };
  std::map<VertexId, Color> color;
  for (const auto& v : verts) color[v] = Color::White;

  std::vector<VertexId> path;
  std::function<std::optional<std::vector<VertexId>>(const VertexId&)> visit =
      [&](const VertexId& v) -> std::optional<std::vector<VertexId>> {
    color[v] = Color::Gray;
    path.push_back(v);
    for (const auto& t : g.out(v)) {
      if (!edge_ok(t) || verts.count(t.dst) == 0) continue;
      if (color[t.dst] == Color::Gray) {
        auto it = std::find(path.begin(), path.end(), t.dst);
        return std::vector<VertexId>(it, path.end());
      }
      if (color[t.dst] == Color::White) {
        if (auto cycle = visit(t.dst)) return cycle;
      }
    }
    path.pop_back();
    color[v] = Color::Black;
    return std::nullopt;
  };

  for (const auto& v : verts) {
    if (color[v] == Color::White) {
      if (auto cycle = visit(v)) return cycle;
    }
  }
  return std::nullopt;
}

bool edge_any(const ChartTransition&) { return true; }

}  // namespace

std::vector<LoopViolation> check_loop_chart(const Chart& g) {
  std::vector<LoopViolation> violations;
  const std::set<VertexId> reachable = reachable_from(g, g.start);

  // L1: an infinite path from the start exists iff a cycle is reachable.
  if (!find_cycle(g, reachable, edge_any)) {
    violations.push_back({LoopCond::L1, {g.start}});
  }

  // L2: no cycle among reachable vertices may avoid the start.
  std::set<VertexId> body = reachable;
  body.erase(g.start);
  if (auto cycle = find_cycle(g, body, edge_any)) {
    violations.push_back({LoopCond::L2, *cycle});
  }

  // L3: immediate termination only at the start.
  for (const auto& [v, data] : g.vertices) {
    if (data.terminating && v != g.start) {
      violations.push_back({LoopCond::L3, {v}});
      break;
    }
  }
  return violations;
}

Chart loop_subchart(const Chart& g, const VertexId& v, const std::set<ChartTransition>& entries) {
  if (entries.empty()) throw PreconditionError("entry set must be nonempty");
  for (const auto& t : entries) {
    if (t.src != v || g.transitions.count(t) == 0) {
      throw PreconditionError("entry transitions must leave '" + v + "' and belong to the chart");
    }
  }
  if (!g.has_vertex(v)) throw PreconditionError("no vertex '" + v + "'");

  Chart sub;
  sub.kind = g.kind;
  sub.start = v;
  sub.vertices[v] = g.vertices.at(v);

  std::set<VertexId> expanded;
  std::deque<VertexId> queue;
  auto reach = [&](const VertexId& w) {
    if (w == v) return;  // halt on revisiting the root
    sub.vertices[w] = g.vertices.at(w);
    if (expanded.insert(w).second) queue.push_back(w);
  };

  for (const auto& t : entries) {
    sub.transitions.insert(t);
    reach(t.dst);
  }
  while (!queue.empty()) {
    VertexId w = queue.front();
    queue.pop_front();
    for (const auto& t : g.out(w)) {
      sub.transitions.insert(t);
      reach(t.dst);
    }
  }
  return sub;
}

Chart eliminate(const Chart& g, const VertexId& v, const std::set<ChartTransition>& entries) {
  Chart sub = loop_subchart(g, v, entries);
  if (!check_loop_chart(sub).empty()) {
    throw PreconditionError("the entry set at '" + v + "' does not generate a loop subchart");
  }
  Chart pruned = g;
  for (const auto& t : entries) pruned.transitions.erase(t);
  return restrict_reachable(pruned);
}

bool reachable_part_acyclic(const Chart& g) {
  return !find_cycle(g, reachable_from(g, g.start), edge_any).has_value();
}

namespace {

// All (vertex, entry-set) pairs that generate a loop subchart, in vertex
// order and, per vertex, largest entry set first.
std::vector<std::pair<VertexId, std::set<ChartTransition>>> loop_candidates(
    const Chart& g, std::size_t max_out_degree) {
  std::vector<std::pair<VertexId, std::set<ChartTransition>>> candidates;
  for (const auto& [v, data] : g.vertices) {
    (void)data;
    const std::vector<ChartTransition> outs = g.out(v);
    const std::size_t d = outs.size();
    if (d == 0) continue;
    if (d > max_out_degree) {
      throw PreconditionError("vertex '" + v + "' has out-degree " + std::to_string(d) +
                              ", above the entry-set enumeration limit of " +
                              std::to_string(max_out_degree));
    }
    std::vector<unsigned> masks;
    masks.reserve((1u << d) - 1);
    for (unsigned mask = 1; mask < (1u << d); ++mask) masks.push_back(mask);
    std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
      return std::popcount(a) > std::popcount(b);
    });
    for (unsigned mask : masks) {
      std::set<ChartTransition> entries;
      for (std::size_t i = 0; i < d; ++i) {
        if (mask & (1u << i)) entries.insert(outs[i]);
      }
      if (check_loop_chart(loop_subchart(g, v, entries)).empty()) {
        candidates.emplace_back(v, std::move(entries));
      }
    }
  }
  return candidates;
}

struct SearchContext {
  LeeOptions options;
  std::size_t explored = 0;
  std::map<std::string, bool> failed;  // canonical key -> no run completes from here
};

void charge(SearchContext& ctx) {
  if (++ctx.explored > ctx.options.budget) throw BudgetExceededError(ctx.options.budget);
}

std::optional<EliminationRun> search_one(const Chart& c, SearchContext& ctx) {
  if (reachable_part_acyclic(c)) return EliminationRun{{}, c};
  const std::string key = canonical_key(c);
  if (ctx.failed.count(key) != 0) return std::nullopt;
  charge(ctx);
  for (auto& [v, entries] : loop_candidates(c, ctx.options.max_out_degree)) {
    Chart child = eliminate(c, v, entries);
    if (auto rest = search_one(child, ctx)) {
      rest->steps.insert(rest->steps.begin(), EliminationStep{v, entries});
      return rest;
    }
  }
  ctx.failed.emplace(key, true);
  return std::nullopt;
}

void search_all(const Chart& c, SearchContext& ctx, std::vector<EliminationStep>& prefix,
                std::vector<EliminationRun>& results, std::size_t max_runs) {
  if (results.size() >= max_runs) return;
  if (reachable_part_acyclic(c)) {
    results.push_back(EliminationRun{prefix, c});
    return;
  }
  const std::string key = canonical_key(c);
  if (ctx.failed.count(key) != 0) return;
  charge(ctx);
  bool any_success = false;
  for (auto& [v, entries] : loop_candidates(c, ctx.options.max_out_degree)) {
    if (results.size() >= max_runs) return;
    Chart child = eliminate(c, v, entries);
    const std::size_t before = results.size();
    prefix.push_back(EliminationStep{v, entries});
    search_all(child, ctx, prefix, results, max_runs);
    prefix.pop_back();
    if (results.size() > before) any_success = true;
  }
  if (!any_success && results.size() < max_runs) ctx.failed.emplace(key, true);
}

}  // namespace

LeeResult lee(const Chart& g, const LeeOptions& options) {
  SearchContext ctx{options, 0, {}};
  LeeResult result;
  result.run = search_one(restrict_reachable(g), ctx);
  result.explored = ctx.explored;
  return result;
}

std::vector<EliminationRun> lee_enumerate(const Chart& g, std::size_t max_runs,
                                          const LeeOptions& options) {
  SearchContext ctx{options, 0, {}};
  std::vector<EliminationRun> results;
  std::vector<EliminationStep> prefix;
  search_all(restrict_reachable(g), ctx, prefix, results, max_runs);
  return results;
}

Chart replay_run(const Chart& g, const EliminationRun& run) {
  Chart current = g;
  for (std::size_t k = 0; k < run.steps.size(); ++k) {
    const auto& step = run.steps[k];
    for (const auto& t : step.entries) {
      if (current.transitions.count(t) == 0) {
        throw PreconditionError("run step " + std::to_string(k + 1) +
                                " removes a transition that is not present");
      }
    }
    current = eliminate(current, step.vertex, step.entries);
  }
  return current;
}

Chart run_to_labeling(const Chart& g, const EliminationRun& run) {
  replay_run(g, run);  // validates every step
  std::map<ChartTransition, Marking> marking;
  for (std::size_t k = 0; k < run.steps.size(); ++k) {
    for (const auto& t : run.steps[k].entries) marking[t] = static_cast<Marking>(k + 1);
  }
  Chart labeled;
  labeled.kind = ChartKind::Labeled;
  labeled.start = g.start;
  labeled.vertices = g.vertices;
  labeled.exprs = g.exprs;
  for (const auto& t : g.transitions) {
    auto it = marking.find(t);
    labeled.transitions.insert({t.src, t.label, it == marking.end() ? 0 : it->second, t.dst});
  }
  return labeled;
}

namespace {

std::set<std::pair<VertexId, Marking>> entry_identifiers(const Chart& labeled) {
  std::set<std::pair<VertexId, Marking>> ids;
  for (const auto& t : labeled.transitions) {
    if (t.marking >= 1) ids.emplace(t.src, t.marking);
  }
  return ids;
}

bool chart_has_empty_steps(const Chart& g) {
  for (const auto& t : g.transitions) {
    if (t.label.is_empty_step()) return true;
  }
  return false;
}

}  // namespace

Chart llee_loop_subchart(const Chart& labeled, const VertexId& v, Marking level) {
  if (level < 1) throw PreconditionError("entry levels start at 1");
  std::set<ChartTransition> entries;
  for (const auto& t : labeled.out(v)) {
    if (t.marking == level) entries.insert(t);
  }
  if (entries.empty()) {
    throw PreconditionError("no level-" + std::to_string(level) + " entry transition leaves '" +
                            v + "'");
  }

  Chart sub;
  sub.kind = chart_has_empty_steps(labeled) ? ChartKind::One : ChartKind::Plain;
  sub.start = v;
  sub.vertices[v] = labeled.vertices.at(v);

  std::set<VertexId> expanded;
  std::deque<VertexId> queue;
  auto reach = [&](const VertexId& w) {
    if (w == v) return;
    sub.vertices[w] = labeled.vertices.at(w);
    if (expanded.insert(w).second) queue.push_back(w);
  };

  for (const auto& t : entries) {
    sub.transitions.insert({t.src, t.label, 0, t.dst});
    reach(t.dst);
  }
  while (!queue.empty()) {
    VertexId w = queue.front();
    queue.pop_front();
    for (const auto& t : labeled.out(w)) {
      if (t.marking != 0) continue;  // body transitions only
      sub.transitions.insert({t.src, t.label, 0, t.dst});
      reach(t.dst);
    }
  }
  return sub;
}

namespace {

std::string join(const std::vector<VertexId>& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!out.empty()) out += " -> ";
    out += v;
  }
  return out;
}

}  // namespace

LLEEVerdict verify_llee(const Chart& labeled) {
  // W1: the body subgraph must not admit an infinite path.
  std::set<VertexId> all;
  for (const auto& [v, data] : labeled.vertices) {
    (void)data;
    all.insert(v);
  }
  if (auto cycle = find_cycle(labeled, all,
                              [](const ChartTransition& t) { return t.marking == 0; })) {
    return {false, "W1", "body cycle: " + join(*cycle)};
  }

  for (const auto& [v, level] : entry_identifiers(labeled)) {
    const Chart sub = llee_loop_subchart(labeled, v, level);
    // W2: every entry identifier generates a loop subchart.
    const auto violations = check_loop_chart(sub);
    if (!violations.empty()) {
      return {false, "W2",
              "entry <" + v + "," + std::to_string(level) + "> violates " +
                  to_string(violations.front().cond) + " at " + join(violations.front().witness)};
    }
    // W3: entries inside the loop body stay below the loop's level.
    for (const auto& [w, data] : sub.vertices) {
      (void)data;
      if (w == v) continue;
      for (const auto& t : labeled.out(w)) {
        if (t.marking >= level && t.marking >= 1) {
          return {false, "W3",
                  "entry <" + v + "," + std::to_string(level) + "> contains " + w + " -[" +
                      std::to_string(t.marking) + "]-> " + t.dst};
        }
      }
    }
  }
  return {};
}

LLEEVerdict verify_llee_alt(const Chart& labeled) {
  // Body termination, shown by eliminating vertices of body in-degree zero.
  std::map<VertexId, std::size_t> body_indegree;
  for (const auto& [v, data] : labeled.vertices) {
    (void)data;
    body_indegree[v] = 0;
  }
  for (const auto& t : labeled.transitions) {
    if (t.marking == 0) ++body_indegree[t.dst];
  }
  std::deque<VertexId> ready;
  for (const auto& [v, d] : body_indegree) {
    if (d == 0) ready.push_back(v);
  }
  std::size_t processed = 0;
  while (!ready.empty()) {
    VertexId v = ready.front();
    ready.pop_front();
    ++processed;
    for (const auto& t : labeled.out(v)) {
      if (t.marking == 0 && --body_indegree[t.dst] == 0) ready.push_back(t.dst);
    }
  }
  if (processed != labeled.vertices.size()) {
    return {false, "LLEE-2", "body steps are not terminating"};
  }

  // Per-vertex body reachability, used for the loop-return condition.
  auto body_reaches = [&](const VertexId& from, const VertexId& goal) {
    std::set<VertexId> seen{from};
    std::deque<VertexId> queue{from};
    while (!queue.empty()) {
      VertexId w = queue.front();
      queue.pop_front();
      if (w == goal) return true;
      for (const auto& t : labeled.out(w)) {
        if (t.marking == 0 && seen.insert(t.dst).second) queue.push_back(t.dst);
      }
    }
    return false;
  };

  for (const auto& [v, level] : entry_identifiers(labeled)) {
    std::set<VertexId> entry_targets;
    for (const auto& t : labeled.out(v)) {
      if (t.marking == level) entry_targets.insert(t.dst);
    }

    // Some level-n entry must allow a body path back to v.
    bool returns = false;
    for (const auto& w : entry_targets) {
      if (w == v || body_reaches(w, v)) {
        returns = true;
        break;
      }
    }
    if (!returns) {
      return {false, "LLEE-1",
              "no body path returns to '" + v + "' from its level-" + std::to_string(level) +
                  " entries"};
    }

    // Vertices of the loop body proper: reached from the entry targets by
    // body steps whose targets avoid v.
    std::set<VertexId> body_region;
    std::deque<VertexId> queue;
    for (const auto& w : entry_targets) {
      if (w != v && body_region.insert(w).second) queue.push_back(w);
    }
    while (!queue.empty()) {
      VertexId w = queue.front();
      queue.pop_front();
      for (const auto& t : labeled.out(w)) {
        if (t.marking != 0 || t.dst == v) continue;
        if (body_region.insert(t.dst).second) queue.push_back(t.dst);
      }
    }

    for (const auto& f : body_region) {
      if (labeled.is_terminating(f)) {
        return {false, "LLEE-3",
                "'" + f + "' terminates inside the level-" + std::to_string(level) +
                    " loop at '" + v + "'"};
      }
      for (const auto& t : labeled.out(f)) {
        if (t.marking >= level && t.marking >= 1) {
          return {false, "LLEE-4",
                  "'" + f + "' fires a level-" + std::to_string(t.marking) +
                      " entry inside the level-" + std::to_string(level) + " loop at '" + v + "'"};
        }
      }
    }
  }
  return {};
}

EliminationRun llee_elimination_strategy(const Chart& labeled) {
  if (const auto verdict = verify_llee(labeled); !verdict.pass) {
    throw PreconditionError("not a valid witness: " + verdict.condition + " fails (" +
                            verdict.detail + ")");
  }

  Chart current = restrict_reachable(labeled);
  EliminationRun run;
  while (true) {
    const auto ids = entry_identifiers(current);
    if (ids.empty()) break;
    // minimal level first, then vertex order
    auto pick = *std::min_element(ids.begin(), ids.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    const auto& [v, level] = pick;

    std::set<ChartTransition> labeled_entries;
    std::set<ChartTransition> erased_entries;
    for (const auto& t : current.out(v)) {
      if (t.marking == level) {
        labeled_entries.insert(t);
        erased_entries.insert({t.src, t.label, 0, t.dst});
      }
    }

    // The erased view must present a genuine loop subchart here.
    const Chart erased = erase_markings(current);
    if (!check_loop_chart(loop_subchart(erased, v, erased_entries)).empty()) {
      throw PreconditionError("witness invariant broken at <" + v + "," +
                              std::to_string(level) + ">");
    }

    run.steps.push_back(EliminationStep{v, erased_entries});
    Chart pruned = current;
    for (const auto& t : labeled_entries) pruned.transitions.erase(t);
    current = restrict_reachable(pruned);
  }

  run.residual = erase_markings(current);
  if (!reachable_part_acyclic(run.residual)) {
    throw PreconditionError("residual still has an infinite path");
  }
  return run;
}

nlohmann::ordered_json run_to_json(const EliminationRun& run) {
  nlohmann::ordered_json j;
  auto steps = nlohmann::ordered_json::array();
  for (const auto& step : run.steps) {
    nlohmann::ordered_json sj;
    sj["vertex"] = step.vertex;
    auto entries = nlohmann::ordered_json::array();
    for (const auto& t : step.entries) {
      nlohmann::ordered_json tj;
      tj["src"] = t.src;
      tj["label"] = t.label.text();
      tj["dst"] = t.dst;
      entries.push_back(std::move(tj));
    }
    sj["entry"] = std::move(entries);
    steps.push_back(std::move(sj));
  }
  j["steps"] = std::move(steps);
  j["residual"] = chart_to_json(run.residual);
  return j;
}

}  // namespace loopchart
