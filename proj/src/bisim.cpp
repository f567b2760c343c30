#include "loopchart/bisim.hpp"

#include <algorithm>
#include <vector>

#include "loopchart/lee.hpp"

namespace loopchart {

BisimVerdict check_functional_bisim(const Chart& src, const Chart& dst, const VertexMap& m) {
  auto start_it = m.find(src.start);
  if (start_it == m.end() || start_it->second != dst.start) {
    return {false, "start", "the map does not send the start vertex to the start vertex"};
  }
  for (const auto& [v, w] : m) {
    if (!src.has_vertex(v)) return {false, "domain", "'" + v + "' is not a source vertex"};
    if (!dst.has_vertex(w)) return {false, "domain", "'" + w + "' is not a target vertex"};
  }
  for (const auto& [v, w] : m) {
    if (src.is_terminating(v) != dst.is_terminating(w)) {
      return {false, "termination", "'" + v + "' and '" + w + "' disagree on termination"};
    }
    for (const auto& t : src.out(v)) {
      auto it = m.find(t.dst);
      if (it == m.end()) {
        return {false, "forth",
                "'" + v + "' -" + t.label.text() + "-> '" + t.dst + "' leaves the mapped region"};
      }
      if (dst.transitions.count({w, t.label, t.marking, it->second}) == 0) {
        return {false, "forth",
                "'" + v + "' -" + t.label.text() + "-> '" + t.dst + "' has no image at '" + w +
                    "'"};
      }
    }
    for (const auto& t : dst.out(w)) {
      bool matched = false;
      for (const auto& s : src.out(v)) {
        auto it = m.find(s.dst);
        if (s.label == t.label && s.marking == t.marking && it != m.end() &&
            it->second == t.dst) {
          matched = true;
          break;
        }
      }
      if (!matched) {
        return {false, "back",
                "'" + w + "' -" + t.label.text() + "-> '" + t.dst + "' is unmatched from '" + v +
                    "'"};
      }
    }
  }
  return {};
}

namespace {

struct RefineNode {
  bool terminating = false;
  std::vector<std::pair<std::string, std::size_t>> edges;  // (label key, target index)
};

std::string label_key(const ChartTransition& t) {
  return t.label.text() + "\x1f" + std::to_string(t.marking);
}

// Signature-based coarsest partition: start from the termination split and
// repeatedly split blocks by the set of (label, target block) pairs.
std::vector<std::size_t> refine(const std::vector<RefineNode>& nodes) {
  std::vector<std::size_t> block(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) block[i] = nodes[i].terminating ? 1 : 0;
  std::size_t count = 2;
  while (true) {
    using Signature = std::pair<std::size_t, std::set<std::pair<std::string, std::size_t>>>;
    std::map<Signature, std::size_t> ids;
    std::vector<std::size_t> next(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Signature sig{block[i], {}};
      for (const auto& [key, target] : nodes[i].edges) sig.second.emplace(key, block[target]);
      next[i] = ids.emplace(std::move(sig), ids.size()).first->second;
    }
    if (ids.size() == count) return next;
    count = ids.size();
    block = std::move(next);
  }
}

struct IndexedChart {
  std::vector<VertexId> names;
  std::map<VertexId, std::size_t> index;
};

IndexedChart index_vertices(const Chart& g, std::size_t offset) {
  IndexedChart ix;
  for (const auto& [v, data] : g.vertices) {
    (void)data;
    ix.index.emplace(v, offset + ix.names.size());
    ix.names.push_back(v);
  }
  return ix;
}

void append_nodes(const Chart& g, const IndexedChart& ix, std::vector<RefineNode>& nodes) {
  for (const auto& v : ix.names) {
    RefineNode node;
    node.terminating = g.is_terminating(v);
    for (const auto& t : g.out(v)) node.edges.emplace_back(label_key(t), ix.index.at(t.dst));
    nodes.push_back(std::move(node));
  }
}

}  // namespace

std::optional<BisimRelation> bisimilar(const Chart& g1, const Chart& g2) {
  const Chart r1 = restrict_reachable(g1);
  const Chart r2 = restrict_reachable(g2);

  const IndexedChart ix1 = index_vertices(r1, 0);
  const IndexedChart ix2 = index_vertices(r2, ix1.names.size());

  std::vector<RefineNode> nodes;
  append_nodes(r1, ix1, nodes);
  append_nodes(r2, ix2, nodes);
  const std::vector<std::size_t> block = refine(nodes);

  if (block[ix1.index.at(r1.start)] != block[ix2.index.at(r2.start)]) return std::nullopt;

  BisimRelation relation;
  for (const auto& [v, i] : ix1.index) {
    for (const auto& [w, j] : ix2.index) {
      if (block[i] == block[j]) relation.pairs.emplace(v, w);
    }
  }
  return relation;
}

std::pair<Chart, VertexMap> collapse(const Chart& g) {
  const Chart r = restrict_reachable(g);
  const IndexedChart ix = index_vertices(r, 0);

  std::vector<RefineNode> nodes;
  append_nodes(r, ix, nodes);
  const std::vector<std::size_t> block = refine(nodes);

  // Representatives: least vertex id in each block (ids iterate sorted).
  std::map<std::size_t, VertexId> rep;
  for (const auto& [v, i] : ix.index) rep.emplace(block[i], v);

  VertexMap quotient_map;
  for (const auto& [v, i] : ix.index) quotient_map[v] = rep.at(block[i]);

  Chart q;
  q.kind = r.kind;
  q.start = quotient_map.at(r.start);
  for (const auto& [b, v] : rep) {
    (void)b;
    q.vertices[v] = r.vertices.at(v);
    auto eit = r.exprs.find(v);
    if (eit != r.exprs.end()) q.exprs.insert(*eit);
  }
  for (const auto& t : r.transitions) {
    q.transitions.insert({quotient_map.at(t.src), t.label, t.marking, quotient_map.at(t.dst)});
  }
  return {std::move(q), std::move(quotient_map)};
}

CheckVerdict check_projection_bisimulation(const StarExpr& e, std::size_t cap) {
  const Chart induced = restrict_reachable(induce(onechart_of(e, cap)));
  const Chart plain = chart_of(e, cap);

  VertexMap m;
  for (const auto& [v, expr] : induced.exprs) m[v] = render(project(expr));

  const BisimVerdict verdict = check_functional_bisim(induced, plain, m);
  if (!verdict.pass) {
    return {false, "projection is not a functional bisimulation: " + verdict.condition + " : " +
                       verdict.detail};
  }
  return {};
}

CheckVerdict check_labeled_witness(const StarExpr& e, std::size_t cap) {
  const Chart labeled = labeled_onechart_of(e, cap);
  const Chart one = onechart_of(e, cap);

  if (!same_chart(erase_markings(labeled), one)) {
    return {false, "erasing markings does not reproduce the 1-chart interpretation"};
  }
  if (const auto verdict = verify_llee(labeled); !verdict.pass) {
    return {false, "witness check failed: " + verdict.condition + " : " + verdict.detail};
  }
  if (const auto verdict = verify_llee_alt(labeled); !verdict.pass) {
    return {false, "path-condition check failed: " + verdict.condition + " : " + verdict.detail};
  }
  try {
    const EliminationRun run = llee_elimination_strategy(labeled);
    const Chart residual = replay_run(erase_markings(labeled), run);
    if (!reachable_part_acyclic(residual)) {
      return {false, "elimination strategy leaves an infinite path"};
    }
  } catch (const PreconditionError& err) {
    return {false, std::string("elimination strategy failed: ") + err.what()};
  }
  return {};
}

}  // namespace loopchart
