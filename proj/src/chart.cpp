#include "loopchart/chart.hpp"

#include <deque>
#include <functional>
#include <sstream>

namespace loopchart {

bool Chart::is_terminating(const VertexId& v) const {
  auto it = vertices.find(v);
  return it != vertices.end() && it->second.terminating;
}

std::vector<ChartTransition> Chart::out(const VertexId& v) const {
  std::vector<ChartTransition> result;
  auto it = transitions.lower_bound(ChartTransition{v, StepLabel::empty_step(), 0, ""});
  // the empty step with marking 0 and empty target is the least transition at v
  for (; it != transitions.end() && it->src == v; ++it) result.push_back(*it);
  return result;
}

namespace {

using StepFn = std::function<std::set<MarkedStep>(const StackedExpr&)>;

Chart generate_chart(ChartKind kind, const StackedExpr& root, std::size_t cap, const StepFn& steps) {
  if (cap < 1) throw PreconditionError("vertex cap must be at least 1");
  Chart c;
  c.kind = kind;
  c.start = render(root);

  std::map<StackedExpr, VertexId> visited;
  std::deque<StackedExpr> queue;

  auto add_vertex = [&](const StackedExpr& e) -> VertexId {
    auto it = visited.find(e);
    if (it != visited.end()) return it->second;
    if (visited.size() + 1 > cap) throw CapExceededError(cap);
    VertexId id = render(e);
    visited.emplace(e, id);
    c.vertices[id] = ChartVertex{id, terminates(e)};
    c.exprs.emplace(id, e);
    queue.push_back(e);
    return id;
  };

  add_vertex(root);
  while (!queue.empty()) {
    StackedExpr current = queue.front();
    queue.pop_front();
    const VertexId src = visited.at(current);
    for (const auto& step : steps(current)) {
      const VertexId dst = add_vertex(step.target);
      c.transitions.insert(
          {src, step.label, kind == ChartKind::Labeled ? step.marking : 0, dst});
    }
  }
  return c;
}

}  // namespace

Chart chart_of(const StarExpr& e, std::size_t cap) {
  return generate_chart(ChartKind::Plain, StackedExpr::lift(e), cap, [](const StackedExpr& v) {
    std::set<MarkedStep> out;
    for (const auto& [label, target] : plain_steps(v.plain())) {
      out.insert({label, 0, StackedExpr::lift(target)});
    }
    return out;
  });
}

Chart onechart_of(const StarExpr& e, std::size_t cap) {
  return generate_chart(ChartKind::One, StackedExpr::lift(e), cap, [](const StackedExpr& v) {
    std::set<MarkedStep> out;
    for (const auto& [label, target] : stacked_steps(v)) out.insert({label, 0, target});
    return out;
  });
}

Chart labeled_onechart_of(const StarExpr& e, std::size_t cap) {
  return generate_chart(ChartKind::Labeled, StackedExpr::lift(e), cap,
                        [](const StackedExpr& v) { return marked_steps(v); });
}

Chart induce(const Chart& g) {
  if (g.kind == ChartKind::Labeled) {
    throw PreconditionError("induce expects a chart or a 1-chart; erase markings first");
  }
  // Empty-step closure per vertex. Generated charts have acyclic empty steps,
  // but the fixpoint below is also well defined for hand-coded cycles.
  std::map<VertexId, std::set<VertexId>> closure;
  for (const auto& [v, data] : g.vertices) {
    (void)data;
    std::set<VertexId>& reach = closure[v];
    std::deque<VertexId> queue{v};
    reach.insert(v);
    while (!queue.empty()) {
      VertexId u = queue.front();
      queue.pop_front();
      for (const auto& t : g.out(u)) {
        if (t.label.is_empty_step() && reach.insert(t.dst).second) queue.push_back(t.dst);
      }
    }
  }

  Chart result;
  result.kind = ChartKind::Plain;
  result.start = g.start;
  result.vertices = g.vertices;
  result.exprs = g.exprs;
  for (auto& [v, data] : result.vertices) {
    data.terminating = false;
    for (const auto& u : closure.at(v)) {
      if (g.is_terminating(u)) {
        data.terminating = true;
        break;
      }
    }
  }
  for (const auto& [v, reach] : closure) {
    for (const auto& u : reach) {
      for (const auto& t : g.out(u)) {
        if (!t.label.is_empty_step()) result.transitions.insert({v, t.label, 0, t.dst});
      }
    }
  }
  return result;
}

Chart restrict_reachable(const Chart& g) {
  std::set<VertexId> reachable{g.start};
  std::deque<VertexId> queue{g.start};
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (const auto& t : g.out(v)) {
      if (reachable.insert(t.dst).second) queue.push_back(t.dst);
    }
  }

  Chart result;
  result.kind = g.kind;
  result.start = g.start;
  for (const auto& v : reachable) {
    auto it = g.vertices.find(v);
    if (it != g.vertices.end()) result.vertices.insert(*it);
    auto eit = g.exprs.find(v);
    if (eit != g.exprs.end()) result.exprs.insert(*eit);
  }
  for (const auto& t : g.transitions) {
    if (reachable.count(t.src) != 0) result.transitions.insert(t);
  }
  return result;
}

Chart erase_markings(const Chart& g) {
  Chart result;
  result.kind = ChartKind::One;
  result.start = g.start;
  result.vertices = g.vertices;
  result.exprs = g.exprs;
  for (const auto& t : g.transitions) result.transitions.insert({t.src, t.label, 0, t.dst});
  return result;
}

bool same_chart(const Chart& a, const Chart& b) {
  if (a.kind != b.kind || a.start != b.start) return false;
  if (a.transitions != b.transitions) return false;
  if (a.vertices.size() != b.vertices.size()) return false;
  for (auto ita = a.vertices.begin(), itb = b.vertices.begin(); ita != a.vertices.end();
       ++ita, ++itb) {
    if (ita->first != itb->first) return false;
    if (ita->second.terminating != itb->second.terminating) return false;
    if (ita->second.expr_text != itb->second.expr_text) return false;
  }
  return true;
}

namespace {

std::string kind_name(ChartKind k) {
  switch (k) {
    case ChartKind::Plain: return "chart";
    case ChartKind::One: return "onechart";
    case ChartKind::Labeled: return "labeled";
  }
  return "chart";
}

}  // namespace

nlohmann::ordered_json chart_to_json(const Chart& g) {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(g.kind);
  j["start"] = g.start;
  auto vertices = nlohmann::ordered_json::array();
  for (const auto& [id, data] : g.vertices) {
    nlohmann::ordered_json v;
    v["id"] = id;
    if (data.expr_text) {
      v["expr"] = *data.expr_text;
    } else {
      v["expr"] = nullptr;
    }
    v["terminating"] = data.terminating;
    vertices.push_back(std::move(v));
  }
  j["vertices"] = std::move(vertices);
  auto transitions = nlohmann::ordered_json::array();
  for (const auto& t : g.transitions) {
    nlohmann::ordered_json tj;
    tj["src"] = t.src;
    tj["label"] = t.label.text();
    if (g.kind == ChartKind::Labeled) tj["marking"] = t.marking;
    tj["dst"] = t.dst;
    transitions.push_back(std::move(tj));
  }
  j["transitions"] = std::move(transitions);
  return j;
}

Chart chart_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ChartFormatError("chart JSON must be an object");
  const auto require = [&](const char* key) -> const nlohmann::json& {
    auto it = j.find(key);
    if (it == j.end()) throw ChartFormatError(std::string("chart JSON lacks key '") + key + "'");
    return *it;
  };

  Chart g;
  const std::string kind = require("kind").get<std::string>();
  if (kind == "chart") {
    g.kind = ChartKind::Plain;
  } else if (kind == "onechart") {
    g.kind = ChartKind::One;
  } else if (kind == "labeled") {
    g.kind = ChartKind::Labeled;
  } else {
    throw ChartFormatError("unknown chart kind '" + kind + "'");
  }
  g.start = require("start").get<std::string>();

  for (const auto& v : require("vertices")) {
    if (!v.is_object() || !v.contains("id")) throw ChartFormatError("malformed vertex entry");
    ChartVertex data;
    if (v.contains("expr") && !v["expr"].is_null()) data.expr_text = v["expr"].get<std::string>();
    data.terminating = v.value("terminating", false);
    const auto id = v["id"].get<std::string>();
    if (!g.vertices.emplace(id, std::move(data)).second) {
      throw ChartFormatError("duplicate vertex id '" + id + "'");
    }
  }
  if (!g.has_vertex(g.start)) throw ChartFormatError("start vertex '" + g.start + "' not declared");

  for (const auto& t : require("transitions")) {
    if (!t.is_object()) throw ChartFormatError("malformed transition entry");
    const auto src = t.at("src").get<std::string>();
    const auto dst = t.at("dst").get<std::string>();
    const auto label_text = t.at("label").get<std::string>();
    if (!g.has_vertex(src) || !g.has_vertex(dst)) {
      throw ChartFormatError("transition endpoint not declared: " + src + " -> " + dst);
    }
    StepLabel label = StepLabel::empty_step();
    if (label_text == "1") {
      if (g.kind == ChartKind::Plain) {
        throw ChartFormatError("empty-step label \"1\" is not allowed in a plain chart");
      }
    } else if (is_valid_action_symbol(label_text)) {
      label = StepLabel::action(label_text);
    } else {
      throw ChartFormatError("invalid transition label '" + label_text + "'");
    }
    Marking marking = 0;
    if (g.kind == ChartKind::Labeled) {
      if (!t.contains("marking")) throw ChartFormatError("labeled chart transition lacks marking");
      marking = t.at("marking").get<Marking>();
      if (marking < 0) throw ChartFormatError("markings must be nonnegative");
    } else if (t.contains("marking")) {
      throw ChartFormatError("markings are only allowed in labeled charts");
    }
    g.transitions.insert({src, label, marking, dst});
  }
  return g;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string chart_to_dot(const Chart& g) {
  std::ostringstream os;
  os << "digraph chart {\n";
  os << "  rankdir=LR;\n";
  os << "  \"__start__\" [shape=point,label=\"\"];\n";
  for (const auto& [id, data] : g.vertices) {
    os << "  \"" << dot_escape(id) << "\" [shape="
       << (data.terminating ? "doublecircle" : "circle") << "];\n";
  }
  os << "  \"__start__\" -> \"" << dot_escape(g.start) << "\";\n";
  for (const auto& t : g.transitions) {
    std::string label = t.label.text();
    if (g.kind == ChartKind::Labeled && t.marking >= 1) {
      label += " [" + std::to_string(t.marking) + "]";
    }
    os << "  \"" << dot_escape(t.src) << "\" -> \"" << dot_escape(t.dst) << "\" [label=\""
       << dot_escape(label) << "\"";
    if (t.label.is_empty_step()) os << ",style=dotted";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string canonical_key(const Chart& g) { return chart_to_json(g).dump(); }

}  // namespace loopchart
