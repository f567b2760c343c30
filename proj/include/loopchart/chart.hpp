#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "loopchart/semantics.hpp"

namespace loopchart {

using VertexId = std::string;

enum class ChartKind { Plain, One, Labeled };

class CapExceededError : public std::runtime_error {
public:
  explicit CapExceededError(std::size_t cap)
      : std::runtime_error("vertex cap of " + std::to_string(cap) + " exceeded"), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

private:
  std::size_t cap_;
};

class ChartFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ChartTransition {
  VertexId src;
  StepLabel label;
  Marking marking = 0;
  VertexId dst;

  friend std::strong_ordering operator<=>(const ChartTransition&, const ChartTransition&) = default;
};

struct ChartVertex {
  std::optional<std::string> expr_text;
  bool terminating = false;
};

/// Finite rooted transition system with a termination set. The same value
/// type backs plain charts, 1-charts (empty-step labels allowed) and
/// entry/body-labeled charts (markings meaningful); `kind` says which.
/// Values are immutable by convention once built.
struct Chart {
  ChartKind kind = ChartKind::Plain;
  VertexId start;
  std::map<VertexId, ChartVertex> vertices;
  std::set<ChartTransition> transitions;

  /// Typed payloads for generated charts; not serialized. Plain charts hold
  /// lifted expressions.
  std::map<VertexId, StackedExpr> exprs;

  bool has_vertex(const VertexId& v) const { return vertices.count(v) != 0; }
  bool is_terminating(const VertexId& v) const;
  std::vector<ChartTransition> out(const VertexId& v) const;
};

inline constexpr std::size_t kDefaultVertexCap = 10000;

/// Iterated derivatives of e under the plain rule system, gathered
/// breadth-first. Vertex ids are canonical renderings.
Chart chart_of(const StarExpr& e, std::size_t cap = kDefaultVertexCap);

/// Iterated subderivatives of e under the stacked rule system, empty steps
/// included.
Chart onechart_of(const StarExpr& e, std::size_t cap = kDefaultVertexCap);

/// As onechart_of, but transitions carry entry/body markings.
Chart labeled_onechart_of(const StarExpr& e, std::size_t cap = kDefaultVertexCap);

/// Closure semantics of empty steps: a proper transition may be prefixed by
/// any number of empty steps, and termination is reached through them. Keeps
/// every vertex (unreachable ones included); pruning is restrict_reachable.
Chart induce(const Chart& g);

/// Keeps exactly the vertices reachable from the start via the chart's own
/// transitions, and the transitions among them.
Chart restrict_reachable(const Chart& g);

/// Drops the marking dimension of a labeled chart, collapsing duplicates.
Chart erase_markings(const Chart& g);

/// Structural equality: kind, start, vertices with flags and payload text,
/// transitions. Typed payloads are ignored.
bool same_chart(const Chart& a, const Chart& b);

nlohmann::ordered_json chart_to_json(const Chart& g);
Chart chart_from_json(const nlohmann::json& j);
std::string chart_to_dot(const Chart& g);

/// Compact canonical serialization; equal charts produce equal keys.
std::string canonical_key(const Chart& g);

}  // namespace loopchart
