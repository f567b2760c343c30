#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "loopchart/chart.hpp"

namespace loopchart {

struct BisimRelation {
  std::set<std::pair<VertexId, VertexId>> pairs;
};

/// Partial map from left-chart vertices to right-chart vertices; its graph,
/// when valid, is a functional bisimulation.
using VertexMap = std::map<VertexId, VertexId>;

struct BisimVerdict {
  bool pass = true;
  std::string condition;  // "start", "forth", "back", "termination", "domain"
  std::string detail;
};

/// Checks that the graph of m is a bisimulation from src to dst relating the
/// start vertices: every move of a mapped vertex stays inside the map and is
/// matched (forth), every move of its image is matched back (back), and
/// termination flags agree. A transition leaving the mapped region fails.
BisimVerdict check_functional_bisim(const Chart& src, const Chart& dst, const VertexMap& m);

/// Coarsest bisimulation between the reachable parts of the two charts,
/// computed by signature-based partition refinement on their disjoint union.
/// Present iff the start vertices end up equivalent.
std::optional<BisimRelation> bisimilar(const Chart& g1, const Chart& g2);

/// Quotient of the reachable part by the coarsest autobisimulation. Block
/// representatives are the least vertex ids; the returned map sends every
/// reachable vertex to its representative.
std::pair<Chart, VertexMap> collapse(const Chart& g);

struct CheckVerdict {
  bool pass = true;
  std::string detail;
};

/// Builds the induced chart of the 1-chart interpretation of e, prunes the
/// unreachable part, and checks that projecting stacked expressions defines a
/// functional bisimulation onto the chart interpretation of e.
CheckVerdict check_projection_bisimulation(const StarExpr& e,
                                             std::size_t cap = kDefaultVertexCap);

/// Builds the entry/body-labeled 1-chart of e and checks that it is a valid
/// witness: marking erasure reproduces the 1-chart interpretation, both
/// witness verifiers accept, and the elimination strategy derived from the
/// labeling yields a valid run ending in an acyclic reachable part.
CheckVerdict check_labeled_witness(const StarExpr& e, std::size_t cap = kDefaultVertexCap);

}  // namespace loopchart
