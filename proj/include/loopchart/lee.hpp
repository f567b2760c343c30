#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loopchart/chart.hpp"

namespace loopchart {

class BudgetExceededError : public std::runtime_error {
public:
  explicit BudgetExceededError(std::size_t budget)
      : std::runtime_error("search budget of " + std::to_string(budget) + " exhausted") {}
};

enum class LoopCond { L1, L2, L3 };

struct LoopViolation {
  LoopCond cond;
  std::vector<VertexId> witness;  // a cycle for L1/L2, an offending vertex for L3
};

std::string to_string(LoopCond c);

/// True iff no cycle is reachable from the start, i.e. the reachable part has
/// no infinite path.
bool reachable_part_acyclic(const Chart& g);

/// Checks the three loop-chart conditions: some infinite path from the start
/// exists (L1), every cycle among reachable vertices passes through the start
/// (L2), and termination is only permitted at the start (L3). Returns the
/// failed conditions with witnesses; empty means loop chart.
std::vector<LoopViolation> check_loop_chart(const Chart& g);

/// The subchart rooted at v generated by taking the transitions in `entries`
/// first and then following any transitions until v is reached again. The
/// entries become the only transitions from v in the result.
Chart loop_subchart(const Chart& g, const VertexId& v, const std::set<ChartTransition>& entries);

/// Removes the entry transitions of a loop subchart and prunes everything
/// that becomes unreachable. Requires loop_subchart(g, v, entries) to satisfy
/// the loop-chart conditions.
Chart eliminate(const Chart& g, const VertexId& v, const std::set<ChartTransition>& entries);

struct EliminationStep {
  VertexId vertex;
  std::set<ChartTransition> entries;
};

struct EliminationRun {
  std::vector<EliminationStep> steps;
  Chart residual;
};

struct LeeOptions {
  std::size_t budget = 200000;      // distinct chart states explored
  std::size_t max_out_degree = 16;  // entry sets are enumerated as subsets
};

struct LeeResult {
  std::optional<EliminationRun> run;  // absent = definitely no successful run
  std::size_t explored = 0;
};

/// Decides whether some sequence of loop-subchart eliminations leaves a chart
/// whose reachable part has no infinite path. Backtracking over (vertex,
/// entry-set) choices, memoized on the canonical chart serialization; throws
/// BudgetExceededError instead of guessing when the budget runs out.
LeeResult lee(const Chart& g, const LeeOptions& options = {});

/// Enumerates distinct successful elimination runs, up to max_runs.
std::vector<EliminationRun> lee_enumerate(const Chart& g, std::size_t max_runs,
                                          const LeeOptions& options = {});

/// Replays a run, validating every step; returns the final chart.
Chart replay_run(const Chart& g, const EliminationRun& run);

/// Records a run in the original chart: transitions removed by step k carry
/// marking k, everything else is a body transition.
Chart run_to_labeling(const Chart& g, const EliminationRun& run);

/// The subchart generated from the level-n entry transitions at v: entry
/// first, then body transitions only, halting when v is revisited. Markings
/// are erased in the result.
Chart llee_loop_subchart(const Chart& labeled, const VertexId& v, Marking level);

struct LLEEVerdict {
  bool pass = true;
  std::string condition;  // failed condition name when pass is false
  std::string detail;     // concrete witness
};

/// Witness check via the loop-subchart route: the body subgraph terminates,
/// every entry identifier generates a loop subchart, and entries inside a
/// loop body stay below the loop's level.
LLEEVerdict verify_llee(const Chart& labeled);

/// The same property checked through four path conditions evaluated directly
/// on the transition relation; agrees with verify_llee on pass/fail.
LLEEVerdict verify_llee_alt(const Chart& labeled);

/// Turns a verified labeling into an elimination run by repeatedly removing a
/// minimal-level entry identifier (ties broken by vertex order). The run is
/// valid on the marking-erased chart and leaves an acyclic reachable part.
EliminationRun llee_elimination_strategy(const Chart& labeled);

nlohmann::ordered_json run_to_json(const EliminationRun& run);

}  // namespace loopchart
