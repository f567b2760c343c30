#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loopchart/bisim.hpp"
#include "loopchart/chart.hpp"
#include "loopchart/lee.hpp"

namespace loopchart {

struct CorpusConfig {
  std::uint64_t seed = 0;
  std::size_t count = 1;
  int max_depth = 1;
  int alphabet_size = 1;  // actions a, b, c, ... (at most 26)
  std::size_t vertex_cap = kDefaultVertexCap;
};

/// Deterministic function of (seed, index): a uniformly chosen grammar case
/// at every level with the depth budget, leaves only at depth 0. Leaf choice
/// is biased towards actions (weights: action 2, 1 and 0 each 1), so corpora
/// are not dominated by dead expressions.
StarExpr random_expr(const CorpusConfig& config, std::size_t index);

/// Positive-length-path formulation of normed_plus, kept independent of the
/// one-step characterization it cross-checks: some induced transition chain
/// of length at least one ends in an expression with induced termination.
bool normed_plus_by_path(const StackedExpr& e);

struct CorpusCheckSelection {
  bool projection = true;  // the thm59 check
  bool witness = true;     // the thm514 check
  bool props = true;       // structural property bundle + mutations
};

struct CorpusFailure {
  std::size_t index;
  std::string expr;
  std::string what;
};

struct CorpusReport {
  std::size_t checked = 0;
  std::vector<CorpusFailure> failures;
  std::size_t mutation_total = 0;
  std::size_t mutation_failed = 0;  // mutations rejected by both verifiers

  bool all_passed() const { return failures.empty(); }
  double mutation_failure_rate() const {
    return mutation_total == 0 ? 1.0
                               : static_cast<double>(mutation_failed) /
                                     static_cast<double>(mutation_total);
  }
};

inline constexpr std::size_t kMutationsPerChart = 50;

/// Runs the selected checks over the whole corpus. Property failures are
/// collected per expression; cap errors propagate.
CorpusReport run_corpus_checks(const CorpusConfig& config, const CorpusCheckSelection& select);

}  // namespace loopchart
