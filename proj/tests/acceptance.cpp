// Acceptance suite: golden charts, end-to-end checks, randomized corpus, CLI
// determinism. Prints one line per criterion; exits nonzero if any fails.

#include <sys/wait.h>

#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "loopchart/bisim.hpp"
#include "loopchart/corpus.hpp"
#include "loopchart/lee.hpp"

using namespace loopchart;

namespace {

StarExpr p(const std::string& text) { return parse_star_expr(text); }

const char* kExprE = "(a*.b*)*";
const char* kExprG0 = "((1.a).(c.a+a.(b+b.a))*).0";
const char* kExprF = "(a1.(1+b1.0)+a2.(1+b2.0)+a3.(1+b3.0))*.0";

ChartTransition t(const std::string& src, const std::string& label, const std::string& dst,
                  Marking marking = 0) {
  return {src, label == "1" ? StepLabel::empty_step() : StepLabel::action(label), marking, dst};
}

std::string cli_path;

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_command(const std::string& args) {
  const std::string command = cli_path + " " + args + " 2>/dev/null";
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.output.append(buffer, n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

class Harness {
public:
  void criterion(int number, const std::string& description,
                 const std::function<void(std::string&)>& check) {
    std::string reason;
    bool ok = true;
    try {
      check(reason);
      ok = reason.empty();
    } catch (const std::exception& err) {
      ok = false;
      reason = err.what();
    }
    std::cout << "criterion " << number << ": " << (ok ? "PASS" : "FAIL") << " - " << description;
    if (!ok) std::cout << " [" << reason << "]";
    std::cout << "\n";
    if (!ok) ++failures_;
  }

  int exit_code() const { return failures_ == 0 ? 0 : 1; }

private:
  int failures_ = 0;
};

void expect(std::string& reason, bool condition, const std::string& message) {
  if (!condition && reason.empty()) reason = message;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_path = argv[1];
  Harness h;

  const std::string e = kExprE;
  const std::string e1 = "1.a*.b*.(a*.b*)*";
  const std::string e2 = "1.b*.(a*.b*)*";

  h.criterion(1, "chart of (a*.b*)*: 3 terminating vertices, 6 transitions, lee says NO",
              [&](std::string& reason) {
                const Chart c = chart_of(p(kExprE));
                expect(reason, c.vertices.size() == 3, "expected 3 vertices");
                for (const auto& [id, data] : c.vertices) {
                  expect(reason, data.terminating, "'" + id + "' must terminate");
                }
                const std::set<ChartTransition> expected{t(e, "a", e1),  t(e, "b", e2),
                                                         t(e1, "a", e1), t(e1, "b", e2),
                                                         t(e2, "a", e1), t(e2, "b", e2)};
                expect(reason, c.transitions == expected, "transition set differs");
                const LeeResult result = lee(c);  // budget errors would throw
                expect(reason, !result.run.has_value(), "lee must report a definite NO");
              });

  h.criterion(2, "chart of g0: 3 vertices, lee succeeds, 3 runs exist, a recording verifies",
              [&](std::string& reason) {
                const Chart c = chart_of(p(kExprG0));
                expect(reason, c.vertices.size() == 3, "expected 3 vertices");
                expect(reason, c.has_vertex("1.a.(c.a+a.(b+b.a))*.0"), "g0 vertex missing");
                expect(reason, c.has_vertex("1.(c.a+a.(b+b.a))*.0"), "g1 vertex missing");
                expect(reason, c.has_vertex("1.(b+b.a).(c.a+a.(b+b.a))*.0"), "g2 vertex missing");
                expect(reason, lee(c).run.has_value(), "lee must succeed");
                const auto runs = lee_enumerate(c, 64);
                expect(reason, runs.size() >= 3,
                       "expected at least 3 runs, found " + std::to_string(runs.size()));
                std::size_t witnesses = 0;
                for (const auto& run : runs) {
                  if (verify_llee(run_to_labeling(c, run)).pass) ++witnesses;
                }
                expect(reason, witnesses >= 1, "no recorded run verifies");
              });

  h.criterion(3, "chart of f: 5 vertices, lee says NO, and it is its own collapse",
              [&](std::string& reason) {
                const Chart c = chart_of(p(kExprF));
                expect(reason, c.vertices.size() == 5, "expected 5 vertices");
                expect(reason, !lee(c).run.has_value(), "lee must report a definite NO");
                expect(reason, collapse(c).first.vertices.size() == 5,
                       "collapse must keep all 5 vertices");
              });

  h.criterion(4, "1-charts of e and f: vertex lists, projection bijections onto the charts",
              [&](std::string& reason) {
                const Chart one_e = onechart_of(p(kExprE));
                expect(reason, one_e.vertices.size() == 5, "1-chart of e must have 5 vertices");
                for (const char* id :
                     {kExprE, "((1 * a*).b*) * (a*.b*)*", "a*.b* * (a*.b*)*", "b* * (a*.b*)*",
                      "(1 * b*) * (a*.b*)*"}) {
                  expect(reason, one_e.has_vertex(id), std::string("missing vertex ") + id);
                }
                const Chart one_f = onechart_of(p(kExprF));
                expect(reason, one_f.vertices.size() == 5, "1-chart of f must have 5 vertices");

                for (const char* text : {kExprE, kExprF}) {
                  const Chart induced = restrict_reachable(induce(onechart_of(p(text))));
                  const Chart plain = chart_of(p(text));
                  VertexMap m;
                  std::set<VertexId> image;
                  for (const auto& [v, expr] : induced.exprs) {
                    m[v] = render(project(expr));
                    image.insert(m[v]);
                  }
                  expect(reason, check_functional_bisim(induced, plain, m).pass,
                         std::string("projection is not a bisimulation for ") + text);
                  expect(reason,
                         induced.vertices.size() == plain.vertices.size() &&
                             image.size() == plain.vertices.size(),
                         std::string("projection is not a vertex bijection for ") + text);
                }
              });

  h.criterion(5, "thm59 and thm514 exit 0 on the golden expressions (via the CLI)",
              [&](std::string& reason) {
                expect(reason, !cli_path.empty(), "CLI path not supplied");
                if (!reason.empty()) return;
                for (const std::string text :
                     {kExprE, kExprF, kExprG0, "0", "1", "a", "a*", "(a+1).b*", "a*.0"}) {
                  for (const std::string cmd : {"thm59", "thm514"}) {
                    const CommandResult r = run_command(cmd + " '" + text + "'");
                    expect(reason, r.exit_code == 0,
                           cmd + " '" + text + "' exited " + std::to_string(r.exit_code));
                  }
                }
              });

  h.criterion(6, "collapse of the chart of (a*.b*)*: one terminating vertex with a- and b-loops",
              [&](std::string& reason) {
                const auto [quotient, map] = collapse(chart_of(p(kExprE)));
                (void)map;
                expect(reason, quotient.vertices.size() == 1, "expected a single vertex");
                const VertexId v = quotient.start;
                expect(reason, quotient.is_terminating(v), "the vertex must terminate");
                const std::set<ChartTransition> expected{t(v, "a", v), t(v, "b", v)};
                expect(reason, quotient.transitions == expected,
                       "expected exactly an a-loop and a b-loop");
              });

  // One corpus pass feeds criteria 7 and 8.
  const CorpusConfig corpus_config{42, 200, 5, 3, 10000};
  CorpusReport report;
  bool corpus_ran = false;
  std::string corpus_error;
  try {
    report = run_corpus_checks(corpus_config, CorpusCheckSelection{});
    corpus_ran = true;
  } catch (const std::exception& err) {
    corpus_error = err.what();
  }

  const auto is_strategy_failure = [](const CorpusFailure& f) {
    return f.what.find("elimination strategy") != std::string::npos;
  };

  h.criterion(7, "property corpus (seed 42, 200 expressions): all checks pass, mutations behave",
              [&](std::string& reason) {
                expect(reason, corpus_ran, "corpus aborted: " + corpus_error);
                if (!reason.empty()) return;
                expect(reason, report.checked == 200, "expected 200 expressions");
                for (const auto& failure : report.failures) {
                  if (is_strategy_failure(failure)) continue;
                  expect(reason, false,
                         "index " + std::to_string(failure.index) + " (" + failure.expr +
                             "): " + failure.what);
                }
                expect(reason, report.mutation_total > 0, "no mutations were checked");
                expect(reason, report.mutation_failure_rate() >= 0.9,
                       "mutation failure rate below 0.9: " +
                           std::to_string(report.mutation_failure_rate()));
              });

  h.criterion(8, "elimination strategy yields a valid acyclic run on every corpus labeling",
              [&](std::string& reason) {
                expect(reason, corpus_ran, "corpus aborted: " + corpus_error);
                if (!reason.empty()) return;
                for (const auto& failure : report.failures) {
                  if (!is_strategy_failure(failure)) continue;
                  expect(reason, false,
                         "index " + std::to_string(failure.index) + " (" + failure.expr +
                             "): " + failure.what);
                }
              });

  h.criterion(9, "golden CLI commands are byte-deterministic",
              [&](std::string& reason) {
                expect(reason, !cli_path.empty(), "CLI path not supplied");
                if (!reason.empty()) return;
                const std::vector<std::string> commands{
                    std::string("parse '") + kExprG0 + "'",
                    std::string("chart '") + kExprE + "'",
                    std::string("chart '") + kExprG0 + "' --format dot",
                    std::string("onechart '") + kExprF + "'",
                    std::string("labeled '") + kExprE + "'",
                    std::string("labeled '") + kExprF + "' --format dot",
                    std::string("induce '") + kExprE + "' --gc",
                    std::string("lee --expr '") + kExprE + "'",
                    std::string("lee --expr '") + kExprG0 + "'",
                    std::string("thm59 '") + kExprF + "'",
                    std::string("thm514 '") + kExprE + "'",
                    std::string("collapse '") + kExprE + "'",
                };
                for (const auto& cmd : commands) {
                  const CommandResult first = run_command(cmd);
                  const CommandResult second = run_command(cmd);
                  expect(reason, first.exit_code == second.exit_code,
                         "exit codes differ for: " + cmd);
                  expect(reason, first.output == second.output, "outputs differ for: " + cmd);
                  expect(reason, !first.output.empty(), "no output for: " + cmd);
                }
                // pinned exit codes for the lee command family
                expect(reason, run_command(std::string("lee --expr '") + kExprE + "'").exit_code == 1,
                       "lee on the chart of e must exit 1");
                expect(reason, run_command(std::string("lee --expr '") + kExprG0 + "'").exit_code == 0,
                       "lee on the chart of g0 must exit 0");
              });

  return h.exit_code();
}
