#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "loopchart/bisim.hpp"
#include "loopchart/chart.hpp"
#include "loopchart/corpus.hpp"
#include "loopchart/lee.hpp"

namespace {

using namespace loopchart;

std::size_t default_cap() {
  if (const char* env = std::getenv("LOOPCHART_CAP")) {
    try {
      const long long parsed = std::stoll(env);
      if (parsed >= 1) return static_cast<std::size_t>(parsed);
    } catch (const std::exception&) {
      // fall through to the built-in default
    }
    std::cerr << "warning: ignoring invalid LOOPCHART_CAP value '" << env << "'\n";
  }
  return kDefaultVertexCap;
}

Chart load_chart_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ChartFormatError("cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return chart_from_json(j);
}

// Arguments starting with '@' name chart JSON files; anything else is an
// expression.
bool is_file_argument(const std::string& arg) { return !arg.empty() && arg[0] == '@'; }

std::string file_path(const std::string& arg) { return arg.substr(1); }

void print_chart(const Chart& chart, const std::string& format) {
  if (format == "dot") {
    std::cout << chart_to_dot(chart);
  } else {
    std::cout << chart_to_json(chart).dump(2) << "\n";
  }
}

int run_corpus(const CorpusConfig& config, const std::string& check_list) {
  CorpusCheckSelection select{false, false, false};
  std::stringstream ss(check_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "thm59") {
      select.projection = true;
    } else if (item == "thm514") {
      select.witness = true;
    } else if (item == "props") {
      select.props = true;
    } else if (!item.empty()) {
      throw CLI::ValidationError("--check", "unknown check '" + item + "'");
    }
  }

  const CorpusReport report = run_corpus_checks(config, select);
  for (const auto& failure : report.failures) {
    nlohmann::ordered_json j;
    j["index"] = failure.index;
    j["expr"] = failure.expr;
    j["what"] = failure.what;
    std::cout << j.dump() << "\n";
  }
  std::cout << "checked " << report.checked << " expressions: "
            << (report.all_passed() ? "all passed"
                                    : std::to_string(report.failures.size()) + " failures")
            << "\n";
  if (report.mutation_total > 0) {
    std::cout << "mutations: " << report.mutation_failed << "/" << report.mutation_total
              << " rejected\n";
  }
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"process charts of star expressions: generation, loop elimination, witnesses"};
  app.require_subcommand(1);

  std::function<int()> action;

  std::string expr_text;
  std::string format = "json";
  std::size_t cap = default_cap();
  std::size_t budget = 200000;
  bool gc = false;
  bool alt = false;

  auto* parse_cmd = app.add_subcommand("parse", "echo the canonical form of an expression");
  parse_cmd->add_option("EXPR", expr_text, "expression text")->required();
  parse_cmd->callback([&] {
    action = [&]() {
      std::cout << render(parse_star_expr(expr_text)) << "\n";
      return 0;
    };
  });

  const auto add_generator = [&](const char* name, const char* help, Chart (*make)(const StarExpr&, std::size_t)) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("EXPR", expr_text, "expression text")->required();
    cmd->add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
    cmd->add_option("--cap", cap, "vertex cap");
    cmd->callback([&, make] {
      action = [&, make]() {
        print_chart(make(parse_star_expr(expr_text), cap), format);
        return 0;
      };
    });
  };
  add_generator("chart", "chart interpretation of an expression", &chart_of);
  add_generator("onechart", "1-chart interpretation of an expression", &onechart_of);
  add_generator("labeled", "entry/body-labeled 1-chart of an expression", &labeled_onechart_of);

  std::string source;
  auto* induce_cmd = app.add_subcommand("induce", "empty-step closure of a 1-chart");
  induce_cmd->add_option("FILE_OR_EXPR", source, "@file with chart JSON, or an expression")
      ->required();
  induce_cmd->add_flag("--gc", gc, "prune unreachable vertices afterwards");
  induce_cmd->add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
  induce_cmd->add_option("--cap", cap, "vertex cap");
  induce_cmd->callback([&] {
    action = [&]() {
      Chart chart = is_file_argument(source) ? load_chart_file(file_path(source))
                                             : onechart_of(parse_star_expr(source), cap);
      Chart induced = induce(chart);
      if (gc) induced = restrict_reachable(induced);
      print_chart(induced, format);
      return 0;
    };
  });

  std::string lee_file;
  auto* lee_cmd = app.add_subcommand("lee", "search for a successful loop-elimination run");
  lee_cmd->add_option("FILE", lee_file, "chart JSON file");
  lee_cmd->add_option("--expr", expr_text, "expression; its chart interpretation is searched");
  lee_cmd->add_option("--budget", budget, "search budget (distinct charts)");
  lee_cmd->add_option("--cap", cap, "vertex cap");
  lee_cmd->callback([&] {
    action = [&]() {
      Chart chart = [&] {
        if (!lee_file.empty()) {
          return load_chart_file(is_file_argument(lee_file) ? file_path(lee_file) : lee_file);
        }
        if (expr_text.empty()) {
          throw CLI::RequiredError("lee needs a FILE or --expr");
        }
        return chart_of(parse_star_expr(expr_text), cap);
      }();
      try {
        const LeeResult result = lee(chart, LeeOptions{budget});
        if (result.run) {
          std::cout << run_to_json(*result.run).dump(2) << "\n";
          return 0;
        }
        std::cout << "NO\n";
        return 1;
      } catch (const BudgetExceededError&) {
        std::cout << "BUDGET\n";
        return 2;
      }
    };
  });

  std::string chart_file;
  auto* llee_cmd = app.add_subcommand("llee-verify", "check an entry/body-labeling");
  llee_cmd->add_option("FILE", chart_file, "labeled chart JSON file")->required();
  llee_cmd->add_flag("--alt", alt, "use the path-condition verifier");
  llee_cmd->callback([&] {
    action = [&]() {
      const Chart chart = load_chart_file(is_file_argument(chart_file) ? file_path(chart_file)
                                                                       : chart_file);
      const LLEEVerdict verdict = alt ? verify_llee_alt(chart) : verify_llee(chart);
      nlohmann::ordered_json j;
      j["pass"] = verdict.pass;
      if (!verdict.pass) {
        j["condition"] = verdict.condition;
        j["detail"] = verdict.detail;
      }
      std::cout << j.dump(2) << "\n";
      return verdict.pass ? 0 : 1;
    };
  });

  std::string left_file;
  std::string right_file;
  auto* bisim_cmd = app.add_subcommand("bisim", "decide bisimilarity of two charts");
  bisim_cmd->add_option("FILE1", left_file, "chart JSON file")->required();
  bisim_cmd->add_option("FILE2", right_file, "chart JSON file")->required();
  bisim_cmd->callback([&] {
    action = [&]() {
      const Chart g1 = load_chart_file(is_file_argument(left_file) ? file_path(left_file)
                                                                   : left_file);
      const Chart g2 = load_chart_file(is_file_argument(right_file) ? file_path(right_file)
                                                                    : right_file);
      const auto relation = bisimilar(g1, g2);
      nlohmann::ordered_json j;
      if (relation) {
        auto pairs = nlohmann::ordered_json::array();
        for (const auto& [a, b] : relation->pairs) {
          pairs.push_back(nlohmann::ordered_json::array({a, b}));
        }
        j["pairs"] = std::move(pairs);
      } else {
        j["bisimilar"] = false;
      }
      std::cout << j.dump(2) << "\n";
      return relation ? 0 : 1;
    };
  });

  auto* collapse_cmd = app.add_subcommand("collapse", "bisimulation collapse of a chart");
  collapse_cmd->add_option("FILE_OR_EXPR", source, "@file with chart JSON, or an expression")
      ->required();
  collapse_cmd->add_option("--cap", cap, "vertex cap");
  collapse_cmd->callback([&] {
    action = [&]() {
      const Chart chart = is_file_argument(source) ? load_chart_file(file_path(source))
                                                   : chart_of(parse_star_expr(source), cap);
      const auto [quotient, map] = collapse(chart);
      nlohmann::ordered_json j;
      j["chart"] = chart_to_json(quotient);
      nlohmann::ordered_json mj;
      for (const auto& [v, w] : map) mj[v] = w;
      j["map"] = std::move(mj);
      std::cout << j.dump(2) << "\n";
      return 0;
    };
  });

  const auto add_check = [&](const char* name, const char* help,
                               CheckVerdict (*check)(const StarExpr&, std::size_t)) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("EXPR", expr_text, "expression text")->required();
    cmd->add_option("--cap", cap, "vertex cap");
    cmd->callback([&, check] {
      action = [&, check]() {
        const CheckVerdict verdict = check(parse_star_expr(expr_text), cap);
        nlohmann::ordered_json j;
        j["pass"] = verdict.pass;
        if (!verdict.pass) j["detail"] = verdict.detail;
        std::cout << j.dump(2) << "\n";
        return verdict.pass ? 0 : 1;
      };
    });
  };
  add_check("thm59",
              "check that the induced 1-chart projects onto the chart interpretation",
              &check_projection_bisimulation);
  add_check("thm514", "check that the generated labeling is a loop-elimination witness",
              &check_labeled_witness);

  CorpusConfig config;
  config.vertex_cap = default_cap();
  std::string check_list = "thm59,thm514,props";
  auto* corpus_cmd = app.add_subcommand("corpus", "randomized checks over generated expressions");
  corpus_cmd->add_option("--seed", config.seed, "generator seed")->required();
  corpus_cmd->add_option("--count", config.count, "number of expressions")->required();
  corpus_cmd->add_option("--max-depth", config.max_depth, "depth budget")->required();
  corpus_cmd->add_option("--alphabet", config.alphabet_size, "number of actions")->required();
  corpus_cmd->add_option("--check", check_list, "comma list of thm59,thm514,props");
  corpus_cmd->add_option("--cap", config.vertex_cap, "vertex cap");
  corpus_cmd->callback([&] { action = [&]() { return run_corpus(config, check_list); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action();
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
