#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "transfix/errors.hpp"
#include "transfix/scenario.hpp"

namespace {

using transfix::Json;

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw transfix::Error("cli", "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

Json read_json(const std::string& path) {
  const std::string text = read_input(path);
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw transfix::ParseError("scenario", path + ": malformed JSON");
  return doc;
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::string enumeration_text(const Json& e) {
  std::ostringstream out;
  out << e["count"].get<std::size_t>() << " reflective equilibria\n";
  for (const Json& eq : e["equilibria"]) {
    std::string profiles, outcomes;
    for (const Json& p : eq["profiles"]) profiles += (profiles.empty() ? "" : " ") + p.get<std::string>();
    for (const Json& o : eq["outcomes"]) outcomes += (outcomes.empty() ? "" : " ") + o.get<std::string>();
    out << "  " << profiles << "  ->  " << outcomes << "\n";
  }
  out << "unique outcome sequence: " << (e["unique_outcome_sequence"].get<bool>() ? "yes" : "no") << "\n";
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfinite fixed points, initial algebras, Kripke truth and reflective games"};
  app.require_subcommand(1);

  std::string input;
  bool as_json = false;
  transfix::RunOptions options;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", input, "Scenario or report JSON file ('-' for stdin)")->required();
    sub->add_flag("--json", as_json, "Emit JSON");
    sub->add_option("--budget-steps", options.budget_steps, "Finite step budget");
    sub->add_option("--budget-jumps", options.budget_jumps, "Limit jump budget");
    sub->add_option("--max-stages", options.max_stages, "Stage bound for exhaustive enumeration");
  };
  CLI::App* run = app.add_subcommand("run", "Run a scenario");
  add_common(run);
  run->add_flag("--timing", options.timing, "Include wall-clock timing in the output");
  CLI::App* verify = app.add_subcommand("verify", "Re-check a scenario or a run report");
  add_common(verify);
  CLI::App* enumerate = app.add_subcommand("enumerate", "Enumerate reflective equilibria");
  add_common(enumerate);
  CLI::App* suite = app.add_subcommand("suite", "Run the seeded property batteries");
  suite->add_option("--seed", seed, "Generator seed")->default_val(42);
  suite->add_flag("--json", as_json, "Emit JSON (the default for suite)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      const auto report = transfix::run_scenario(transfix::parse_scenario(read_input(input)), options);
      if (as_json) {
        print_json(report.json);
      } else {
        std::cout << transfix::format_text(report.json);
      }
      return report.exit_code();
    }
    if (verify->parsed()) {
      const auto result = transfix::verify_document(read_json(input), options);
      if (as_json) {
        print_json({{"ok", result.ok}, {"problems", result.problems}});
      } else if (result.ok) {
        std::cout << "verified: all claims recomputed\n";
      } else {
        for (const auto& p : result.problems) std::cout << "mismatch: " << p << "\n";
      }
      return result.ok ? 0 : 2;
    }
    if (enumerate->parsed()) {
      const Json e = transfix::enumerate_scenario(transfix::parse_scenario(read_input(input)), options);
      if (as_json) {
        print_json(e);
      } else {
        std::cout << enumeration_text(e);
      }
      return 0;
    }
    const Json report = transfix::run_suite(seed);
    print_json(report);
    return report["failures"].get<std::size_t>() == 0 ? 0 : 2;
  } catch (const transfix::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
