#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "transfix/errors.hpp"
#include "transfix/scenario.hpp"

namespace transfix {
namespace {

namespace fs = std::filesystem;

std::vector<fs::path> corpus() {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(TRANSFIX_SCENARIO_DIR)) {
    if (entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string parse_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(ScenarioCorpus, RoundTripAndDeterminism) {
  const auto files = corpus();
  ASSERT_GE(files.size(), 10u);
  for (const auto& p : files) {
    SCOPED_TRACE(p.filename().string());
    const Scenario s = parse_scenario(slurp(p));
    const Json printed = to_json(s);
    EXPECT_EQ(parse_scenario(printed.dump()), s);
    EXPECT_EQ(to_json(parse_scenario(printed)), printed);
    const auto a = run_scenario(s);
    const auto b = run_scenario(s);
    EXPECT_EQ(a.json.dump(), b.json.dump());
    EXPECT_FALSE(a.json.contains("timing_ms"));
    EXPECT_TRUE(verify_document(a.json).ok);
    EXPECT_TRUE(verify_document(printed).ok);
  }
}

TEST(ParseScenario, MinimalAndErrors) {
  const Scenario s = parse_scenario(R"({"kind":"kripke","sentences":{"A":{"atom":true}}})");
  EXPECT_EQ(s.kind(), "kripke");
  EXPECT_NE(parse_error(R"({"kind":"bogus"})").find("unknown scenario kind \"bogus\""), std::string::npos);
  EXPECT_NE(parse_error("{\"kind\":").find("malformed JSON"), std::string::npos);
  const std::string overlap = parse_error(R"({"kind":"ordinal-transfinite","regions":[
      {"lo":"0","hi":"w*2","inc":"1"},{"lo":"w","inc":"0"}]})");
  EXPECT_NE(overlap.find("$.regions"), std::string::npos) << overlap;
  EXPECT_NE(overlap.find("overlaps"), std::string::npos) << overlap;
  const std::string missing = parse_error(R"({"kind":"lattice-lfp","universe":["a"],"op":{"[]":["a"]}})");
  EXPECT_NE(missing.find("$.op"), std::string::npos) << missing;
  const std::string stray = parse_error(R"({"kind":"kripke","sentences":{"A":{"atom":true}},"extra":1})");
  EXPECT_NE(stray.find("$.extra"), std::string::npos) << stray;
  const std::string bad_ordinal = parse_error(R"({"kind":"ordinal-transfinite","regions":[{"lo":"0","inc":"w^"}]})");
  EXPECT_NE(bad_ordinal.find("$.regions[0].inc"), std::string::npos) << bad_ordinal;
  const std::string dangling = parse_error(R"({"kind":"kripke","sentences":{"A":{"tr":"B"}}})");
  EXPECT_FALSE(dangling.empty());
}

TEST(ParseScenario, NonMonotoneOperatorIsAnError) {
  const Scenario s = parse_scenario(R"({"kind":"lattice-lfp","chain":2,"op":{"0":"1","1":"0"}})");
  EXPECT_THROW(run_scenario(s), PreconditionViolation);
}

TEST(RunScenario, TextExamples) {
  const auto dir = fs::path(TRANSFIX_SCENARIO_DIR);
  auto text = [&](const char* name) { return format_text(run_scenario(parse_scenario(slurp(dir / name))).json); };
  EXPECT_NE(text("omega2.json").find("theta = w*2"), std::string::npos);
  EXPECT_NE(text("liar.json").find("L: ungrounded"), std::string::npos);
  EXPECT_NE(text("correspondence_ab.json").find("correspondence: OK"), std::string::npos);
  const auto lists = run_scenario(parse_scenario(slurp(dir / "lists.json")));
  EXPECT_EQ(lists.exit_code(), 2);
  EXPECT_EQ(lists.json["trace"]["growth"], Json({0, 1, 2, 3, 4, 5, 6, 7, 8}));
}

TEST(RunScenario, BudgetOverridesAreEmbedded) {
  const Scenario s = parse_scenario(slurp(fs::path(TRANSFIX_SCENARIO_DIR) / "omega2.json"));
  RunOptions opt;
  opt.budget_jumps = 1;
  const auto r = run_scenario(s, opt);
  EXPECT_EQ(r.verdict, Verdict::kDiverged);
  EXPECT_EQ(r.json["scenario"]["budget"]["jumps"], 1);
  EXPECT_TRUE(verify_document(r.json).ok);
}

TEST(VerifyDocument, DetectsEdits) {
  const Scenario s = parse_scenario(slurp(fs::path(TRANSFIX_SCENARIO_DIR) / "omega2.json"));
  const Json report = run_scenario(s).json;
  Json theta = report;
  theta["verdict"]["theta"] = "w+1";
  EXPECT_FALSE(verify_document(theta).ok);
  Json value = report;
  value["trace"]["fixed_value"] = "w*2+1";
  EXPECT_FALSE(verify_document(value).ok);
  Json stage = report;
  stage["trace"]["stages"][1]["value"] = "7";
  EXPECT_FALSE(verify_document(stage).ok);
  Json check = report;
  check["checks"]["verify_fixed"] = false;
  EXPECT_FALSE(verify_document(check).ok);

  const Scenario lat = parse_scenario(slurp(fs::path(TRANSFIX_SCENARIO_DIR) / "powerset_lfp.json"));
  Json lr = run_scenario(lat).json;
  lr["trace"]["fixed_value"] = "[\"a\"]";
  EXPECT_FALSE(verify_document(lr).ok);
}

TEST(Enumerate, GameAndCorrespondence) {
  const auto dir = fs::path(TRANSFIX_SCENARIO_DIR);
  const Json cx = enumerate_scenario(parse_scenario(slurp(dir / "continuity_counterexample.json")));
  EXPECT_EQ(cx["count"], 2);
  EXPECT_FALSE(cx["unique_outcome_sequence"].get<bool>());
  const Json ab = enumerate_scenario(parse_scenario(slurp(dir / "correspondence_ab.json")));
  EXPECT_TRUE(ab["unique_outcome_sequence"].get<bool>());
  EXPECT_THROW(enumerate_scenario(parse_scenario(slurp(dir / "liar.json"))), PreconditionViolation);
}

TEST(Suite, DeterministicPerSeed) {
  const Json a = run_suite(7);
  EXPECT_EQ(a.dump(), run_suite(7).dump());
  EXPECT_EQ(a["failures"], 0) << a.dump(2);
  EXPECT_NE(a["batteries"]["lattice"]["digest"], run_suite(8)["batteries"]["lattice"]["digest"]);
}

}  // namespace
}  // namespace transfix
