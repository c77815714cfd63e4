#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "transfix/engine.hpp"
#include "transfix/fincat.hpp"
#include "transfix/game.hpp"
#include "transfix/kripke.hpp"
#include "transfix/lattice.hpp"

namespace transfix {

using Json = nlohmann::json;

/// How a scenario names its lattice: a powerset, a closed family of subsets of
/// a universe, or a chain 0 < 1 < ... < n-1.
struct LatticeSource {
  std::vector<std::string> universe;
  std::optional<std::vector<std::vector<std::string>>> elements;
  std::optional<std::size_t> chain;

  FiniteLattice build() const;
  friend bool operator==(const LatticeSource&, const LatticeSource&) = default;
};

enum class LatticeMode { kLfp, kGfp, kAllFixedPoints };

struct LatticeScenario {
  LatticeSource source;
  std::vector<ElementId> op;  // indexed by the built lattice's element ids
  LatticeMode mode = LatticeMode::kLfp;
  friend bool operator==(const LatticeScenario&, const LatticeScenario&) = default;
};

struct OrdinalScenario {
  std::vector<StepRegion> regions;
  Ordinal start;
  TransfiniteBudget budget;
  friend bool operator==(const OrdinalScenario& a, const OrdinalScenario& b) {
    return a.regions == b.regions && a.start == b.start && a.budget.max_finite_steps == b.budget.max_finite_steps &&
           a.budget.max_limit_jumps == b.budget.max_limit_jumps;
  }
};

struct AlgebraScenario {
  PolyFunctor functor;
  std::size_t budget = 10;
  friend bool operator==(const AlgebraScenario&, const AlgebraScenario&) = default;
};

struct KripkeScenario {
  SentenceSystem system;
  friend bool operator==(const KripkeScenario&, const KripkeScenario&) = default;
};

struct GameScenario {
  ReflectiveGameSpec spec;
  friend bool operator==(const GameScenario&, const GameScenario&) = default;
};

struct CorrespondenceScenario {
  LatticeSource source;
  std::vector<ElementId> op;
  friend bool operator==(const CorrespondenceScenario&, const CorrespondenceScenario&) = default;
};

using ScenarioBody = std::variant<LatticeScenario, OrdinalScenario, AlgebraScenario, KripkeScenario, GameScenario,
                                  CorrespondenceScenario>;

struct Scenario {
  std::string id;
  ScenarioBody body;

  std::string kind() const;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses and validates scenario JSON text. Throws ParseError naming the
/// offending path and what was expected, or the unknown kind.
Scenario parse_scenario(const std::string& text);
Scenario parse_scenario(const Json& doc);
inline Scenario parse_scenario(const char* text) { return parse_scenario(std::string(text)); }

/// Canonical JSON form; parse_scenario(to_json(s)) == s.
Json to_json(const Scenario& s);

struct RunOptions {
  std::optional<std::uint64_t> budget_steps;
  std::optional<std::uint64_t> budget_jumps;
  std::optional<std::size_t> max_stages;
  bool timing = false;
};

enum class Verdict { kFixed, kDiverged, kFailure };

struct RunReport {
  Verdict verdict = Verdict::kFixed;
  Json json;  // keys sorted; no timing unless requested

  /// 0 Fixed, 2 Diverged or Failure.
  int exit_code() const { return verdict == Verdict::kFixed ? 0 : 2; }
};

/// Runs a validated scenario. Module errors propagate as transfix::Error.
RunReport run_scenario(const Scenario& s, const RunOptions& options = {});

/// Aligned human-readable rendering of a report: stage table, theta in the
/// ordinal grammar, and kind-specific summary lines.
std::string format_text(const Json& report);

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Accepts a scenario or a RunReport. A report is re-run from its embedded
/// scenario and every recorded claim (verdict, theta, trace, checks) is
/// compared with the recomputation; recorded ordinal and lattice traces are
/// also re-checked structurally. A scenario is run and its checks must hold.
VerifyResult verify_document(const Json& doc, const RunOptions& options = {});

/// Enumerates reflective equilibria of a reflective-game scenario, or of the
/// alignment game of a correspondence scenario.
Json enumerate_scenario(const Scenario& s, const RunOptions& options = {});

/// Seeded property batteries over every module; the output depends only on
/// the seed.
Json run_suite(std::uint64_t seed);

}  // namespace transfix
