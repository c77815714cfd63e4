#include "transfix/game.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>

#include "transfix/errors.hpp"

namespace transfix {

namespace {

constexpr const char* kModule = "game";

std::string profile_name(const StageGame& g, Profile p) { return "(" + g.actions_t[p.t] + "," + g.actions_m[p.m] + ")"; }

std::int64_t parse_int(const std::string& text, const std::string& whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(kModule, "malformed rational '" + whole + "'");
  }
  return v;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw PreconditionViolation(kModule, "rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n, d);
  num_ = n / (g == 0 ? 1 : g);
  den_ = d / (g == 0 ? 1 : g);
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text, text));
  return Rational(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
}

std::string Rational::to_string() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  return lhs < rhs ? std::strong_ordering::less : lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::equal;
}

void StageGame::validate() const {
  if (actions_t.empty() || actions_m.empty()) throw PreconditionViolation(kModule, "stage game with no actions");
  auto check = [&](const auto& table, const char* name) {
    if (table.size() != actions_t.size()) {
      throw PreconditionViolation(kModule, std::string(name) + " needs one row per T action");
    }
    for (const auto& row : table) {
      if (row.size() != actions_m.size()) {
        throw PreconditionViolation(kModule, std::string(name) + " needs one column per M action");
      }
    }
  };
  check(payoff_t, "payoff_t");
  check(payoff_m, "payoff_m");
  check(labels, "labels");
}

std::vector<Profile> StageGame::all_profiles() const {
  std::vector<Profile> out;
  out.reserve(actions_t.size() * actions_m.size());
  for (std::size_t t = 0; t < actions_t.size(); ++t) {
    for (std::size_t m = 0; m < actions_m.size(); ++m) out.push_back({t, m});
  }
  return out;
}

bool StageGame::is_nash(Profile p) const {
  if (p.t >= actions_t.size() || p.m >= actions_m.size()) return false;
  for (std::size_t t = 0; t < actions_t.size(); ++t) {
    if (payoff_t[t][p.m] > payoff_t[p.t][p.m]) return false;
  }
  for (std::size_t m = 0; m < actions_m.size(); ++m) {
    if (payoff_m[p.t][m] > payoff_m[p.t][p.m]) return false;
  }
  return true;
}

std::string StageGame::describe(Profile p) const { return profile_name(*this, p); }

void ReflectiveGameSpec::validate() const {
  if (stages.empty()) throw PreconditionViolation(kModule, "reflective game with no stages");
  for (std::size_t a = 0; a < stages.size(); ++a) {
    try {
      stages[a].validate();
    } catch (const PreconditionViolation& e) {
      throw PreconditionViolation(kModule, "stage " + std::to_string(a) + ": " + e.what());
    }
  }
  if (promotion.size() + 1 != stages.size()) {
    throw PreconditionViolation(kModule, "need one promotion rule per stage transition (" +
                                             std::to_string(stages.size() - 1) + "), got " +
                                             std::to_string(promotion.size()));
  }
  for (std::size_t a = 0; a + 1 < stages.size(); ++a) {
    const StageGame& next = stages[a + 1];
    for (const auto& [label, profiles] : promotion[a]) {
      for (Profile p : profiles) {
        if (p.t >= next.actions_t.size() || p.m >= next.actions_m.size()) {
          throw PreconditionViolation(kModule, "promotion " + std::to_string(a) + " label '" + label +
                                                   "' admits a profile outside stage " + std::to_string(a + 1));
        }
      }
    }
    for (Profile p : stages[a].all_profiles()) {
      auto it = promotion[a].find(stages[a].label(p));
      if (it == promotion[a].end() || it->second.empty()) {
        throw PreconditionViolation(kModule, "stage " + std::to_string(a) + " outcome '" + stages[a].label(p) +
                                                 "' has no admissible profiles in stage " + std::to_string(a + 1));
      }
    }
  }
}

const std::vector<Profile>& ReflectiveGameSpec::admissible_after(std::size_t stage, const std::string& label) const {
  return promotion.at(stage).at(label);
}

std::vector<Profile> stage_equilibria(const StageGame& g, std::span<const Profile> admissible) {
  std::vector<Profile> out;
  for (Profile p : admissible) {
    if (g.is_nash(p)) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Profile> efficient_equilibria(const StageGame& g, std::span<const Profile> admissible) {
  const std::vector<Profile> eqs = stage_equilibria(g, admissible);
  std::vector<Profile> out;
  for (Profile p : eqs) {
    const Rational& pt = g.payoff_t[p.t][p.m];
    const Rational& pm = g.payoff_m[p.t][p.m];
    const bool dominated = std::any_of(eqs.begin(), eqs.end(), [&](Profile q) {
      const Rational& qt = g.payoff_t[q.t][q.m];
      const Rational& qm = g.payoff_m[q.t][q.m];
      return qt >= pt && qm >= pm && (qt > pt || qm > pm);
    });
    if (!dominated) out.push_back(p);
  }
  return out;
}

namespace {

std::vector<Profile> admissible_at(const ReflectiveGameSpec& spec, std::size_t stage,
                                   const std::vector<std::string>& outcomes) {
  if (stage == 0) return spec.stages[0].all_profiles();
  return spec.admissible_after(stage - 1, outcomes[stage - 1]);
}

}  // namespace

std::optional<std::string> verify_equilibrium(const ReflectiveGameSpec& spec, const ReflectiveEquilibrium& eq) {
  const std::size_t k = spec.stages.size();
  if (eq.profiles.size() != k || eq.outcomes.size() != k) return "equilibrium does not cover every stage";
  for (std::size_t a = 0; a < k; ++a) {
    const StageGame& g = spec.stages[a];
    const Profile p = eq.profiles[a];
    if (p.t >= g.actions_t.size() || p.m >= g.actions_m.size()) {
      return "stage " + std::to_string(a) + ": profile out of range";
    }
    if (g.label(p) != eq.outcomes[a]) return "stage " + std::to_string(a) + ": recorded outcome does not match profile";
    if (!g.is_nash(p)) return "stage " + std::to_string(a) + ": " + g.describe(p) + " is not a Nash equilibrium";
    if (a > 0) {
      const auto& adm = spec.admissible_after(a - 1, eq.outcomes[a - 1]);
      if (std::find(adm.begin(), adm.end(), p) == adm.end()) {
        return "stage " + std::to_string(a) + ": " + g.describe(p) + " is not admissible after '" +
               eq.outcomes[a - 1] + "'";
      }
    }
  }
  if (eq.final_outcome != eq.outcomes.back()) return "final outcome does not match the last stage";
  if (!spec.wins(eq.final_outcome)) return "final outcome '" + eq.final_outcome + "' violates the winning condition";
  return std::nullopt;
}

StitchResult stitch_equilibrium(const ReflectiveGameSpec& spec) {
  spec.validate();
  ReflectiveEquilibrium eq;
  for (std::size_t a = 0; a < spec.stages.size(); ++a) {
    const StageGame& g = spec.stages[a];
    const std::vector<Profile> candidates = efficient_equilibria(g, admissible_at(spec, a, eq.outcomes));
    if (candidates.empty()) return StitchFailure{a, "no admissible equilibrium"};
    Profile chosen = candidates.front();
    if (a > 0) {
      auto same = std::find_if(candidates.begin(), candidates.end(),
                               [&](Profile p) { return g.label(p) == eq.outcomes.back(); });
      if (same != candidates.end()) chosen = *same;
    }
    eq.profiles.push_back(chosen);
    eq.outcomes.push_back(g.label(chosen));
  }
  eq.final_outcome = eq.outcomes.back();
  if (auto problem = verify_equilibrium(spec, eq)) {
    return StitchFailure{spec.stages.size() - 1, *problem};
  }
  eq.coherent = true;
  return eq;
}

std::size_t stabilization_stage(const ReflectiveEquilibrium& eq) {
  std::size_t b = eq.outcomes.size();
  while (b > 0 && eq.outcomes[b - 1] == eq.final_outcome) --b;
  return b;
}

namespace {

void check_bounds(const ReflectiveGameSpec& spec, EnumerationBounds bounds) {
  if (bounds.max_stages > kMaxEnumerationBounds.max_stages || bounds.max_actions > kMaxEnumerationBounds.max_actions) {
    throw PreconditionViolation(kModule, "enumeration bounds may not exceed " +
                                             std::to_string(kMaxEnumerationBounds.max_stages) + " stages and " +
                                             std::to_string(kMaxEnumerationBounds.max_actions) + " actions");
  }
  if (spec.stages.size() > bounds.max_stages) {
    throw CapExceeded(kModule, "spec has " + std::to_string(spec.stages.size()) + " stages, bound is " +
                                   std::to_string(bounds.max_stages));
  }
  for (std::size_t a = 0; a < spec.stages.size(); ++a) {
    const StageGame& g = spec.stages[a];
    if (g.actions_t.size() > bounds.max_actions || g.actions_m.size() > bounds.max_actions) {
      throw CapExceeded(kModule, "stage " + std::to_string(a) + " has more than " +
                                     std::to_string(bounds.max_actions) + " actions per player");
    }
  }
}

}  // namespace

std::vector<ReflectiveEquilibrium> enumerate_reflective_equilibria(const ReflectiveGameSpec& spec,
                                                                   EnumerationBounds bounds) {
  spec.validate();
  check_bounds(spec, bounds);
  std::vector<ReflectiveEquilibrium> found;
  ReflectiveEquilibrium partial;
  std::function<void(std::size_t)> descend = [&](std::size_t a) {
    if (a == spec.stages.size()) {
      ReflectiveEquilibrium eq = partial;
      eq.final_outcome = eq.outcomes.back();
      if (!verify_equilibrium(spec, eq)) {
        eq.coherent = true;
        found.push_back(std::move(eq));
      }
      return;
    }
    const StageGame& g = spec.stages[a];
    for (Profile p : efficient_equilibria(g, admissible_at(spec, a, partial.outcomes))) {
      partial.profiles.push_back(p);
      partial.outcomes.push_back(g.label(p));
      descend(a + 1);
      partial.profiles.pop_back();
      partial.outcomes.pop_back();
    }
  };
  descend(0);
  return found;
}

AssumptionReport check_assumptions(const ReflectiveGameSpec& spec, EnumerationBounds bounds) {
  spec.validate();
  check_bounds(spec, bounds);
  AssumptionReport report;
  const std::size_t k = spec.stages.size();

  // (c) Finite, nonempty action sets; guaranteed once the spec validates.
  for (std::size_t a = 0; a < k; ++a) {
    if (spec.stages[a].actions_t.empty() || spec.stages[a].actions_m.empty()) {
      report.finitary_local = false;
      report.witnesses.push_back("finitary: stage " + std::to_string(a) + " has an empty action set");
    }
  }

  // Reachable admissible sets per stage, keyed by the promoting label ("" at stage 0).
  std::vector<std::set<std::string>> reachable(k);
  reachable[0].insert("");
  for (std::size_t a = 0; a + 1 < k; ++a) {
    for (const std::string& key : reachable[a]) {
      const auto adm = a == 0 ? spec.stages[0].all_profiles() : spec.admissible_after(a - 1, key);
      for (Profile p : stage_equilibria(spec.stages[a], adm)) reachable[a + 1].insert(spec.stages[a].label(p));
    }
  }
  auto admissible = [&](std::size_t a, const std::string& key) {
    return a == 0 ? spec.stages[0].all_profiles() : spec.admissible_after(a - 1, key);
  };

  // (a) Once a winning label occurs on a promotion-consistent equilibrium
  // path, every later admissible equilibrium label must be winning.
  std::set<std::tuple<std::size_t, std::string, bool>> visited;
  std::function<void(std::size_t, const std::string&, std::optional<std::size_t>)> walk =
      [&](std::size_t a, const std::string& key, std::optional<std::size_t> won_at) {
        if (a == k || !visited.emplace(a, key, won_at.has_value()).second) return;
        const StageGame& g = spec.stages[a];
        for (Profile p : stage_equilibria(g, admissible(a, key))) {
          const std::string& label = g.label(p);
          if (won_at && !spec.wins(label)) {
            report.continuity_of_payoffs = false;
            report.witnesses.push_back("continuity: stage " + std::to_string(a) + " equilibrium " + g.describe(p) +
                                       " has losing label '" + label + "' after a winning label at stage " +
                                       std::to_string(*won_at));
          }
          std::optional<std::size_t> next_won = won_at;
          if (!next_won && spec.wins(label)) next_won = a;
          walk(a + 1, label, next_won);
        }
      };
  walk(0, "", std::nullopt);

  // (b) Common payoffs, and continuations promoted from a better equilibrium
  // outcome are weakly better than those promoted from a worse one.
  for (std::size_t a = 0; a < k; ++a) {
    if (!spec.stages[a].is_common_payoff()) {
      report.monotone_best_response = false;
      report.witnesses.push_back("monotonicity: stage " + std::to_string(a) + " is not common-payoff");
    }
  }
  if (report.monotone_best_response) {
    auto continuation = [&](std::size_t a, const std::string& label) -> std::optional<Rational> {
      const StageGame& g = spec.stages[a + 1];
      std::optional<Rational> best;
      for (Profile q : stage_equilibria(g, spec.admissible_after(a, label))) {
        if (!best || g.payoff_t[q.t][q.m] > *best) best = g.payoff_t[q.t][q.m];
      }
      return best;
    };
    for (std::size_t a = 0; a + 1 < k; ++a) {
      const StageGame& g = spec.stages[a];
      for (const std::string& key : reachable[a]) {
        const auto eqs = stage_equilibria(g, admissible(a, key));
        for (Profile p : eqs) {
          for (Profile q : eqs) {
            if (!(g.payoff_t[p.t][p.m] > g.payoff_t[q.t][q.m])) continue;
            const auto cp = continuation(a, g.label(p));
            const auto cq = continuation(a, g.label(q));
            if (cq && (!cp || *cp < *cq)) {
              report.monotone_best_response = false;
              report.witnesses.push_back("monotonicity: stage " + std::to_string(a) + " equilibrium " +
                                         g.describe(p) + " pays more than " + g.describe(q) +
                                         " but its promoted continuation is worse");
            }
          }
        }
      }
    }
  }
  return report;
}

ReflectiveGameSpec alignment_game(const FiniteLattice& l, const MonotoneOp& f, std::size_t horizon) {
  if (!f.verified() || f.table().size() != l.size()) {
    throw PreconditionViolation(kModule, "alignment game needs a verified monotone operator");
  }
  std::vector<ElementId> chain{l.bottom()};
  while (f(chain.back()) != chain.back()) chain.push_back(f(chain.back()));
  const std::size_t theta = chain.size() - 1;
  if (horizon < std::max<std::size_t>(theta, 1)) {
    throw PreconditionViolation(kModule, "horizon " + std::to_string(horizon) + " is below the closure stage " +
                                             std::to_string(theta));
  }

  ReflectiveGameSpec spec;
  for (std::size_t a = 0; a < horizon; ++a) {
    const ElementId state = chain[std::min(a, theta)];
    const bool fixed = f(state) == state;
    StageGame g;
    g.actions_t = {"probe", "accept"};
    g.actions_m = {"keep", "apply"};
    g.payoff_t.assign(2, std::vector<Rational>(2, Rational(0)));
    g.labels.assign(2, std::vector<std::string>(2));
    for (std::size_t t = 0; t < 2; ++t) {
      for (std::size_t m = 0; m < 2; ++m) {
        const bool accept_keep = t == 1 && m == 0;
        const bool probe_apply = t == 0 && m == 1;
        g.payoff_t[t][m] = Rational((fixed && accept_keep) || (!fixed && probe_apply) ? 1 : 0);
        g.labels[t][m] = l.label(m == 1 ? f(state) : state);
      }
    }
    g.payoff_m = g.payoff_t;
    spec.stages.push_back(std::move(g));
  }
  // Every outcome of stage a promotes to the full profile set of stage a+1,
  // which is played on the next chain state.
  for (std::size_t a = 0; a + 1 < horizon; ++a) {
    std::map<std::string, std::vector<Profile>> rule;
    const auto next_profiles = spec.stages[a + 1].all_profiles();
    for (Profile p : spec.stages[a].all_profiles()) rule[spec.stages[a].label(p)] = next_profiles;
    spec.promotion.push_back(std::move(rule));
  }
  for (ElementId x : fixed_points(l, f)) spec.win.insert(l.label(x));
  return spec;
}

CorrespondenceResult correspondence_check(const FiniteLattice& l, const MonotoneOp& f) {
  CorrespondenceResult result;
  result.lattice_sequence = kleene_chain(l, f);
  const std::size_t theta = result.lattice_sequence.size() - 1;
  const ReflectiveGameSpec spec = alignment_game(l, f, std::max<std::size_t>(theta, 1));
  const StitchResult stitched = stitch_equilibrium(spec);
  if (const auto* failure = std::get_if<StitchFailure>(&stitched)) {
    result.diagnostics = "stitching failed at stage " + std::to_string(failure->stage) + ": " + failure->reason;
    return result;
  }
  const auto& eq = std::get<ReflectiveEquilibrium>(stitched);
  result.game_states.push_back(l.bottom());
  for (const std::string& label : eq.outcomes) {
    const auto state = l.find(label);
    if (!state) {
      result.diagnostics = "outcome '" + label + "' is not a lattice element";
      return result;
    }
    if (*state == result.game_states.back()) break;
    result.game_states.push_back(*state);
  }
  const ElementId final_state = result.game_states.back();
  if (result.game_states != result.lattice_sequence) {
    result.diagnostics = "equilibrium state sequence differs from the Kleene chain";
    return result;
  }
  if (f(final_state) != final_state) {
    result.diagnostics = "final interpretation " + l.label(final_state) + " is not a fixed point";
    return result;
  }
  result.ok = true;
  return result;
}

ReflectiveGameSpec continuity_counterexample() {
  ReflectiveGameSpec spec;
  StageGame g0;
  g0.actions_t = {"x", "y"};
  g0.actions_m = {"x", "y"};
  g0.payoff_t = {{1, 0}, {0, 1}};
  g0.payoff_m = g0.payoff_t;
  g0.labels = {{"x", "miss"}, {"miss", "y"}};

  // Stage 1 pays 2 on a/a and c/c but only 1 on b/b, whose label loses.
  StageGame g1;
  g1.actions_t = {"a", "b", "c"};
  g1.actions_m = {"a", "b", "c"};
  g1.payoff_t = {{2, 0, 0}, {0, 1, 0}, {0, 0, 2}};
  g1.payoff_m = g1.payoff_t;
  g1.labels = {{"win-x", "miss", "miss"}, {"miss", "lose", "miss"}, {"miss", "miss", "win-y"}};

  spec.stages = {g0, g1};
  spec.promotion.push_back({
      {"x", {{0, 0}, {1, 1}}},
      {"y", {{2, 2}}},
      {"miss", g1.all_profiles()},
  });
  spec.win = {"x", "win-x", "win-y"};
  return spec;
}

}  // namespace transfix
