#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "transfix/lattice.hpp"

namespace transfix {

/// Exact payoff value p/q with q > 0 in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d);

  /// Accepts "3", "-1", "1/2".
  static Rational parse(const std::string& text);
  std::string to_string() const;

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);
  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// A pure-strategy profile: row player T's action, column player M's action.
struct Profile {
  std::size_t t = 0;
  std::size_t m = 0;
  friend auto operator<=>(const Profile&, const Profile&) = default;
};

/// Two-player normal-form game with an outcome label on every profile.
struct StageGame {
  std::vector<std::string> actions_t;
  std::vector<std::string> actions_m;
  std::vector<std::vector<Rational>> payoff_t;  // [t][m]
  std::vector<std::vector<Rational>> payoff_m;
  std::vector<std::vector<std::string>> labels;

  /// Throws PreconditionViolation on empty action lists or ragged tables.
  void validate() const;

  std::vector<Profile> all_profiles() const;
  const std::string& label(Profile p) const { return labels[p.t][p.m]; }
  bool is_common_payoff() const { return payoff_t == payoff_m; }
  /// No unilateral deviation over the full action sets improves the deviator.
  bool is_nash(Profile p) const;
  std::string describe(Profile p) const;

  friend bool operator==(const StageGame&, const StageGame&) = default;
};

/// Stages G_0..G_k, promotion rules between consecutive stages (outcome label
/// of G_a -> admissible profiles of G_{a+1}), and the winning labels W.
struct ReflectiveGameSpec {
  std::vector<StageGame> stages;
  std::vector<std::map<std::string, std::vector<Profile>>> promotion;  // size stages - 1
  std::set<std::string> win;

  /// Throws PreconditionViolation when a stage is malformed, a promoted
  /// profile is out of range, or some outcome label of G_a has no nonempty
  /// admissible set in G_{a+1}.
  void validate() const;

  const std::vector<Profile>& admissible_after(std::size_t stage, const std::string& label) const;
  bool wins(const std::string& label) const { return win.contains(label); }

  friend bool operator==(const ReflectiveGameSpec&, const ReflectiveGameSpec&) = default;
};

struct ReflectiveEquilibrium {
  std::vector<Profile> profiles;
  std::vector<std::string> outcomes;
  std::string final_outcome;
  bool coherent = false;

  friend bool operator==(const ReflectiveEquilibrium&, const ReflectiveEquilibrium&) = default;
};

struct StitchFailure {
  std::size_t stage = 0;
  std::string reason;
};

using StitchResult = std::variant<ReflectiveEquilibrium, StitchFailure>;

/// Pure Nash equilibria inside `admissible`, in canonical (t, m) order.
std::vector<Profile> stage_equilibria(const StageGame& g, std::span<const Profile> admissible);

/// The equilibria of stage_equilibria not Pareto-dominated (in both players'
/// payoffs) by another admissible equilibrium. These are the selectable
/// equilibria of a reflective equilibrium.
std::vector<Profile> efficient_equilibria(const StageGame& g, std::span<const Profile> admissible);

/**
 * Stitches per-stage equilibria into a reflective equilibrium: stage 0 takes
 * the first selectable equilibrium; each later stage restricts to the
 * promoted admissible set of the previous outcome and prefers a profile that
 * repeats that outcome before falling back to canonical order. The result is
 * re-verified (Nash on the full game, promotion, W) before `coherent` is set.
 */
StitchResult stitch_equilibrium(const ReflectiveGameSpec& spec);

/// Describes the first way `eq` fails to be a reflective equilibrium of
/// `spec`, or nullopt if it is one.
std::optional<std::string> verify_equilibrium(const ReflectiveGameSpec& spec, const ReflectiveEquilibrium& eq);

/// Least stage b with outcomes[a] == final outcome for every a >= b.
std::size_t stabilization_stage(const ReflectiveEquilibrium& eq);

struct EnumerationBounds {
  std::size_t max_stages = 4;
  std::size_t max_actions = 4;
};

inline constexpr EnumerationBounds kMaxEnumerationBounds{4, 4};

/// Every reflective equilibrium, in canonical order of profile sequences.
/// Throws CapExceeded when the spec is larger than `bounds`, and
/// PreconditionViolation when `bounds` exceed kMaxEnumerationBounds.
std::vector<ReflectiveEquilibrium> enumerate_reflective_equilibria(const ReflectiveGameSpec& spec,
                                                                   EnumerationBounds bounds = {});

/// Sufficient-condition check of the three hypotheses under which the
/// reflective outcome is unique.
struct AssumptionReport {
  bool continuity_of_payoffs = true;
  bool monotone_best_response = true;
  bool finitary_local = true;
  std::vector<std::string> witnesses;

  bool all() const { return continuity_of_payoffs && monotone_best_response && finitary_local; }
};

AssumptionReport check_assumptions(const ReflectiveGameSpec& spec, EnumerationBounds bounds = {});

/**
 * Common-payoff stage games whose equilibrium path replays the Kleene chain of
 * f from bottom. Stage a is played on the chain state M_a; T chooses
 * probe/accept, M chooses keep/apply. Payoff 1 for accept/keep on a fixed
 * state or probe/apply on a non-fixed one, else 0. The outcome label is the
 * successor state's lattice label. W is the set of fixed-point labels.
 * Precondition: f verified; horizon >= max(closure stage, 1).
 */
ReflectiveGameSpec alignment_game(const FiniteLattice& l, const MonotoneOp& f, std::size_t horizon);

struct CorrespondenceResult {
  bool ok = false;
  std::vector<ElementId> game_states;
  std::vector<ElementId> lattice_sequence;
  std::string diagnostics;
};

/// Builds the alignment game, stitches it, reads the interpretation states
/// M_0 = bottom, M_{a+1} = outcome of stage a (up to the first repeat), and
/// compares them with the Kleene chain of f.
CorrespondenceResult correspondence_check(const FiniteLattice& l, const MonotoneOp& f);

/// Two-stage spec violating continuity of payoffs: a winning stage-0 outcome
/// can be followed by a losing equilibrium, and two selectable equilibrium
/// paths end in different winning outcomes.
ReflectiveGameSpec continuity_counterexample();

}  // namespace transfix
