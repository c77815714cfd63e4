#include <gtest/gtest.h>

#include "transfix/errors.hpp"
#include "transfix/game.hpp"
#include "transfix/generators.hpp"

namespace transfix {
namespace {

StageGame coordination() {
  StageGame g;
  g.actions_t = {"l", "r"};
  g.actions_m = {"l", "r"};
  g.payoff_t = {{1, 0}, {0, 1}};
  g.payoff_m = g.payoff_t;
  g.labels = {{"L", "miss"}, {"miss", "R"}};
  return g;
}

StageGame pennies() {
  StageGame g;
  g.actions_t = {"h", "t"};
  g.actions_m = {"h", "t"};
  g.payoff_t = {{1, -1}, {-1, 1}};
  g.payoff_m = {{-1, 1}, {1, -1}};
  g.labels = {{"a", "b"}, {"c", "d"}};
  return g;
}

StageGame trivial(const std::string& label) {
  StageGame g;
  g.actions_t = {"x"};
  g.actions_m = {"x"};
  g.payoff_t = {{0}};
  g.payoff_m = {{0}};
  g.labels = {{label}};
  return g;
}

MonotoneOp verified(const FiniteLattice& l, std::vector<ElementId> t) {
  MonotoneOp f(std::move(t));
  EXPECT_TRUE(check_monotone(l, f));
  return f;
}

MonotoneOp union_with(const FiniteLattice& l, std::uint32_t mask) {
  std::vector<ElementId> t(l.size());
  for (ElementId x = 0; x < l.size(); ++x) t[x] = *l.find_mask(l.mask(x) | mask);
  return verified(l, t);
}

TEST(Rational, ParseAndOrder) {
  EXPECT_EQ(Rational::parse("2/4"), Rational(1, 2));
  EXPECT_EQ(Rational::parse("-3").to_string(), "-3");
  EXPECT_EQ(Rational(3, -6).to_string(), "-1/2");
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_THROW(Rational::parse("1/0"), PreconditionViolation);
  EXPECT_THROW(Rational::parse("x"), ParseError);
}

TEST(StageEquilibria, Examples) {
  const StageGame one = trivial("o");
  EXPECT_EQ(stage_equilibria(one, one.all_profiles()), (std::vector<Profile>{{0, 0}}));
  const StageGame c = coordination();
  EXPECT_EQ(stage_equilibria(c, c.all_profiles()), (std::vector<Profile>{{0, 0}, {1, 1}}));
  const StageGame p = pennies();
  EXPECT_TRUE(stage_equilibria(p, p.all_profiles()).empty());
}

TEST(StageEquilibria, DeviationsUseFullActionSets) {
  const StageGame c = coordination();
  // (0,1) is inadmissible-only; restricting to it does not make it stable.
  const std::vector<Profile> only{{0, 1}};
  EXPECT_TRUE(stage_equilibria(c, only).empty());
}

TEST(Stitch, SingleStageCoordination) {
  ReflectiveGameSpec spec{{coordination()}, {}, {"L", "R"}};
  const auto eq = std::get<ReflectiveEquilibrium>(stitch_equilibrium(spec));
  EXPECT_EQ(eq.profiles, (std::vector<Profile>{{0, 0}}));
  EXPECT_EQ(eq.final_outcome, "L");
  EXPECT_TRUE(eq.coherent);
}

TEST(Stitch, NoAdmissibleEquilibrium) {
  StageGame g1;
  g1.actions_t = {"a", "b"};
  g1.actions_m = {"a", "b"};
  g1.payoff_t = {{0, 0}, {1, 2}};  // T strictly prefers b
  g1.payoff_m = {{0, 1}, {0, 2}};  // M strictly prefers b
  g1.labels = {{"aa", "ab"}, {"ba", "bb"}};
  ReflectiveGameSpec spec{{trivial("s"), g1}, {{{"s", {{0, 0}, {0, 1}, {1, 0}}}}}, {"aa"}};
  const auto f = std::get<StitchFailure>(stitch_equilibrium(spec));
  EXPECT_EQ(f.stage, 1u);
  EXPECT_EQ(f.reason, "no admissible equilibrium");
}

TEST(Stitch, WinConditionViolation) {
  ReflectiveGameSpec spec{{coordination()}, {}, {"R"}};
  const auto f = std::get<StitchFailure>(stitch_equilibrium(spec));
  EXPECT_EQ(f.stage, 0u);
  EXPECT_NE(f.reason.find("winning condition"), std::string::npos);
}

TEST(Validate, RejectsMalformedSpecs) {
  ReflectiveGameSpec missing_rule{{coordination(), coordination()}, {{{"L", {{0, 0}}}}}, {"L"}};
  EXPECT_THROW(missing_rule.validate(), PreconditionViolation);
  ReflectiveGameSpec out_of_range{{trivial("s"), trivial("t")}, {{{"s", {{0, 3}}}}}, {"t"}};
  EXPECT_THROW(out_of_range.validate(), PreconditionViolation);
  StageGame ragged = coordination();
  ragged.payoff_m.pop_back();
  EXPECT_THROW((ReflectiveGameSpec{{ragged}, {}, {}}.validate()), PreconditionViolation);
}

TEST(Alignment, ChainTwoConstantTop) {
  const auto l = make_chain(2);
  const auto f = verified(l, {1, 1});
  const auto spec = alignment_game(l, f, 2);
  const auto eq = std::get<ReflectiveEquilibrium>(stitch_equilibrium(spec));
  ASSERT_EQ(eq.profiles.size(), 2u);
  EXPECT_EQ(spec.stages[0].describe(eq.profiles[0]), "(probe,apply)");
  EXPECT_EQ(spec.stages[1].describe(eq.profiles[1]), "(accept,keep)");
  EXPECT_TRUE(spec.wins(eq.final_outcome));
  EXPECT_THROW(alignment_game(l, f, 0), PreconditionViolation);
}

TEST(Alignment, SingleElementAndIdentity) {
  const auto one = make_chain(1);
  const auto f1 = verified(one, {0});
  const auto spec1 = alignment_game(one, f1, 1);
  const auto eq1 = std::get<ReflectiveEquilibrium>(stitch_equilibrium(spec1));
  EXPECT_EQ(spec1.stages[0].describe(eq1.profiles[0]), "(accept,keep)");
  EXPECT_TRUE(spec1.wins(eq1.outcomes[0]));

  const auto l = make_powerset({"a", "b"});
  const auto id = verified(l, MonotoneOp::identity(l).table());
  const auto spec = alignment_game(l, id, 3);
  const auto eq = std::get<ReflectiveEquilibrium>(stitch_equilibrium(spec));
  for (std::size_t a = 0; a < 3; ++a) EXPECT_EQ(spec.stages[a].describe(eq.profiles[a]), "(accept,keep)");
  EXPECT_EQ(eq.final_outcome, "[]");
}

TEST(Alignment, PowersetUnionA) {
  const auto l = make_powerset({"a", "b"});
  const auto f = union_with(l, 0b01);
  const auto spec = alignment_game(l, f, 2);
  const auto eq = std::get<ReflectiveEquilibrium>(stitch_equilibrium(spec));
  EXPECT_EQ(spec.stages[0].describe(eq.profiles[0]), "(probe,apply)");
  EXPECT_EQ(spec.stages[1].describe(eq.profiles[1]), "(accept,keep)");
  EXPECT_EQ(eq.outcomes, (std::vector<std::string>{"[\"a\"]", "[\"a\"]"}));
  EXPECT_EQ(stabilization_stage(eq), 0u);
  EXPECT_EQ(verify_equilibrium(spec, eq), std::nullopt);
}

TEST(Assumptions, AlignmentAndSingleStage) {
  const auto l = make_powerset({"a", "b", "c"});
  const auto f = union_with(l, 0b011);
  EXPECT_TRUE(check_assumptions(alignment_game(l, f, 3)).all());
  const ReflectiveGameSpec single{{pennies()}, {}, {"a"}};
  const auto r = check_assumptions(single);
  EXPECT_TRUE(r.continuity_of_payoffs);
  EXPECT_FALSE(r.monotone_best_response);  // not common-payoff
}

TEST(Assumptions, CounterexampleViolatesContinuity) {
  const auto spec = continuity_counterexample();
  const auto r = check_assumptions(spec);
  EXPECT_FALSE(r.continuity_of_payoffs);
  ASSERT_FALSE(r.witnesses.empty());
  EXPECT_NE(r.witnesses.front().find("stage 1"), std::string::npos) << r.witnesses.front();
  const auto eqs = enumerate_reflective_equilibria(spec);
  ASSERT_EQ(eqs.size(), 2u);
  EXPECT_NE(eqs[0].outcomes, eqs[1].outcomes);
  EXPECT_NE(eqs[0].final_outcome, eqs[1].final_outcome);
}

TEST(Enumerate, Examples) {
  const ReflectiveGameSpec one{{trivial("o")}, {}, {"o"}};
  EXPECT_EQ(enumerate_reflective_equilibria(one).size(), 1u);

  // Symmetric coordination stages with label-preserving promotion.
  ReflectiveGameSpec sym{{coordination(), coordination()},
                         {{{"L", {{0, 0}}}, {"R", {{1, 1}}}, {"miss", coordination().all_profiles()}}},
                         {"L", "R"}};
  const auto eqs = enumerate_reflective_equilibria(sym);
  ASSERT_EQ(eqs.size(), 2u);
  for (const auto& eq : eqs) {
    EXPECT_EQ(eq.outcomes[0], eq.outcomes[1]);
    EXPECT_EQ(verify_equilibrium(sym, eq), std::nullopt);
  }
}

TEST(Enumerate, Bounds) {
  StageGame wide = trivial("o");
  wide.actions_t = {"1", "2", "3", "4", "5"};
  wide.payoff_t.assign(5, {Rational(0)});
  wide.payoff_m = wide.payoff_t;
  wide.labels.assign(5, {"o"});
  const ReflectiveGameSpec spec{{wide}, {}, {"o"}};
  EXPECT_THROW(enumerate_reflective_equilibria(spec), CapExceeded);
  EXPECT_THROW(enumerate_reflective_equilibria(spec, {5, 5}), PreconditionViolation);
}

TEST(Correspondence, Examples) {
  const auto l = make_powerset({"a", "b"});
  const auto id = verified(l, MonotoneOp::identity(l).table());
  const auto r0 = correspondence_check(l, id);
  EXPECT_TRUE(r0.ok) << r0.diagnostics;
  EXPECT_EQ(r0.game_states, std::vector<ElementId>{l.bottom()});

  const auto r1 = correspondence_check(l, union_with(l, 0b01));
  EXPECT_TRUE(r1.ok);
  EXPECT_EQ(r1.game_states, (std::vector<ElementId>{l.bottom(), *l.find("[\"a\"]")}));

  const auto l3 = make_powerset({"a", "b", "c"});
  const auto r2 = correspondence_check(l3, union_with(l3, 0b011));
  EXPECT_TRUE(r2.ok);
  EXPECT_EQ(r2.game_states, (std::vector<ElementId>{l3.bottom(), *l3.find("[\"a\",\"b\"]")}));
}

TEST(GameProperties, UniquenessAndCorrespondence) {
  gen::Rng rng(41);
  int checked = 0;
  for (int i = 0; i < 300 && checked < 120; ++i) {
    const auto l = gen::lattice(rng, 16);
    const auto f = gen::monotone_op(rng, l);
    const auto corr = correspondence_check(l, f);
    EXPECT_TRUE(corr.ok) << corr.diagnostics;
    const std::size_t theta = lfp(l, f).stage;
    if (theta > 4) continue;
    const std::size_t horizon = std::max<std::size_t>(theta, 1) + gen::below(rng, 4 - std::max<std::size_t>(theta, 1) + 1);
    const auto spec = alignment_game(l, f, horizon);
    ASSERT_TRUE(check_assumptions(spec).all());
    const auto eqs = enumerate_reflective_equilibria(spec);
    ASSERT_FALSE(eqs.empty());
    for (const auto& eq : eqs) {
      EXPECT_EQ(eq.outcomes, eqs.front().outcomes);
      EXPECT_EQ(verify_equilibrium(spec, eq), std::nullopt);
    }
    const auto stitched = std::get<ReflectiveEquilibrium>(stitch_equilibrium(spec));
    EXPECT_EQ(stitched.outcomes, eqs.front().outcomes);
    EXPECT_LE(stabilization_stage(stitched), theta);
    ++checked;
  }
  EXPECT_GE(checked, 100);
}

}  // namespace
}  // namespace transfix
