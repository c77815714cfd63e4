#include <gtest/gtest.h>

#include "oracles.hpp"
#include "transfix/engine.hpp"
#include "transfix/errors.hpp"
#include "transfix/generators.hpp"

namespace transfix {
namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }

StepRegion region(const char* lo, const char* hi, const char* inc) {
  return {O(lo), hi ? std::optional<Ordinal>(O(hi)) : std::nullopt, O(inc)};
}

bool has_stage(const TransfiniteTrace<Ordinal>& t, const char* stage, const char* value) {
  for (const auto& s : t.stages) {
    if (s.stage == O(stage)) return s.value == O(value);
  }
  return false;
}

TEST(RunTransfinite, IdentityOperator) {
  const OrdinalStepOperator op({region("0", nullptr, "0")}, O("0"));
  const auto t = run_transfinite(op, {});
  ASSERT_TRUE(t.theta);
  EXPECT_EQ(*t.theta, O("0"));
  EXPECT_EQ(*t.fixed_value, O("0"));
  EXPECT_TRUE(verify_fixed(OrdinalDomain{&op}, t));
}

TEST(RunTransfinite, OmegaTimesTwo) {
  const OrdinalStepOperator op({region("0", "w*2", "1"), region("w*2", nullptr, "0")}, O("0"));
  const auto t = run_transfinite(op, {});
  ASSERT_TRUE(t.theta);
  EXPECT_EQ(t.theta->to_string(), "w*2");
  EXPECT_EQ(*t.fixed_value, O("w*2"));
  EXPECT_TRUE(has_stage(t, "w", "w"));
  EXPECT_TRUE(has_stage(t, "w*2", "w*2"));
  EXPECT_TRUE(verify_fixed(OrdinalDomain{&op}, t));
  for (std::size_t i = 1; i < t.stages.size(); ++i) {
    EXPECT_LT(t.stages[i - 1].stage, t.stages[i].stage);
    EXPECT_LT(t.stages[i - 1].value, t.stages[i].value);
  }
}

TEST(RunTransfinite, EvenStepsReachOmega) {
  const OrdinalStepOperator op({region("0", "w", "2"), region("w", nullptr, "0")}, O("0"));
  const auto t = run_transfinite(op, {});
  ASSERT_TRUE(t.theta);
  EXPECT_EQ(*t.theta, O("w"));
  EXPECT_EQ(*t.fixed_value, O("w"));
}

TEST(RunTransfinite, BoundaryReachedConcretely) {
  // From w, increments of 1 hit the boundary w+5 after five concrete steps.
  const OrdinalStepOperator op({region("0", "w+5", "1"), region("w+5", nullptr, "0")}, O("w"));
  const auto t = run_transfinite(op, {});
  ASSERT_TRUE(t.theta);
  EXPECT_EQ(*t.theta, O("5"));
  EXPECT_EQ(*t.fixed_value, O("w+5"));
}

TEST(RunTransfinite, LargerIncrementsReachOmegaSquared) {
  const OrdinalStepOperator op({region("0", "w^2", "w"), region("w^2", nullptr, "0")}, O("0"));
  const auto t = run_transfinite(op, {});
  ASSERT_TRUE(t.theta);
  EXPECT_EQ(*t.theta, O("w"));
  EXPECT_EQ(*t.fixed_value, O("w^2"));
}

TEST(RunTransfinite, DivergenceAndBudgets) {
  const OrdinalStepOperator op({region("0", nullptr, "1")}, O("0"));
  EXPECT_TRUE(op.has_fixed_region() == false);
  const auto t = run_transfinite(op, {1000, 3});
  EXPECT_FALSE(t.theta);
  ASSERT_TRUE(t.diverged);
  EXPECT_TRUE(t.potentially_divergent);
  EXPECT_EQ(t.diverged->exhausted, Divergence::Exhausted::kJumps);
  EXPECT_FALSE(verify_fixed(OrdinalDomain{&op}, t));

  const OrdinalStepOperator slow({region("0", "w+40", "1"), region("w+40", nullptr, "0")}, O("0"));
  const auto cut = run_transfinite(slow, {10, 16});
  ASSERT_TRUE(cut.diverged);
  EXPECT_EQ(cut.diverged->exhausted, Divergence::Exhausted::kSteps);
  const auto full = run_transfinite(slow, {100, 16});
  ASSERT_TRUE(full.theta);
  EXPECT_EQ(*full.theta, O("w+40"));
}

TEST(OrdinalStepOperator, RejectsMalformedRegions) {
  EXPECT_THROW(OrdinalStepOperator({region("0", "w", "1"), region("5", nullptr, "0")}, O("0")),
               PreconditionViolation);
  EXPECT_THROW(OrdinalStepOperator({region("0", "w", "1"), region("w+1", nullptr, "0")}, O("0")),
               PreconditionViolation);
  EXPECT_THROW(OrdinalStepOperator({region("1", nullptr, "0")}, O("0")), PreconditionViolation);
  EXPECT_THROW(OrdinalStepOperator({region("0", "w", "0")}, O("0")), PreconditionViolation);
  // F(w) = w+1 would jump below F(4) = w*2 if the lower increment were w.
  EXPECT_THROW(OrdinalStepOperator({region("0", "5", "w*2"), region("5", nullptr, "1")}, O("0")),
               PreconditionViolation);
  try {
    OrdinalStepOperator({region("0", "w*2", "1"), region("w", nullptr, "0")}, O("0"));
    FAIL();
  } catch (const PreconditionViolation& e) {
    EXPECT_NE(std::string(e.what()).find("overlaps"), std::string::npos) << e.what();
  }
}

TEST(VerifyFixed, TamperedTraces) {
  const OrdinalStepOperator op({region("0", "w*2", "1"), region("w*2", nullptr, "0")}, O("0"));
  const OrdinalDomain dom{&op};
  const auto t = run_transfinite(op, {});
  auto bad_theta = t;
  bad_theta.theta = O("w+1");
  EXPECT_FALSE(verify_fixed(dom, bad_theta));
  auto bad_value = t;
  bad_value.fixed_value = O("w*2+1");
  EXPECT_FALSE(verify_fixed(dom, bad_value));
  auto bad_stage = t;
  bad_stage.stages[1].value = O("7");
  EXPECT_FALSE(verify_fixed(dom, bad_stage));
}

struct Counter {
  using Value = std::uint64_t;
  Value initial() const { return 0; }
  Value step(Value v) const { return v + 1; }
  bool equal(Value a, Value b) const { return a == b; }
};

TEST(RunFinite, Examples) {
  const auto l = make_powerset({"a", "b"});
  MonotoneOp id = MonotoneOp::identity(l);
  check_monotone(l, id);
  const auto t0 = run_finite(LatticeDomain{&l, &id}, 100);
  EXPECT_EQ(*t0.theta, O("0"));

  std::vector<ElementId> table(l.size());
  for (ElementId x = 0; x < l.size(); ++x) table[x] = *l.find_mask(l.mask(x) | 1u);
  MonotoneOp f(table);
  ASSERT_TRUE(check_monotone(l, f));
  const auto t1 = run_finite(LatticeDomain{&l, &f}, 100);
  EXPECT_EQ(*t1.theta, O("1"));
  EXPECT_EQ(l.label(*t1.fixed_value), "[\"a\"]");
  EXPECT_TRUE(verify_fixed(LatticeDomain{&l, &f}, t1));

  const auto tc = run_finite(Counter{}, 10);
  ASSERT_TRUE(tc.diverged);
  EXPECT_EQ(tc.diverged->steps, 10u);
  EXPECT_EQ(tc.stages.back().value, 10u);
}

TEST(EngineProperties, LatticeRunsMatchLfp) {
  gen::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto l = gen::lattice(rng, 64);
    const auto f = gen::monotone_op(rng, l);
    const auto t = run_finite(LatticeDomain{&l, &f}, 1000);
    const auto chain = kleene_chain(l, f);
    ASSERT_TRUE(t.theta);
    EXPECT_EQ(*t.theta, Ordinal::natural(lfp(l, f).stage));
    ASSERT_EQ(t.stages.size(), chain.size());
    for (std::size_t k = 0; k < chain.size(); ++k) EXPECT_EQ(t.stages[k].value, chain[k]);
    EXPECT_TRUE(verify_fixed(LatticeDomain{&l, &f}, t));
  }
}

// Random piecewise operators below w^2: boundaries are sorted pair ordinals,
// increments natural or w-multiples, last region fixed.
TEST(EngineProperties, PairOracleAgreementAndBudgetIndependence) {
  gen::Rng rng(11);
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<oracle::PairOrdinal> cuts;
    const std::size_t k = 1 + gen::below(rng, 3);
    for (std::size_t j = 0; j < k; ++j) cuts.push_back({gen::below(rng, 4), gen::below(rng, 6)});
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.front() == oracle::PairOrdinal{}) cuts.erase(cuts.begin());
    if (cuts.empty()) continue;
    std::vector<oracle::PairRegion> pr;
    std::vector<StepRegion> regions;
    oracle::PairOrdinal lo{};
    for (std::size_t j = 0; j <= cuts.size(); ++j) {
      oracle::PairOrdinal inc{};
      if (j < cuts.size()) inc = gen::coin(rng) ? oracle::PairOrdinal{0, 1 + gen::below(rng, 3)}
                                                : oracle::PairOrdinal{1 + gen::below(rng, 2), 0};
      const auto hi = j < cuts.size() ? std::optional(cuts[j]) : std::nullopt;
      pr.push_back({lo, hi, inc});
      regions.push_back({lo.to_ordinal(), hi ? std::optional(hi->to_ordinal()) : std::nullopt, inc.to_ordinal()});
      if (hi) lo = *hi;
    }
    std::optional<OrdinalStepOperator> op;
    try {
      op.emplace(regions, Ordinal());
    } catch (const PreconditionViolation&) {
      continue;  // not monotone across some boundary
    }
    const auto t = run_transfinite(*op, {1000, 16});
    const auto o = oracle::simulate_pair_operator(pr, {});
    if (t.theta && o.defined) {
      ++compared;
      EXPECT_EQ(*t.theta, o.theta.to_ordinal());
      EXPECT_EQ(*t.fixed_value, o.value.to_ordinal());
      EXPECT_TRUE(verify_fixed(OrdinalDomain{&*op}, t));
      const auto bigger = run_transfinite(*op, {5000, 64});
      EXPECT_EQ(bigger.theta, t.theta);
    }
  }
  EXPECT_GE(compared, 50);
}

}  // namespace
}  // namespace transfix
