#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "transfix/lattice.hpp"
#include "transfix/ordinal.hpp"

namespace transfix {

/// Stages recorded unconditionally at the start of a run. Limit-jump stages and
/// theta are always recorded on top of this prefix.
inline constexpr std::size_t kRecordedPrefix = 32;

/// Anything that can be iterated from an initial value.
template <class D>
concept IterationDomain = requires(const D& d, const typename D::Value& v) {
  typename D::Value;
  { d.initial() } -> std::convertible_to<typename D::Value>;
  { d.step(v) } -> std::convertible_to<typename D::Value>;
  { d.equal(v, v) } -> std::convertible_to<bool>;
};

struct Divergence {
  enum class Exhausted { kSteps, kJumps };
  Exhausted exhausted = Exhausted::kSteps;
  std::uint64_t steps = 0;
  std::uint64_t jumps = 0;
  Ordinal stage;

  friend bool operator==(const Divergence&, const Divergence&) = default;
};

template <class V>
struct TraceStage {
  Ordinal stage;
  V value;

  friend bool operator==(const TraceStage&, const TraceStage&) = default;
};

/// Recorded stages of a run plus either the closure ordinal theta (with the
/// fixed value) or a divergence verdict.
template <class V>
struct TransfiniteTrace {
  std::vector<TraceStage<V>> stages;
  std::optional<Ordinal> theta;
  std::optional<V> fixed_value;
  std::optional<Divergence> diverged;
  /// Set up front when no region of an ordinal operator has increment 0.
  bool potentially_divergent = false;

  bool converged() const { return theta.has_value(); }

  friend bool operator==(const TransfiniteTrace&, const TransfiniteTrace&) = default;
};

/// One piece of a piecewise-additive ordinal operator: on [lower, upper) the
/// operator adds `increment`. An absent upper bound means unbounded.
struct StepRegion {
  Ordinal lower;
  std::optional<Ordinal> upper;
  Ordinal increment;

  friend bool operator==(const StepRegion&, const StepRegion&) = default;
};

/**
 * F(g) = g + increment(region containing g), iterated from `start`.
 *
 * F is inflationary by construction. The constructor checks that the regions
 * partition [0, inf) in order and that F is order-preserving across every
 * region boundary (within a region, left addition is already monotone), and
 * throws PreconditionViolation naming the offending region otherwise.
 */
class OrdinalStepOperator {
 public:
  OrdinalStepOperator(std::vector<StepRegion> regions, Ordinal start);

  const std::vector<StepRegion>& regions() const { return regions_; }
  const Ordinal& start() const { return start_; }

  std::size_t region_index(const Ordinal& g) const;
  const Ordinal& increment_at(const Ordinal& g) const { return regions_[region_index(g)].increment; }
  Ordinal apply(const Ordinal& g) const { return add(g, increment_at(g)); }
  bool has_fixed_region() const;

  /// Value reached w stages after value v: follow concrete steps until the
  /// increment pattern stays inside its region, then take v' + d*w. Nullopt
  /// when a fixed region is reached first or after `max_steps` steps.
  std::optional<Ordinal> omega_limit(Ordinal v, std::uint64_t max_steps = 100000) const;

  friend bool operator==(const OrdinalStepOperator&, const OrdinalStepOperator&) = default;

 private:
  std::vector<StepRegion> regions_;
  Ordinal start_;
};

struct TransfiniteBudget {
  std::uint64_t max_finite_steps = 1000;
  std::uint64_t max_limit_jumps = 16;
};

/**
 * Runs X_0 = start, X_{a+1} = F(X_a), X_lambda = sup below lambda.
 *
 * When the current increment d > 0 would keep the value inside its region for
 * all finitely many steps, the w-chain v, v+d, v+d*2, ... is collapsed into a
 * single limit jump: value v + d*w, stage (pattern start) + w. Otherwise steps
 * are taken one at a time. Budget exhaustion yields a Diverged trace.
 */
TransfiniteTrace<Ordinal> run_transfinite(const OrdinalStepOperator& op, const TransfiniteBudget& budget);

/// Adapts an ordinal operator to the generic IterationDomain interface.
struct OrdinalDomain {
  using Value = Ordinal;
  const OrdinalStepOperator* op;

  Ordinal initial() const { return op->start(); }
  Ordinal step(const Ordinal& v) const { return op->apply(v); }
  bool equal(const Ordinal& a, const Ordinal& b) const { return a == b; }
  std::optional<Ordinal> limit(const Ordinal& v) const { return op->omega_limit(v); }
};

/// Kleene iteration of a verified monotone operator from the lattice bottom.
struct LatticeDomain {
  using Value = ElementId;
  const FiniteLattice* lattice;
  const MonotoneOp* op;

  ElementId initial() const { return lattice->bottom(); }
  ElementId step(ElementId x) const { return (*op)(x); }
  bool equal(ElementId a, ElementId b) const { return a == b; }
};

namespace detail {
inline bool record_stage(std::size_t recorded_so_far) { return recorded_so_far < kRecordedPrefix; }
}  // namespace detail

/// Concrete finite iteration; `budget` bounds the number of step transitions.
template <IterationDomain D>
TransfiniteTrace<typename D::Value> run_finite(const D& domain, std::uint64_t budget) {
  TransfiniteTrace<typename D::Value> trace;
  typename D::Value x = domain.initial();
  std::uint64_t n = 0;
  trace.stages.push_back({Ordinal(), x});
  for (;;) {
    typename D::Value next = domain.step(x);
    if (domain.equal(next, x)) {
      const Ordinal stage = Ordinal::natural(n);
      if (trace.stages.back().stage != stage) trace.stages.push_back({stage, x});
      trace.theta = stage;
      trace.fixed_value = x;
      return trace;
    }
    if (n == budget) {
      const Ordinal stage = Ordinal::natural(n);
      if (trace.stages.back().stage != stage) trace.stages.push_back({stage, x});
      trace.diverged = Divergence{Divergence::Exhausted::kSteps, n, 0, stage};
      return trace;
    }
    x = std::move(next);
    ++n;
    if (detail::record_stage(trace.stages.size())) trace.stages.push_back({Ordinal::natural(n), x});
  }
}

/**
 * Re-checks a converged trace: step(fixed) = fixed, theta is recorded with the
 * fixed value, no earlier recorded stage is fixed, stages strictly increase,
 * every recorded successor stage is the step of its recorded predecessor, and
 * (for domains with a closed-form w-limit) every stage pred + w holds that limit.
 * A trace without theta is never verified.
 */
template <IterationDomain D>
bool verify_fixed(const D& domain, const TransfiniteTrace<typename D::Value>& trace) {
  if (!trace.theta || !trace.fixed_value) return false;
  const auto& fixed = *trace.fixed_value;
  if (!domain.equal(domain.step(fixed), fixed)) return false;
  bool theta_seen = false;
  for (std::size_t i = 0; i < trace.stages.size(); ++i) {
    const auto& s = trace.stages[i];
    if (i > 0) {
      const auto& prev = trace.stages[i - 1];
      if (!(prev.stage < s.stage)) return false;
      if (s.stage == succ(prev.stage) && !domain.equal(domain.step(prev.value), s.value)) return false;
      if constexpr (requires { domain.limit(prev.value); }) {
        if (s.stage == add(prev.stage, Ordinal::omega())) {
          const auto lim = domain.limit(prev.value);
          if (!lim || !domain.equal(*lim, s.value)) return false;
        }
      }
    } else if (!s.stage.is_zero() || !domain.equal(s.value, domain.initial())) {
      return false;
    }
    if (s.stage < *trace.theta) {
      if (domain.equal(domain.step(s.value), s.value)) return false;
    } else if (s.stage == *trace.theta) {
      if (!domain.equal(s.value, fixed)) return false;
      theta_seen = true;
    } else {
      return false;
    }
  }
  return theta_seen;
}

}  // namespace transfix
