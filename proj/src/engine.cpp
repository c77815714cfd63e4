#include "transfix/engine.hpp"

#include "transfix/errors.hpp"

namespace transfix {

namespace {

constexpr const char* kModule = "engine";

/// b with its last coefficient lowered by one: the predecessor of a successor
/// ordinal, or the point from which a limit b is approached by its last term.
Ordinal approach_point(const Ordinal& b) {
  std::vector<OrdinalTerm> terms = b.terms();
  if (--terms.back().coefficient == 0) terms.pop_back();
  return Ordinal::from_terms(std::move(terms));
}

/// Whether g + inc_below <= boundary + inc_above for every g in [lower, boundary).
bool boundary_preserves_order(const Ordinal& boundary, const Ordinal& inc_below, const Ordinal& inc_above) {
  if (inc_below.is_zero()) return true;
  if (boundary.is_limit() && inc_below.leading_exponent() < boundary.terms().back().exponent) {
    // Every g + inc_below stays below the boundary itself.
    return true;
  }
  return add(approach_point(boundary), inc_below) <= add(boundary, inc_above);
}

}  // namespace

OrdinalStepOperator::OrdinalStepOperator(std::vector<StepRegion> regions, Ordinal start)
    : regions_(std::move(regions)), start_(std::move(start)) {
  if (regions_.empty()) throw PreconditionViolation(kModule, "operator needs at least one region");
  if (!regions_.front().lower.is_zero()) {
    throw PreconditionViolation(kModule, "regions[0] must start at 0, got " + regions_.front().lower.to_string());
  }
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    const StepRegion& r = regions_[i];
    const std::string name = "regions[" + std::to_string(i) + "]";
    const bool last = i + 1 == regions_.size();
    if (!r.upper) {
      if (!last) throw PreconditionViolation(kModule, name + " is unbounded but is not the last region");
      continue;
    }
    if (last) throw PreconditionViolation(kModule, name + " must be unbounded (no hi) to cover [0, inf)");
    if (!(r.lower < *r.upper)) {
      throw PreconditionViolation(kModule, name + " is empty: lo = " + r.lower.to_string() +
                                               " is not below hi = " + r.upper->to_string());
    }
    const StepRegion& next = regions_[i + 1];
    const std::string next_name = "regions[" + std::to_string(i + 1) + "]";
    if (next.lower < *r.upper) {
      throw PreconditionViolation(kModule, next_name + " (lo = " + next.lower.to_string() + ") overlaps " + name +
                                               " (hi = " + r.upper->to_string() + ")");
    }
    if (*r.upper < next.lower) {
      throw PreconditionViolation(kModule, "gap between " + name + " (hi = " + r.upper->to_string() + ") and " +
                                               next_name + " (lo = " + next.lower.to_string() + ")");
    }
    if (!boundary_preserves_order(*r.upper, r.increment, next.increment)) {
      throw PreconditionViolation(kModule, "operator is not monotone across the boundary " + r.upper->to_string() +
                                               " between " + name + " and " + next_name);
    }
  }
}

std::size_t OrdinalStepOperator::region_index(const Ordinal& g) const {
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (!regions_[i].upper || g < *regions_[i].upper) return i;
  }
  return regions_.size() - 1;
}

bool OrdinalStepOperator::has_fixed_region() const {
  for (const StepRegion& r : regions_) {
    if (r.increment.is_zero()) return true;
  }
  return false;
}

std::optional<Ordinal> OrdinalStepOperator::omega_limit(Ordinal v, std::uint64_t max_steps) const {
  for (std::uint64_t n = 0; n <= max_steps; ++n) {
    const StepRegion& region = regions_[region_index(v)];
    if (region.increment.is_zero()) return std::nullopt;
    Ordinal limit = add(v, mul_by_omega(region.increment));
    if (!region.upper || limit <= *region.upper) return limit;
    v = add(v, region.increment);
  }
  return std::nullopt;
}

TransfiniteTrace<Ordinal> run_transfinite(const OrdinalStepOperator& op, const TransfiniteBudget& budget) {
  TransfiniteTrace<Ordinal> trace;
  trace.potentially_divergent = !op.has_fixed_region();

  Ordinal stage;
  Ordinal value = op.start();
  std::uint64_t steps = 0, jumps = 0;
  trace.stages.push_back({stage, value});

  auto record_final = [&] {
    if (trace.stages.back().stage != stage) trace.stages.push_back({stage, value});
  };

  for (;;) {
    const StepRegion& region = op.regions()[op.region_index(value)];
    const Ordinal& delta = region.increment;
    if (delta.is_zero()) {
      record_final();
      trace.theta = stage;
      trace.fixed_value = value;
      return trace;
    }
    const Ordinal limit = add(value, mul_by_omega(delta));
    if (!region.upper || limit <= *region.upper) {
      if (jumps == budget.max_limit_jumps) {
        record_final();
        trace.diverged = Divergence{Divergence::Exhausted::kJumps, steps, jumps, stage};
        return trace;
      }
      value = limit;
      stage = add(stage, Ordinal::omega());
      ++jumps;
      trace.stages.push_back({stage, value});
    } else {
      if (steps == budget.max_finite_steps) {
        record_final();
        trace.diverged = Divergence{Divergence::Exhausted::kSteps, steps, jumps, stage};
        return trace;
      }
      value = add(value, delta);
      stage = succ(stage);
      ++steps;
      if (detail::record_stage(trace.stages.size())) trace.stages.push_back({stage, value});
    }
  }
}

}  // namespace transfix
