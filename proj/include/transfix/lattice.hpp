#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace transfix {

using ElementId = std::uint32_t;

/// Hard ceiling on lattice size; join/meet are stored as dense n*n tables.
inline constexpr std::size_t kMaxLatticeSize = 1024;
inline constexpr std::size_t kDefaultPowersetCap = 10;

/**
 * A finite complete lattice over dense element ids 0..n-1.
 *
 * The order, join and meet are explicit tables so every query is O(1) and
 * brute-force checks stay exact. Lattices built from a family of subsets also
 * remember the universe and each element's bitmask; their labels are the
 * compact JSON text of the sorted atom array, e.g. `["a","b"]`.
 */
class FiniteLattice {
 public:
  /// Builds a lattice from an explicit partial order, computing join and meet.
  /// Throws PreconditionViolation if `leq` is not a lattice order.
  static FiniteLattice from_order(std::vector<std::string> labels,
                                  const std::vector<std::vector<bool>>& leq);

  /// Family of subsets of `universe` (bitmasks) closed under union and
  /// intersection, ordered by inclusion. Duplicates are rejected.
  static FiniteLattice from_set_family(std::vector<std::string> universe,
                                       std::vector<std::uint32_t> masks);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(ElementId e) const { return labels_.at(e); }
  std::optional<ElementId> find(const std::string& label) const;

  bool leq(ElementId a, ElementId b) const { return leq_[index(a, b)] != 0; }
  ElementId join(ElementId a, ElementId b) const { return join_[index(a, b)]; }
  ElementId meet(ElementId a, ElementId b) const { return meet_[index(a, b)]; }
  ElementId bottom() const { return bottom_; }
  ElementId top() const { return top_; }

  /// Number of edges on the longest chain bottom < ... < top.
  std::size_t height() const { return height_; }

  /// Order dual: leq reversed, join/meet and bottom/top swapped. Labels kept.
  FiniteLattice dual() const;

  bool is_set_lattice() const { return !masks_.empty(); }
  const std::vector<std::string>& universe() const { return universe_; }
  std::uint32_t mask(ElementId e) const { return masks_.at(e); }
  std::optional<ElementId> find_mask(std::uint32_t mask) const;

  /// Full re-check of the lattice axioms, O(n^3). Returns a description of the
  /// first violation, or nullopt.
  std::optional<std::string> check_axioms() const;

 private:
  FiniteLattice() = default;
  std::size_t index(ElementId a, ElementId b) const { return static_cast<std::size_t>(a) * size() + b; }
  void compute_height();

  std::vector<std::string> labels_;
  std::vector<std::uint8_t> leq_;
  std::vector<ElementId> join_;
  std::vector<ElementId> meet_;
  ElementId bottom_ = 0;
  ElementId top_ = 0;
  std::size_t height_ = 0;
  std::vector<std::string> universe_;
  std::vector<std::uint32_t> masks_;
};

std::string subset_label(const std::vector<std::string>& universe, std::uint32_t mask);

/// Throws CapExceeded when `universe.size() > cap`.
FiniteLattice make_powerset(std::vector<std::string> universe, std::size_t cap = kDefaultPowersetCap);
/// Chain 0 < 1 < ... < n-1; n >= 1.
FiniteLattice make_chain(std::size_t n);
/// Componentwise order; labels are "(x,y)".
FiniteLattice make_product(const FiniteLattice& a, const FiniteLattice& b);

/// An operator given by its function table. `verified()` is true only after
/// check_monotone has accepted it.
class MonotoneOp {
 public:
  MonotoneOp() = default;
  explicit MonotoneOp(std::vector<ElementId> table) : table_(std::move(table)) {}

  ElementId operator()(ElementId x) const { return table_.at(x); }
  const std::vector<ElementId>& table() const { return table_; }
  bool verified() const { return verified_; }

  static MonotoneOp identity(const FiniteLattice& l);
  static MonotoneOp constant(const FiniteLattice& l, ElementId c);

 private:
  friend bool check_monotone(const FiniteLattice& l, MonotoneOp& f);

  std::vector<ElementId> table_;
  bool verified_ = false;
};

/// True iff f is total on l and a <= b implies f(a) <= f(b). Sets f's
/// verified flag on success and clears it on failure.
bool check_monotone(const FiniteLattice& l, MonotoneOp& f);

/// First pair (a, b) with a <= b but f(a) not <= f(b), if any.
std::optional<std::pair<ElementId, ElementId>> monotonicity_witness(const FiniteLattice& l,
                                                                     const MonotoneOp& f);

struct FixpointResult {
  ElementId element;
  std::size_t stage;

  friend bool operator==(const FixpointResult&, const FixpointResult&) = default;
};

/// x0 = bottom, x_{n+1} = f(x_n) until it repeats. Precondition: f verified.
FixpointResult lfp(const FiniteLattice& l, const MonotoneOp& f);
/// Dual iteration from top.
FixpointResult gfp(const FiniteLattice& l, const MonotoneOp& f);

/// The ascending Kleene chain x0 = bottom, ..., x_theta (x_theta fixed).
std::vector<ElementId> kleene_chain(const FiniteLattice& l, const MonotoneOp& f);

/// { x | f(x) = x } by exhaustive scan, ascending id order.
std::vector<ElementId> fixed_points(const FiniteLattice& l, const MonotoneOp& f);

}  // namespace transfix
