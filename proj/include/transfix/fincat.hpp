#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "transfix/lattice.hpp"

namespace transfix {

inline constexpr std::size_t kDefaultFunctorCap = 100000;
inline constexpr std::size_t kDefaultMaxArity = 3;
inline constexpr std::size_t kMaxHomTargetSize = 5;
inline constexpr std::size_t kMaxHomSourceSize = 8;

/// A tagged tree: either a plain atom (summand < 0) or a node built by a
/// functor summand from a label and argument elements.
struct Element {
  int summand = -1;
  std::string label;
  std::vector<Element> args;

  static Element atom(std::string label) { return {-1, std::move(label), {}}; }

  std::string to_string() const;

  friend std::strong_ordering operator<=>(const Element& a, const Element& b);
  friend bool operator==(const Element&, const Element&) = default;
};

/// A finite set of distinct elements in a fixed (canonical) order.
class FinSet {
 public:
  FinSet() = default;
  /// Throws PreconditionViolation on duplicate elements.
  explicit FinSet(std::vector<Element> elements);

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const Element& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Element>& elements() const { return elements_; }
  std::optional<std::size_t> index_of(const Element& e) const;

  /// Skips the distinctness check; for producers that are distinct by construction.
  static FinSet from_distinct(std::vector<Element> elements);

  friend bool operator==(const FinSet&, const FinSet&) = default;

 private:
  std::vector<Element> elements_;
};

/// A total function between finite sets, by index.
struct FinMap {
  std::vector<std::size_t> image;
  std::size_t codomain_size = 0;

  std::size_t domain_size() const { return image.size(); }
  std::size_t operator()(std::size_t i) const { return image[i]; }
  bool is_bijection() const;
  /// Precondition: bijection.
  FinMap inverse() const;

  static FinMap identity(std::size_t n);
  friend bool operator==(const FinMap&, const FinMap&) = default;
};

/// g after f.
FinMap compose(const FinMap& g, const FinMap& f);

/// F(X) = sum_i A_i x X^{n_i}.
struct PolyFunctor {
  struct Summand {
    std::vector<std::string> labels;
    std::size_t arity = 0;
    friend bool operator==(const Summand&, const Summand&) = default;
  };
  std::vector<Summand> summands;

  /// Throws PreconditionViolation: no summands, an empty or duplicated label
  /// set, or an arity above `max_arity`.
  void validate(std::size_t max_arity = kDefaultMaxArity) const;

  /// |F(X)| for |X| = n, or nullopt on overflow.
  std::optional<std::size_t> image_size(std::size_t n) const;

  friend bool operator==(const PolyFunctor&, const PolyFunctor&) = default;
};

/// All tagged tuples (i, a in A_i, x_1..x_{n_i} in X), ordered by summand,
/// label, then tuple lexicographically. Throws CapExceeded beyond `cap`.
FinSet apply_functor(const PolyFunctor& f, const FinSet& x, std::size_t cap = kDefaultFunctorCap);

/// F(m): F(X) -> F(Y), componentwise, with indices in apply_functor's order.
FinMap apply_functor_map(const PolyFunctor& f, const FinMap& m, std::size_t cap = kDefaultFunctorCap);

/// A carrier with structure map F(carrier) -> carrier (domain indexed as
/// apply_functor(F, carrier)).
struct Algebra {
  FinSet carrier;
  FinMap structure;
  friend bool operator==(const Algebra&, const Algebra&) = default;
};

struct InitialAlgebra {
  Algebra algebra;
  std::size_t theta = 0;
  std::vector<std::size_t> sizes;  // |X_0|, ..., |X_{theta+1}|
};

struct DivergenceReport {
  std::vector<std::size_t> growth;  // |X_0|, |X_1|, ...
  std::string reason;
};

using InitialAlgebraResult = std::variant<InitialAlgebra, DivergenceReport>;

/**
 * Builds X_0 = {} and X_{n+1} = F(X_n) with connecting maps c_0 = ({} -> X_1),
 * c_{n+1} = F(c_n), and stops at the least n <= budget - 1 where c_n is a
 * bijection. The carrier is X_n and the structure map is c_n's inverse.
 * Without such an n (or if a carrier would exceed `cap`) returns a
 * DivergenceReport with the sizes |X_0|, ..., |X_budget| computed so far.
 */
InitialAlgebraResult initial_algebra(const PolyFunctor& f, std::size_t budget,
                                     std::size_t cap = kDefaultFunctorCap);

/// Structure map is a bijection F(carrier) -> carrier.
bool lambek_check(const PolyFunctor& f, const Algebra& alg);

/// True iff m o init.structure == target.structure o F(m).
bool is_homomorphism(const PolyFunctor& f, const Algebra& init, const Algebra& target, const FinMap& m);

struct CounterexampleReport {
  std::size_t found = 0;                // 0, or 2 when enumeration stopped early
  std::vector<FinMap> homomorphisms;    // the ones found
};

using HomomorphismResult = std::variant<FinMap, CounterexampleReport>;

/// Enumerates every function init.carrier -> target.carrier (odometer order)
/// and returns the unique homomorphism, or a report when there are 0 or >= 2.
/// Throws CapExceeded past kMaxHomSourceSize / kMaxHomTargetSize.
HomomorphismResult unique_homomorphism(const PolyFunctor& f, const Algebra& init, const Algebra& target);

/// The initial-algebra chain in the poset category of `l`: initial object
/// bottom, successor f(x), connecting arrows x_n <= x_{n+1}, stopping at the
/// first isomorphism x_{n+1} <= x_n. Precondition: f verified.
ElementId poset_as_category_lfp(const FiniteLattice& l, const MonotoneOp& f);

}  // namespace transfix
