#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace transfix {

struct OrdinalTerm;

/**
 * An ordinal below epsilon_0 in Cantor normal form:
 *
 *   w^e1 * c1 + w^e2 * c2 + ... + w^ek * ck,   e1 > e2 > ... > ek,  ci >= 1
 *
 * The exponents are themselves ordinals, so nesting is arbitrary but finite.
 * The empty term list is 0. Values are immutable once built; every factory
 * validates the normal-form invariants.
 */
class Ordinal {
 public:
  using Coefficient = std::uint64_t;

  Ordinal() = default;

  static Ordinal natural(Coefficient n);
  static Ordinal omega();
  /// w^exponent * coefficient; coefficient 0 yields 0.
  static Ordinal omega_power(const Ordinal& exponent, Coefficient coefficient = 1);
  /// Throws PreconditionViolation unless the terms are in normal form.
  static Ordinal from_terms(std::vector<OrdinalTerm> terms);

  /// Parses the textual grammar, e.g. `0`, `w`, `w^2*3+w*2+5`, `w^(w+1)`.
  static Ordinal parse(std::string_view text);
  std::string to_string() const;

  const std::vector<OrdinalTerm>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_limit() const;
  bool is_successor() const;
  bool is_finite() const;
  std::optional<Coefficient> as_natural() const;

  /// Exponent of the highest term. Precondition: nonzero.
  const Ordinal& leading_exponent() const;

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);

 private:
  explicit Ordinal(std::vector<OrdinalTerm> terms);

  std::vector<OrdinalTerm> terms_;
};

struct OrdinalTerm {
  Ordinal exponent;
  Ordinal::Coefficient coefficient = 1;

  friend bool operator==(const OrdinalTerm&, const OrdinalTerm&) = default;
};

std::strong_ordering compare(const Ordinal& a, const Ordinal& b);

/// Ordinal sum a + b (not commutative: 3 + w = w).
Ordinal add(const Ordinal& a, const Ordinal& b);
Ordinal operator+(const Ordinal& a, const Ordinal& b);

Ordinal succ(const Ordinal& a);
inline bool is_limit(const Ordinal& a) { return a.is_limit(); }
inline bool is_zero(const Ordinal& a) { return a.is_zero(); }

/// d * w. For d > 0 with leading exponent e this is w^(e+1).
Ordinal mul_by_omega(const Ordinal& d);

/// Maximum of a finite nonempty list. Throws PreconditionViolation on empty input.
Ordinal sup(std::span<const Ordinal> values);

std::ostream& operator<<(std::ostream& os, const Ordinal& a);

}  // namespace transfix
