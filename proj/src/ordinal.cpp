#include "transfix/ordinal.hpp"

#include <algorithm>
#include <cctype>

#include "transfix/errors.hpp"

namespace transfix {

namespace {

constexpr const char* kModule = "ordinal";

Ordinal::Coefficient checked_add(Ordinal::Coefficient a, Ordinal::Coefficient b) {
  Ordinal::Coefficient out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError(kModule, "coefficient overflow in addition");
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Ordinal parse_all() {
    Ordinal out = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
    return out;
  }

 private:
  Ordinal parse_sum() {
    std::vector<OrdinalTerm> terms;
    bool saw_zero = false;
    do {
      OrdinalTerm t = parse_term();
      if (t.coefficient == 0) {
        saw_zero = true;
      } else {
        if (!terms.empty() && !(t.exponent < terms.back().exponent)) {
          fail("terms must have strictly decreasing exponents");
        }
        terms.push_back(std::move(t));
      }
    } while (consume('+'));
    if (saw_zero && !terms.empty()) fail("0 may only appear alone");
    return Ordinal::from_terms(std::move(terms));
  }

  OrdinalTerm parse_term() {
    skip_ws();
    if (peek() == 'w') {
      ++pos_;
      Ordinal exponent = Ordinal::natural(1);
      if (consume('^')) exponent = parse_exponent();
      Ordinal::Coefficient coefficient = 1;
      if (consume('*')) {
        coefficient = parse_nat();
        if (coefficient == 0) fail("coefficient must be positive");
      }
      return {std::move(exponent), coefficient};
    }
    return {Ordinal(), parse_nat()};
  }

  Ordinal parse_exponent() {
    skip_ws();
    if (consume('(')) {
      Ordinal e = parse_sum();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (peek() == 'w') {
      ++pos_;
      return Ordinal::omega();
    }
    return Ordinal::natural(parse_nat());
  }

  Ordinal::Coefficient parse_nat() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("expected a natural number or 'w'");
    }
    Ordinal::Coefficient value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      Ordinal::Coefficient digit = static_cast<Ordinal::Coefficient>(text_[pos_] - '0');
      if (__builtin_mul_overflow(value, 10u, &value) || __builtin_add_overflow(value, digit, &value)) {
        throw OverflowError(kModule, "natural number too large in '" + std::string(text_) + "'");
      }
      ++pos_;
    }
    return value;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(kModule, what + " at offset " + std::to_string(pos_) + " in '" +
                                  std::string(text_) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print(std::string& out, const Ordinal& a);

void print_exponent(std::string& out, const Ordinal& e) {
  if (e.is_finite() || e == Ordinal::omega()) {
    print(out, e);
  } else {
    out += '(';
    print(out, e);
    out += ')';
  }
}

void print(std::string& out, const Ordinal& a) {
  if (a.is_zero()) {
    out += '0';
    return;
  }
  bool first = true;
  for (const OrdinalTerm& t : a.terms()) {
    if (!first) out += '+';
    first = false;
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += 'w';
    if (t.exponent != Ordinal::natural(1)) {
      out += '^';
      print_exponent(out, t.exponent);
    }
    if (t.coefficient != 1) {
      out += '*';
      out += std::to_string(t.coefficient);
    }
  }
}

}  // namespace

Ordinal::Ordinal(std::vector<OrdinalTerm> terms) : terms_(std::move(terms)) {}

Ordinal Ordinal::natural(Coefficient n) {
  if (n == 0) return Ordinal();
  return Ordinal({OrdinalTerm{Ordinal(), n}});
}

Ordinal Ordinal::omega() { return omega_power(natural(1)); }

Ordinal Ordinal::omega_power(const Ordinal& exponent, Coefficient coefficient) {
  if (coefficient == 0) return Ordinal();
  return Ordinal({OrdinalTerm{exponent, coefficient}});
}

Ordinal Ordinal::from_terms(std::vector<OrdinalTerm> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coefficient == 0) {
      throw PreconditionViolation(kModule, "CNF coefficient must be >= 1");
    }
    if (i > 0 && !(terms[i].exponent < terms[i - 1].exponent)) {
      throw PreconditionViolation(kModule, "CNF exponents must strictly decrease");
    }
  }
  return Ordinal(std::move(terms));
}

Ordinal Ordinal::parse(std::string_view text) { return Parser(text).parse_all(); }

std::string Ordinal::to_string() const {
  std::string out;
  print(out, *this);
  return out;
}

bool Ordinal::is_limit() const { return !terms_.empty() && !terms_.back().exponent.is_zero(); }

bool Ordinal::is_successor() const { return !terms_.empty() && terms_.back().exponent.is_zero(); }

bool Ordinal::is_finite() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero()); }

std::optional<Ordinal::Coefficient> Ordinal::as_natural() const {
  if (terms_.empty()) return Coefficient{0};
  if (is_finite()) return terms_[0].coefficient;
  return std::nullopt;
}

const Ordinal& Ordinal::leading_exponent() const {
  if (terms_.empty()) throw PreconditionViolation(kModule, "0 has no leading exponent");
  return terms_.front().exponent;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const OrdinalTerm& x = a.terms_[i];
    const OrdinalTerm& y = b.terms_[i];
    if (auto c = x.exponent <=> y.exponent; c != 0) return c;
    if (auto c = x.coefficient <=> y.coefficient; c != 0) return c;
  }
  return a.terms_.size() <=> b.terms_.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) { return a.terms_ == b.terms_; }

std::strong_ordering compare(const Ordinal& a, const Ordinal& b) { return a <=> b; }

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const OrdinalTerm& lead = b.terms().front();
  std::vector<OrdinalTerm> out;
  out.reserve(a.terms().size() + b.terms().size());
  auto it = a.terms().begin();
  for (; it != a.terms().end() && it->exponent > lead.exponent; ++it) out.push_back(*it);
  OrdinalTerm merged = lead;
  if (it != a.terms().end() && it->exponent == lead.exponent) {
    merged.coefficient = checked_add(it->coefficient, lead.coefficient);
  }
  out.push_back(std::move(merged));
  out.insert(out.end(), b.terms().begin() + 1, b.terms().end());
  return Ordinal::from_terms(std::move(out));
}

Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }

Ordinal succ(const Ordinal& a) { return add(a, Ordinal::natural(1)); }

Ordinal mul_by_omega(const Ordinal& d) {
  if (d.is_zero()) return d;
  return Ordinal::omega_power(succ(d.leading_exponent()));
}

Ordinal sup(std::span<const Ordinal> values) {
  if (values.empty()) throw PreconditionViolation(kModule, "sup of an empty list");
  return *std::max_element(values.begin(), values.end());
}

std::ostream& operator<<(std::ostream& os, const Ordinal& a) { return os << a.to_string(); }

}  // namespace transfix
