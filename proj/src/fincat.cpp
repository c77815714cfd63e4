#include "transfix/fincat.hpp"

#include <algorithm>
#include <set>

#include "transfix/errors.hpp"

namespace transfix {

namespace {

constexpr const char* kModule = "fincat";

std::optional<std::size_t> checked_pow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(out, base, &out)) return std::nullopt;
  }
  return out;
}

std::size_t image_size_or_throw(const PolyFunctor& f, std::size_t n, std::size_t cap) {
  auto size = f.image_size(n);
  if (!size || *size > cap) {
    throw CapExceeded(kModule, "F(X) for |X| = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  }
  return *size;
}

/// Advances a little-endian-last odometer over [0, base)^k; false on wrap.
bool next_tuple(std::vector<std::size_t>& digits, std::size_t base) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < base) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace

std::strong_ordering operator<=>(const Element& a, const Element& b) {
  if (auto c = a.summand <=> b.summand; c != 0) return c;
  if (auto c = a.label <=> b.label; c != 0) return c;
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
}

std::string Element::to_string() const {
  std::string out = label;
  if (!args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ',';
      out += args[i].to_string();
    }
    out += ')';
  }
  return out;
}

FinSet::FinSet(std::vector<Element> elements) : elements_(std::move(elements)) {
  std::set<Element> seen;
  for (const Element& e : elements_) {
    if (!seen.insert(e).second) throw PreconditionViolation(kModule, "duplicate element " + e.to_string());
  }
}

FinSet FinSet::from_distinct(std::vector<Element> elements) {
  FinSet s;
  s.elements_ = std::move(elements);
  return s;
}

std::optional<std::size_t> FinSet::index_of(const Element& e) const {
  auto it = std::find(elements_.begin(), elements_.end(), e);
  if (it == elements_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

bool FinMap::is_bijection() const {
  if (image.size() != codomain_size) return false;
  std::vector<bool> hit(codomain_size, false);
  for (std::size_t y : image) {
    if (y >= codomain_size || hit[y]) return false;
    hit[y] = true;
  }
  return true;
}

FinMap FinMap::inverse() const {
  if (!is_bijection()) throw PreconditionViolation(kModule, "inverse of a non-bijection");
  FinMap inv{std::vector<std::size_t>(codomain_size), image.size()};
  for (std::size_t x = 0; x < image.size(); ++x) inv.image[image[x]] = x;
  return inv;
}

FinMap FinMap::identity(std::size_t n) {
  FinMap m{std::vector<std::size_t>(n), n};
  for (std::size_t i = 0; i < n; ++i) m.image[i] = i;
  return m;
}

FinMap compose(const FinMap& g, const FinMap& f) {
  if (f.codomain_size != g.domain_size()) throw PreconditionViolation(kModule, "composing mismatched maps");
  FinMap out{std::vector<std::size_t>(f.domain_size()), g.codomain_size};
  for (std::size_t i = 0; i < f.domain_size(); ++i) out.image[i] = g(f(i));
  return out;
}

void PolyFunctor::validate(std::size_t max_arity) const {
  if (summands.empty()) throw PreconditionViolation(kModule, "functor needs at least one summand");
  for (std::size_t i = 0; i < summands.size(); ++i) {
    const Summand& s = summands[i];
    const std::string name = "summands[" + std::to_string(i) + "]";
    if (s.labels.empty()) throw PreconditionViolation(kModule, name + " has an empty label set");
    auto sorted = s.labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw PreconditionViolation(kModule, name + " repeats a label");
    }
    if (s.arity > max_arity) {
      throw PreconditionViolation(kModule, name + " arity " + std::to_string(s.arity) + " exceeds " +
                                               std::to_string(max_arity));
    }
  }
}

std::optional<std::size_t> PolyFunctor::image_size(std::size_t n) const {
  std::size_t total = 0;
  for (const Summand& s : summands) {
    auto power = checked_pow(n, s.arity);
    std::size_t term = 0;
    if (!power || __builtin_mul_overflow(*power, s.labels.size(), &term) ||
        __builtin_add_overflow(total, term, &total)) {
      return std::nullopt;
    }
  }
  return total;
}

FinSet apply_functor(const PolyFunctor& f, const FinSet& x, std::size_t cap) {
  const std::size_t total = image_size_or_throw(f, x.size(), cap);
  std::vector<Element> out;
  out.reserve(total);
  for (std::size_t i = 0; i < f.summands.size(); ++i) {
    const auto& s = f.summands[i];
    for (const std::string& a : s.labels) {
      if (s.arity > 0 && x.empty()) break;
      std::vector<std::size_t> tuple(s.arity, 0);
      do {
        Element e{static_cast<int>(i), a, {}};
        e.args.reserve(s.arity);
        for (std::size_t k : tuple) e.args.push_back(x[k]);
        out.push_back(std::move(e));
      } while (next_tuple(tuple, x.size()));
    }
  }
  return FinSet::from_distinct(std::move(out));
}

FinMap apply_functor_map(const PolyFunctor& f, const FinMap& m, std::size_t cap) {
  const std::size_t nx = m.domain_size(), ny = m.codomain_size;
  const std::size_t total = image_size_or_throw(f, nx, cap);
  FinMap out{{}, image_size_or_throw(f, ny, cap)};
  out.image.reserve(total);
  std::size_t offset_y = 0;
  for (const auto& s : f.summands) {
    const std::size_t block_y = *checked_pow(ny, s.arity);
    for (std::size_t a = 0; a < s.labels.size(); ++a) {
      if (s.arity > 0 && nx == 0) break;
      std::vector<std::size_t> tuple(s.arity, 0);
      do {
        std::size_t y = 0;
        for (std::size_t k : tuple) y = y * ny + m(k);
        out.image.push_back(offset_y + a * block_y + y);
      } while (next_tuple(tuple, nx));
    }
    offset_y += s.labels.size() * block_y;
  }
  return out;
}

InitialAlgebraResult initial_algebra(const PolyFunctor& f, std::size_t budget, std::size_t cap) {
  f.validate();
  FinSet current;  // X_n
  std::vector<std::size_t> sizes{0};
  FinMap connecting;  // c_{n-1}: X_{n-1} -> X_n
  for (std::size_t n = 0; n < budget; ++n) {
    const auto next_size = f.image_size(current.size());
    if (!next_size || *next_size > cap) {
      return DivergenceReport{sizes, "carrier would exceed cap " + std::to_string(cap) + " at stage " +
                                         std::to_string(n + 1)};
    }
    FinSet next = apply_functor(f, current, cap);
    sizes.push_back(next.size());
    connecting = n == 0 ? FinMap{{}, next.size()} : apply_functor_map(f, connecting, cap);
    if (connecting.is_bijection()) {
      return InitialAlgebra{Algebra{std::move(current), connecting.inverse()}, n, std::move(sizes)};
    }
    current = std::move(next);
  }
  return DivergenceReport{std::move(sizes), "budget of " + std::to_string(budget) + " stages exhausted"};
}

bool lambek_check(const PolyFunctor& f, const Algebra& alg) {
  const auto expected = f.image_size(alg.carrier.size());
  return expected && alg.structure.domain_size() == *expected &&
         alg.structure.codomain_size == alg.carrier.size() && alg.structure.is_bijection();
}

namespace {

void check_algebra_shape(const PolyFunctor& f, const Algebra& alg, const char* which) {
  const auto expected = f.image_size(alg.carrier.size());
  if (!expected || alg.structure.domain_size() != *expected || alg.structure.codomain_size != alg.carrier.size()) {
    throw PreconditionViolation(kModule, std::string(which) + " structure map does not match F(carrier) -> carrier");
  }
}

}  // namespace

bool is_homomorphism(const PolyFunctor& f, const Algebra& init, const Algebra& target, const FinMap& m) {
  if (m.domain_size() != init.carrier.size() || m.codomain_size != target.carrier.size()) return false;
  const FinMap fm = apply_functor_map(f, m);
  for (std::size_t z = 0; z < init.structure.domain_size(); ++z) {
    if (m(init.structure(z)) != target.structure(fm(z))) return false;
  }
  return true;
}

HomomorphismResult unique_homomorphism(const PolyFunctor& f, const Algebra& init, const Algebra& target) {
  check_algebra_shape(f, init, "source");
  check_algebra_shape(f, target, "target");
  if (init.carrier.size() > kMaxHomSourceSize || target.carrier.size() > kMaxHomTargetSize) {
    throw CapExceeded(kModule, "homomorphism enumeration bounded to |source| <= " +
                                   std::to_string(kMaxHomSourceSize) + ", |target| <= " +
                                   std::to_string(kMaxHomTargetSize));
  }
  CounterexampleReport report;
  const std::size_t ni = init.carrier.size(), nt = target.carrier.size();
  if (ni > 0 && nt == 0) return report;
  FinMap candidate{std::vector<std::size_t>(ni, 0), nt};
  do {
    if (is_homomorphism(f, init, target, candidate)) {
      report.homomorphisms.push_back(candidate);
      if (++report.found == 2) return report;
    }
  } while (next_tuple(candidate.image, nt));
  if (report.found == 1) return report.homomorphisms.front();
  return report;
}

ElementId poset_as_category_lfp(const FiniteLattice& l, const MonotoneOp& f) {
  if (!f.verified() || f.table().size() != l.size()) {
    throw PreconditionViolation(kModule, "operator must be verified monotone on this lattice");
  }
  ElementId x = l.bottom();
  for (;;) {
    const ElementId next = f(x);
    if (!l.leq(x, next)) throw PreconditionViolation(kModule, "chain has no connecting arrow at " + l.label(x));
    if (l.leq(next, x)) return x;
    x = next;
  }
}

}  // namespace transfix
