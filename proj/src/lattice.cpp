#include "transfix/lattice.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

#include "transfix/errors.hpp"

namespace transfix {

namespace {

constexpr const char* kModule = "lattice";

void require_size(std::size_t n) {
  if (n == 0) throw PreconditionViolation(kModule, "a lattice needs at least one element");
  if (n > kMaxLatticeSize) {
    throw CapExceeded(kModule, "lattice of " + std::to_string(n) + " elements exceeds cap " +
                                   std::to_string(kMaxLatticeSize));
  }
}

}  // namespace

std::string subset_label(const std::vector<std::string>& universe, std::uint32_t mask) {
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (mask & (1u << i)) atoms.push_back(universe[i]);
  }
  std::sort(atoms.begin(), atoms.end());
  std::string out = "[";
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += ',';
    out += '"' + atoms[i] + '"';
  }
  return out + "]";
}

FiniteLattice FiniteLattice::from_order(std::vector<std::string> labels,
                                        const std::vector<std::vector<bool>>& leq) {
  const std::size_t n = labels.size();
  require_size(n);
  if (leq.size() != n) throw PreconditionViolation(kModule, "order relation has wrong dimension");
  for (const auto& row : leq) {
    if (row.size() != n) throw PreconditionViolation(kModule, "order relation has wrong dimension");
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (!leq[a][a]) throw PreconditionViolation(kModule, "order is not reflexive at " + labels[a]);
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && leq[a][b] && leq[b][a]) {
        throw PreconditionViolation(kModule, "order is not antisymmetric: " + labels[a] + ", " + labels[b]);
      }
      for (std::size_t c = 0; c < n; ++c) {
        if (leq[a][b] && leq[b][c] && !leq[a][c]) {
          throw PreconditionViolation(kModule, "order is not transitive at " + labels[a] + " <= " +
                                                   labels[b] + " <= " + labels[c]);
        }
      }
    }
  }

  FiniteLattice l;
  l.labels_ = std::move(labels);
  l.leq_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) l.leq_[a * n + b] = leq[a][b] ? 1 : 0;
  }

  // Down-set and up-set sizes: the lub of a pair is the upper bound with the
  // smallest down-set, the glb the lower bound with the smallest up-set.
  std::vector<std::size_t> below(n, 0), above(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (leq[b][a]) ++below[a];
      if (leq[a][b]) ++above[a];
    }
  }

  l.join_.assign(n * n, 0);
  l.meet_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      std::optional<std::size_t> lub, glb;
      for (std::size_t u = 0; u < n; ++u) {
        if (leq[a][u] && leq[b][u] && (!lub || below[u] < below[*lub])) lub = u;
        if (leq[u][a] && leq[u][b] && (!glb || above[u] < above[*glb])) glb = u;
      }
      if (!lub || !glb) {
        throw PreconditionViolation(kModule, "no bound for " + l.labels_[a] + ", " + l.labels_[b]);
      }
      for (std::size_t u = 0; u < n; ++u) {
        if (leq[a][u] && leq[b][u] && !leq[*lub][u]) {
          throw PreconditionViolation(kModule, "no least upper bound for " + l.labels_[a] + ", " + l.labels_[b]);
        }
        if (leq[u][a] && leq[u][b] && !leq[u][*glb]) {
          throw PreconditionViolation(kModule, "no greatest lower bound for " + l.labels_[a] + ", " + l.labels_[b]);
        }
      }
      l.join_[a * n + b] = l.join_[b * n + a] = static_cast<ElementId>(*lub);
      l.meet_[a * n + b] = l.meet_[b * n + a] = static_cast<ElementId>(*glb);
    }
  }

  ElementId bot = 0, top = 0;
  for (ElementId x = 1; x < n; ++x) {
    bot = l.meet(bot, x);
    top = l.join(top, x);
  }
  l.bottom_ = bot;
  l.top_ = top;
  l.compute_height();
  return l;
}

FiniteLattice FiniteLattice::from_set_family(std::vector<std::string> universe,
                                             std::vector<std::uint32_t> masks) {
  if (universe.size() > 32) throw CapExceeded(kModule, "set families support at most 32 atoms");
  require_size(masks.size());
  const std::uint32_t full = universe.size() == 32 ? ~0u : ((1u << universe.size()) - 1u);
  for (std::uint32_t m : masks) {
    if (m & ~full) throw PreconditionViolation(kModule, "subset mentions atoms outside the universe");
  }
  std::sort(masks.begin(), masks.end(), [](std::uint32_t x, std::uint32_t y) {
    const int px = std::popcount(x), py = std::popcount(y);
    return px != py ? px < py : x < y;
  });
  if (std::adjacent_find(masks.begin(), masks.end()) != masks.end()) {
    throw PreconditionViolation(kModule, "duplicate subset in family");
  }

  const std::size_t n = masks.size();
  std::unordered_map<std::uint32_t, ElementId> id_of;
  for (std::size_t i = 0; i < n; ++i) id_of.emplace(masks[i], static_cast<ElementId>(i));

  FiniteLattice l;
  l.universe_ = std::move(universe);
  l.masks_ = std::move(masks);
  l.labels_.reserve(n);
  for (std::uint32_t m : l.masks_) l.labels_.push_back(subset_label(l.universe_, m));
  l.leq_.assign(n * n, 0);
  l.join_.assign(n * n, 0);
  l.meet_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::uint32_t ma = l.masks_[a], mb = l.masks_[b];
      l.leq_[a * n + b] = (ma & ~mb) == 0 ? 1 : 0;
      auto j = id_of.find(ma | mb);
      auto m = id_of.find(ma & mb);
      if (j == id_of.end() || m == id_of.end()) {
        throw PreconditionViolation(kModule, "family not closed under union/intersection at " +
                                                 l.labels_[a] + ", " + l.labels_[b]);
      }
      l.join_[a * n + b] = j->second;
      l.meet_[a * n + b] = m->second;
    }
  }
  l.bottom_ = 0;
  l.top_ = static_cast<ElementId>(n - 1);
  l.compute_height();
  return l;
}

void FiniteLattice::compute_height() {
  const std::size_t n = size();
  std::vector<std::size_t> below(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) below[a] += leq_[b * n + a];
  }
  std::vector<ElementId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](ElementId x, ElementId y) { return below[x] < below[y]; });
  std::vector<std::size_t> depth(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const ElementId x = order[i];
    for (std::size_t j = 0; j < i; ++j) {
      const ElementId y = order[j];
      if (y != x && leq(y, x)) depth[x] = std::max(depth[x], depth[y] + 1);
    }
  }
  height_ = depth[top_];
}

std::optional<ElementId> FiniteLattice::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<ElementId>(it - labels_.begin());
}

std::optional<ElementId> FiniteLattice::find_mask(std::uint32_t mask) const {
  auto it = std::find(masks_.begin(), masks_.end(), mask);
  if (it == masks_.end()) return std::nullopt;
  return static_cast<ElementId>(it - masks_.begin());
}

FiniteLattice FiniteLattice::dual() const {
  const std::size_t n = size();
  FiniteLattice d;
  d.labels_ = labels_;
  d.leq_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) d.leq_[a * n + b] = leq_[b * n + a];
  }
  d.join_ = meet_;
  d.meet_ = join_;
  d.bottom_ = top_;
  d.top_ = bottom_;
  d.height_ = height_;
  return d;
}

std::optional<std::string> FiniteLattice::check_axioms() const {
  const std::size_t n = size();
  for (ElementId a = 0; a < n; ++a) {
    if (!leq(a, a)) return "not reflexive at " + label(a);
    if (!leq(bottom_, a)) return "bottom not below " + label(a);
    if (!leq(a, top_)) return "top not above " + label(a);
    for (ElementId b = 0; b < n; ++b) {
      if (a != b && leq(a, b) && leq(b, a)) return "not antisymmetric at " + label(a) + ", " + label(b);
      const ElementId j = join(a, b), m = meet(a, b);
      if (!leq(a, j) || !leq(b, j)) return "join not an upper bound of " + label(a) + ", " + label(b);
      if (!leq(m, a) || !leq(m, b)) return "meet not a lower bound of " + label(a) + ", " + label(b);
      for (ElementId c = 0; c < n; ++c) {
        if (leq(a, b) && leq(b, c) && !leq(a, c)) return "not transitive at " + label(a);
        if (leq(a, c) && leq(b, c) && !leq(j, c)) return "join not least for " + label(a) + ", " + label(b);
        if (leq(c, a) && leq(c, b) && !leq(c, m)) return "meet not greatest for " + label(a) + ", " + label(b);
      }
    }
  }
  return std::nullopt;
}

FiniteLattice make_powerset(std::vector<std::string> universe, std::size_t cap) {
  if (universe.size() > cap) {
    throw CapExceeded(kModule, "powerset universe of " + std::to_string(universe.size()) +
                                   " atoms exceeds cap " + std::to_string(cap));
  }
  {
    auto sorted = universe;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw PreconditionViolation(kModule, "duplicate atom in universe");
    }
  }
  const std::uint32_t count = 1u << universe.size();
  std::vector<std::uint32_t> masks(count);
  std::iota(masks.begin(), masks.end(), 0u);
  return FiniteLattice::from_set_family(std::move(universe), std::move(masks));
}

FiniteLattice make_chain(std::size_t n) {
  require_size(n);
  std::vector<std::string> labels;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    labels.push_back(std::to_string(a));
    for (std::size_t b = a; b < n; ++b) leq[a][b] = true;
  }
  return FiniteLattice::from_order(std::move(labels), leq);
}

FiniteLattice make_product(const FiniteLattice& a, const FiniteLattice& b) {
  const std::size_t n = a.size() * b.size();
  require_size(n);
  std::vector<std::string> labels;
  labels.reserve(n);
  for (ElementId x = 0; x < a.size(); ++x) {
    for (ElementId y = 0; y < b.size(); ++y) labels.push_back("(" + a.label(x) + "," + b.label(y) + ")");
  }
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      const auto x1 = static_cast<ElementId>(p / b.size()), y1 = static_cast<ElementId>(p % b.size());
      const auto x2 = static_cast<ElementId>(q / b.size()), y2 = static_cast<ElementId>(q % b.size());
      leq[p][q] = a.leq(x1, x2) && b.leq(y1, y2);
    }
  }
  return FiniteLattice::from_order(std::move(labels), leq);
}

MonotoneOp MonotoneOp::identity(const FiniteLattice& l) {
  std::vector<ElementId> t(l.size());
  std::iota(t.begin(), t.end(), 0);
  return MonotoneOp(std::move(t));
}

MonotoneOp MonotoneOp::constant(const FiniteLattice& l, ElementId c) {
  return MonotoneOp(std::vector<ElementId>(l.size(), c));
}

std::optional<std::pair<ElementId, ElementId>> monotonicity_witness(const FiniteLattice& l,
                                                                     const MonotoneOp& f) {
  for (ElementId a = 0; a < l.size(); ++a) {
    for (ElementId b = 0; b < l.size(); ++b) {
      if (l.leq(a, b) && !l.leq(f(a), f(b))) return std::pair{a, b};
    }
  }
  return std::nullopt;
}

bool check_monotone(const FiniteLattice& l, MonotoneOp& f) {
  f.verified_ = false;
  if (f.table_.size() != l.size()) return false;
  for (ElementId v : f.table_) {
    if (v >= l.size()) return false;
  }
  f.verified_ = !monotonicity_witness(l, f).has_value();
  return f.verified_;
}

namespace {

void require_verified(const FiniteLattice& l, const MonotoneOp& f) {
  if (!f.verified() || f.table().size() != l.size()) {
    throw PreconditionViolation(kModule, "operator must be verified monotone on this lattice");
  }
}

FixpointResult iterate_from(ElementId start, const MonotoneOp& f) {
  ElementId x = start;
  std::size_t n = 0;
  for (ElementId next = f(x); next != x; next = f(x)) {
    x = next;
    ++n;
  }
  return {x, n};
}

}  // namespace

FixpointResult lfp(const FiniteLattice& l, const MonotoneOp& f) {
  require_verified(l, f);
  return iterate_from(l.bottom(), f);
}

FixpointResult gfp(const FiniteLattice& l, const MonotoneOp& f) {
  require_verified(l, f);
  return iterate_from(l.top(), f);
}

std::vector<ElementId> kleene_chain(const FiniteLattice& l, const MonotoneOp& f) {
  require_verified(l, f);
  std::vector<ElementId> chain{l.bottom()};
  for (ElementId next = f(chain.back()); next != chain.back(); next = f(chain.back())) chain.push_back(next);
  return chain;
}

std::vector<ElementId> fixed_points(const FiniteLattice& l, const MonotoneOp& f) {
  if (f.table().size() != l.size()) throw PreconditionViolation(kModule, "operator is not total on the lattice");
  std::vector<ElementId> out;
  for (ElementId x = 0; x < l.size(); ++x) {
    if (f(x) == x) out.push_back(x);
  }
  return out;
}

}  // namespace transfix
