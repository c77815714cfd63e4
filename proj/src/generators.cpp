#include "transfix/generators.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace transfix::gen {

Ordinal ordinal(Rng& rng, int depth, std::size_t max_terms, std::uint64_t max_coefficient) {
  if (depth <= 0) return Ordinal::natural(below(rng, max_coefficient + 1));
  const std::size_t n = below(rng, max_terms + 1);
  std::set<Ordinal, std::greater<>> exponents;
  for (std::size_t i = 0; i < n; ++i) exponents.insert(ordinal(rng, depth - 1, max_terms, max_coefficient));
  std::vector<OrdinalTerm> terms;
  for (const Ordinal& e : exponents) terms.push_back({e, 1 + below(rng, max_coefficient)});
  return Ordinal::from_terms(std::move(terms));
}

FiniteLattice set_lattice(Rng& rng, std::size_t atoms, std::size_t seeds) {
  std::vector<std::string> universe;
  for (std::size_t i = 0; i < atoms; ++i) universe.push_back(std::string(1, static_cast<char>('a' + i)));
  const std::uint32_t full = atoms >= 32 ? ~0u : (1u << atoms) - 1;
  std::set<std::uint32_t> family{0u, full};
  for (std::size_t i = 0; i < seeds; ++i) family.insert(static_cast<std::uint32_t>(rng()) & full);
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<std::uint32_t> snapshot(family.begin(), family.end());
    for (std::uint32_t a : snapshot) {
      for (std::uint32_t b : snapshot) {
        grew |= family.insert(a | b).second;
        grew |= family.insert(a & b).second;
      }
    }
  }
  return FiniteLattice::from_set_family(std::move(universe), {family.begin(), family.end()});
}

namespace {

// The two five-element lattices that are not distributive.
FiniteLattice diamond() {
  std::vector<std::vector<bool>> leq(5, std::vector<bool>(5, false));
  for (std::size_t i = 0; i < 5; ++i) {
    leq[i][i] = true;
    leq[0][i] = true;
    leq[i][4] = true;
  }
  return FiniteLattice::from_order({"0", "a", "b", "c", "1"}, leq);
}

FiniteLattice pentagon() {
  std::vector<std::vector<bool>> leq(5, std::vector<bool>(5, false));
  for (std::size_t i = 0; i < 5; ++i) {
    leq[i][i] = true;
    leq[0][i] = true;
    leq[i][4] = true;
  }
  leq[1][2] = true;  // a < b, c incomparable to both
  return FiniteLattice::from_order({"0", "a", "b", "c", "1"}, leq);
}

}  // namespace

FiniteLattice lattice(Rng& rng, std::size_t max_size) {
  max_size = std::max<std::size_t>(max_size, 1);
  for (;;) {
    switch (below(rng, 6)) {
      case 0:
        return make_chain(1 + below(rng, std::min<std::size_t>(max_size, 12)));
      case 1: {
        std::size_t atoms = 0;
        while (atoms < 6 && (std::size_t{2} << atoms) <= max_size) ++atoms;
        if (atoms == 0) break;
        std::vector<std::string> universe;
        const std::size_t k = 1 + below(rng, atoms);
        for (std::size_t i = 0; i < k; ++i) universe.push_back(std::string(1, static_cast<char>('p' + i)));
        return make_powerset(std::move(universe));
      }
      case 2: {
        const std::size_t a = 2 + below(rng, 3), b = 2 + below(rng, 3);
        if (a * b > max_size) break;
        return make_product(make_chain(a), make_chain(b));
      }
      case 3:
      case 4: {
        FiniteLattice l = set_lattice(rng, 2 + below(rng, 5), 1 + below(rng, 4));
        if (l.size() > max_size) break;
        return coin(rng) ? l : l.dual();
      }
      default:
        if (max_size < 5) break;
        return coin(rng) ? diamond() : pentagon();
    }
  }
}

MonotoneOp monotone_op(Rng& rng, const FiniteLattice& l) {
  const std::size_t n = l.size();
  std::vector<ElementId> table(n);
  switch (below(rng, 5)) {
    case 0:
      table = MonotoneOp::identity(l).table();
      break;
    case 1:
      table = MonotoneOp::constant(l, static_cast<ElementId>(below(rng, n))).table();
      break;
    case 2: {
      const auto c = static_cast<ElementId>(below(rng, n));
      for (ElementId x = 0; x < n; ++x) table[x] = l.join(x, c);
      break;
    }
    default: {
      // Monotone hull of a random table: f(x) = join of g(y) over y <= x.
      std::vector<ElementId> g(n);
      for (auto& v : g) v = static_cast<ElementId>(below(rng, n));
      for (ElementId x = 0; x < n; ++x) {
        ElementId acc = l.bottom();
        for (ElementId y = 0; y < n; ++y) {
          if (l.leq(y, x)) acc = l.join(acc, g[y]);
        }
        table[x] = acc;
      }
    }
  }
  MonotoneOp f(std::move(table));
  check_monotone(l, f);
  return f;
}

PolyFunctor converging_functor(Rng& rng) {
  PolyFunctor f;
  const bool constants_only = coin(rng);
  const std::size_t summands = 1 + below(rng, 3);
  char next = 'a';
  for (std::size_t i = 0; i < summands; ++i) {
    PolyFunctor::Summand s;
    s.arity = constants_only ? 0 : 1 + below(rng, kDefaultMaxArity);
    const std::size_t labels = 1 + below(rng, 2);
    for (std::size_t k = 0; k < labels; ++k) s.labels.push_back(std::string(1, next++));
    f.summands.push_back(std::move(s));
  }
  return f;
}

Algebra random_algebra(Rng& rng, const PolyFunctor& f, std::size_t carrier_size) {
  std::vector<Element> atoms;
  for (std::size_t i = 0; i < carrier_size; ++i) atoms.push_back(Element::atom("t" + std::to_string(i)));
  Algebra alg{FinSet(std::move(atoms)), {}};
  const std::size_t domain = *f.image_size(carrier_size);
  alg.structure.codomain_size = carrier_size;
  for (std::size_t i = 0; i < domain; ++i) alg.structure.image.push_back(below(rng, carrier_size));
  return alg;
}

namespace {

Expr random_expr(Rng& rng, const std::vector<std::string>& names, int depth) {
  const std::uint64_t pick = depth <= 0 ? below(rng, 2) : below(rng, 5);
  switch (pick) {
    case 0:
      return Expr::atom(coin(rng));
    case 1:
      return Expr::tr(names[below(rng, names.size())]);
    case 2:
      return Expr::negation(random_expr(rng, names, depth - 1));
    default: {
      // Draw operands in a fixed order; argument evaluation order is unspecified.
      Expr lhs = random_expr(rng, names, depth - 1);
      Expr rhs = random_expr(rng, names, depth - 1);
      return pick == 3 ? Expr::conjunction(std::move(lhs), std::move(rhs))
                       : Expr::disjunction(std::move(lhs), std::move(rhs));
    }
  }
}

}  // namespace

SentenceSystem sentence_system(Rng& rng, std::size_t sentences, int depth) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sentences; ++i) names.push_back("s" + std::to_string(i));
  std::map<std::string, Expr> bodies;
  for (const auto& name : names) bodies.emplace(name, random_expr(rng, names, depth));
  return SentenceSystem(std::move(bodies));
}

}  // namespace transfix::gen
