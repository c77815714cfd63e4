#include <gtest/gtest.h>

#include "transfix/errors.hpp"
#include "transfix/fincat.hpp"
#include "transfix/generators.hpp"

namespace transfix {
namespace {

PolyFunctor constant(std::vector<std::string> labels) { return {{{std::move(labels), 0}}}; }
PolyFunctor identity_shaped() { return {{{{"id"}, 1}}}; }
PolyFunctor one_plus_x() { return {{{{"nil"}, 0}, {{"cons"}, 1}}}; }

FinSet atoms(std::initializer_list<const char*> names) {
  std::vector<Element> out;
  for (const char* n : names) out.push_back(Element::atom(n));
  return FinSet(std::move(out));
}

TEST(ApplyFunctor, Counts) {
  EXPECT_EQ(apply_functor(constant({"a", "b", "c"}), FinSet()).size(), 3u);
  EXPECT_EQ(apply_functor(identity_shaped(), atoms({"x", "y"})).size(), 2u);
  const FinSet fx = apply_functor(one_plus_x(), atoms({"p", "q", "r", "s"}));
  EXPECT_EQ(fx.size(), 5u);
  EXPECT_EQ(fx[0].to_string(), "nil");
  EXPECT_EQ(fx[1].to_string(), "cons(p)");
  const PolyFunctor pairs{{{{"pair"}, 2}}};
  EXPECT_EQ(apply_functor(pairs, atoms({"x", "y", "z"})).size(), 9u);
}

TEST(ApplyFunctor, CapAndValidation) {
  const PolyFunctor cube{{{{"t"}, 3}}};
  std::vector<Element> many;
  for (int i = 0; i < 50; ++i) many.push_back(Element::atom("e" + std::to_string(i)));
  EXPECT_THROW(apply_functor(cube, FinSet(many)), CapExceeded);
  EXPECT_THROW(PolyFunctor{}.validate(), PreconditionViolation);
  EXPECT_THROW((PolyFunctor{{{{}, 0}}}.validate()), PreconditionViolation);
  EXPECT_THROW((PolyFunctor{{{{"a"}, 4}}}.validate()), PreconditionViolation);
  EXPECT_THROW(atoms({"x", "x"}), PreconditionViolation);
}

TEST(ApplyFunctorMap, Examples) {
  const auto f = one_plus_x();
  EXPECT_EQ(apply_functor_map(f, FinMap::identity(3)), FinMap::identity(4));
  // {a, b} -> {c}: nil -> nil, cons(a), cons(b) -> cons(c)
  const FinMap collapse{{0, 0}, 1};
  const FinMap fm = apply_functor_map(f, collapse);
  EXPECT_EQ(fm, (FinMap{{0, 1, 1}, 2}));
}

TEST(ApplyFunctorMap, AgreesWithElementwiseConstruction) {
  const PolyFunctor f{{{{"u", "v"}, 0}, {{"s"}, 1}, {{"p"}, 2}}};
  const FinSet x = atoms({"a", "b", "c"});
  const FinSet y = atoms({"d", "e"});
  const FinMap m{{1, 0, 1}, 2};
  const FinSet fx = apply_functor(f, x), fy = apply_functor(f, y);
  const FinMap fm = apply_functor_map(f, m);
  ASSERT_EQ(fm.domain_size(), fx.size());
  for (std::size_t i = 0; i < fx.size(); ++i) {
    Element expected = fx[i];
    for (auto& arg : expected.args) arg = y[m(*x.index_of(arg))];
    EXPECT_EQ(fy[fm(i)], expected) << fx[i].to_string();
  }
}

TEST(FunctorLaws, RandomTriples) {
  gen::Rng rng(3);
  for (int i = 0; i < 120; ++i) {
    PolyFunctor f = gen::converging_functor(rng);
    if (gen::coin(rng)) f.summands.push_back({{"z"}, gen::below(rng, 3)});
    const std::size_t nx = 1 + gen::below(rng, 3), ny = 1 + gen::below(rng, 3), nz = 1 + gen::below(rng, 3);
    FinMap m{{}, ny}, g{{}, nz};
    for (std::size_t k = 0; k < nx; ++k) m.image.push_back(gen::below(rng, ny));
    for (std::size_t k = 0; k < ny; ++k) g.image.push_back(gen::below(rng, nz));
    EXPECT_EQ(apply_functor_map(f, FinMap::identity(nx)), FinMap::identity(*f.image_size(nx)));
    EXPECT_EQ(apply_functor_map(f, compose(g, m)), compose(apply_functor_map(f, g), apply_functor_map(f, m)));
  }
}

TEST(InitialAlgebra, Examples) {
  const auto empty = std::get<InitialAlgebra>(initial_algebra(identity_shaped(), 10));
  EXPECT_EQ(empty.theta, 0u);
  EXPECT_TRUE(empty.algebra.carrier.empty());
  EXPECT_TRUE(lambek_check(identity_shaped(), empty.algebra));

  const auto a3 = constant({"a", "b", "c"});
  const auto c = std::get<InitialAlgebra>(initial_algebra(a3, 10));
  EXPECT_EQ(c.theta, 1u);
  EXPECT_EQ(c.algebra.carrier.size(), 3u);
  EXPECT_EQ(c.algebra.structure, FinMap::identity(3));
  EXPECT_TRUE(lambek_check(a3, c.algebra));

  const auto div = std::get<DivergenceReport>(initial_algebra(one_plus_x(), 10));
  EXPECT_EQ(div.growth, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));
}

TEST(InitialAlgebra, CapReportsDivergence) {
  const PolyFunctor trees{{{{"leaf"}, 0}, {{"node"}, 2}}};
  const auto div = std::get<DivergenceReport>(initial_algebra(trees, 50));
  EXPECT_EQ(div.growth, (std::vector<std::size_t>{0, 1, 2, 5, 26, 677}));
  EXPECT_NE(div.reason.find("cap"), std::string::npos);
}

TEST(Lambek, CollapsingMapFails) {
  const auto a2 = constant({"a", "b"});
  const Algebra bad{atoms({"x", "y"}), FinMap{{0, 0}, 2}};
  EXPECT_FALSE(lambek_check(a2, bad));
}

TEST(UniqueHomomorphism, Examples) {
  const auto a3 = constant({"a", "b", "c"});
  const auto init = std::get<InitialAlgebra>(initial_algebra(a3, 10)).algebra;
  const auto self = std::get<FinMap>(unique_homomorphism(a3, init, init));
  EXPECT_EQ(self, FinMap::identity(3));

  // Target carrier renamed and permuted: a -> q, b -> r, c -> p.
  const Algebra renamed{atoms({"p", "q", "r"}), FinMap{{1, 2, 0}, 3}};
  EXPECT_EQ(std::get<FinMap>(unique_homomorphism(a3, init, renamed)), (FinMap{{1, 2, 0}, 3}));

  const auto id_init = std::get<InitialAlgebra>(initial_algebra(identity_shaped(), 5)).algebra;
  const Algebra two{atoms({"u", "v"}), FinMap{{1, 0}, 2}};
  EXPECT_EQ(std::get<FinMap>(unique_homomorphism(identity_shaped(), id_init, two)), (FinMap{{}, 2}));
}

TEST(UniqueHomomorphism, NonInitialSourceHasCounterexample) {
  // (X = {u, v}, swap) for F(X) = X maps to itself by id and by the swap.
  const auto f = identity_shaped();
  const Algebra swap{atoms({"u", "v"}), FinMap{{1, 0}, 2}};
  const auto report = std::get<CounterexampleReport>(unique_homomorphism(f, swap, swap));
  EXPECT_EQ(report.found, 2u);
  const Algebra big{atoms({"a", "b", "c", "d", "e", "f"}), FinMap::identity(6)};
  EXPECT_THROW(unique_homomorphism(f, swap, big), CapExceeded);
}

TEST(FincatProperties, ConvergingFunctorsAreInitial) {
  gen::Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    const PolyFunctor f = gen::converging_functor(rng);
    const auto init = std::get<InitialAlgebra>(initial_algebra(f, 10));
    ASSERT_TRUE(lambek_check(f, init.algebra));
    for (std::size_t s = 0; s + 1 < init.sizes.size(); ++s) EXPECT_LE(init.sizes[s], init.sizes[s + 1]);
    if (init.algebra.carrier.size() > kMaxHomSourceSize) continue;
    for (int k = 0; k < 3; ++k) {
      const Algebra target = gen::random_algebra(rng, f, 1 + gen::below(rng, kMaxHomTargetSize));
      const auto h = unique_homomorphism(f, init.algebra, target);
      ASSERT_TRUE(std::holds_alternative<FinMap>(h));
      EXPECT_TRUE(is_homomorphism(f, init.algebra, target, std::get<FinMap>(h)));
    }
  }
}

TEST(PosetAsCategory, MatchesLfp) {
  const auto l = make_powerset({"a", "b"});
  MonotoneOp id = MonotoneOp::identity(l);
  check_monotone(l, id);
  EXPECT_EQ(poset_as_category_lfp(l, id), l.bottom());
  MonotoneOp c = MonotoneOp::constant(l, 2);
  check_monotone(l, c);
  EXPECT_EQ(poset_as_category_lfp(l, c), 2u);

  gen::Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const auto g = gen::lattice(rng, 64);
    const auto f = gen::monotone_op(rng, g);
    EXPECT_EQ(poset_as_category_lfp(g, f), lfp(g, f).element);
  }
}

}  // namespace
}  // namespace transfix
