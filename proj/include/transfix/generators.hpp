#pragma once

// Seeded instance generators for property batteries. Only generators draw
// random numbers; every algorithm in the library is deterministic.

#include <cstdint>
#include <random>
#include <vector>

#include "transfix/fincat.hpp"
#include "transfix/game.hpp"
#include "transfix/kripke.hpp"
#include "transfix/lattice.hpp"
#include "transfix/ordinal.hpp"

namespace transfix::gen {

using Rng = std::mt19937_64;

/// Uniform draw in [0, n). Plain modulo keeps results identical across
/// standard libraries (std::uniform_int_distribution is not portable).
inline std::uint64_t below(Rng& rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }
inline bool coin(Rng& rng) { return (rng() & 1u) != 0; }

/// Random CNF ordinal with at most `max_terms` terms per level, exponent
/// nesting up to `depth`, and coefficients in [1, max_coefficient].
Ordinal ordinal(Rng& rng, int depth = 2, std::size_t max_terms = 3, std::uint64_t max_coefficient = 4);

/// Sublattice of the powerset of `atoms` atoms: a random family closed under
/// union and intersection (at most 2^atoms elements).
FiniteLattice set_lattice(Rng& rng, std::size_t atoms, std::size_t seeds);

/// Random lattice of at most `max_size` elements (max_size >= 1).
FiniteLattice lattice(Rng& rng, std::size_t max_size);

/// Random monotone operator: x -> join { g(y) | y <= x } for a random table g,
/// optionally mixed with identity/constant/join-with-c shapes. Verified.
MonotoneOp monotone_op(Rng& rng, const FiniteLattice& l);

/// Polynomial functor whose initial chain converges: either all summands have
/// arity 0 (theta 1) or none does (theta 0).
PolyFunctor converging_functor(Rng& rng);

/// Random algebra for `f` on `carrier_size` atoms t0, t1, ...
Algebra random_algebra(Rng& rng, const PolyFunctor& f, std::size_t carrier_size);

/// Random sentence system over `sentences` names with bodies of bounded depth.
SentenceSystem sentence_system(Rng& rng, std::size_t sentences, int depth = 2);

}  // namespace transfix::gen
