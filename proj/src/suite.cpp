#include <algorithm>

#include "transfix/errors.hpp"
#include "transfix/generators.hpp"
#include "transfix/scenario.hpp"

namespace transfix {

namespace {

// FNV-1a over the textual results, so the digest pins computed values and
// not just pass counts.
class Digest {
 public:
  void add(const std::string& s) {
    for (unsigned char c : s) {
      h_ ^= c;
      h_ *= 0x100000001b3ull;
    }
    h_ ^= 0xff;
    h_ *= 0x100000001b3ull;
  }
  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) out[15 - i] = digits[(h_ >> (4 * i)) & 0xf];
    return out;
  }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

struct Battery {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> failed;
  Digest digest;

  void check(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    ++failures;
    if (failed.size() < 5) failed.push_back(what);
  }
  Json json() const { return {{"cases", cases}, {"failures", failures}, {"failed", failed}, {"digest", digest.hex()}}; }
};

Battery ordinal_battery(gen::Rng& rng) {
  Battery b;
  std::vector<Ordinal> c;
  for (int i = 0; i < 120; ++i) c.push_back(gen::ordinal(rng, 2, 3, 3));
  for (const Ordinal& a : c) {
    b.digest.add(a.to_string());
    b.check(Ordinal::parse(a.to_string()) == a, "round trip " + a.to_string());
    b.check(a < succ(a) && a + Ordinal::natural(1) == succ(a), "succ " + a.to_string());
  }
  for (std::size_t i = 0; i < c.size(); i += 3) {
    for (std::size_t j = 0; j < c.size(); j += 4) {
      const auto ij = compare(c[i], c[j]);
      b.check((ij < 0) == (compare(c[j], c[i]) > 0), "antisymmetry " + c[i].to_string() + " " + c[j].to_string());
      const Ordinal& k = c[(i + j) % c.size()];
      b.check((c[i] + c[j]) + k == c[i] + (c[j] + k), "associativity " + c[i].to_string());
      b.digest.add((c[i] + c[j]).to_string());
    }
  }
  return b;
}

Battery lattice_battery(gen::Rng& rng) {
  Battery b;
  for (int i = 0; i < 200; ++i) {
    const FiniteLattice l = gen::lattice(rng, 64);
    const MonotoneOp f = gen::monotone_op(rng, l);
    const auto fps = fixed_points(l, f);
    const auto lo = lfp(l, f);
    const auto hi = gfp(l, f);
    const std::string tag = "case " + std::to_string(i);
    b.check(!fps.empty(), tag + ": no fixed point");
    b.check(std::all_of(fps.begin(), fps.end(), [&](ElementId y) { return l.leq(lo.element, y) && l.leq(y, hi.element); }),
            tag + ": lfp/gfp are not the extreme fixed points");
    b.check(lo.stage <= l.height() && hi.stage <= l.height(), tag + ": stage exceeds height");
    b.check(poset_as_category_lfp(l, f) == lo.element, tag + ": categorical lfp differs");
    b.digest.add(l.label(lo.element) + "@" + std::to_string(lo.stage) + "/" + l.label(hi.element));
  }
  return b;
}

Battery engine_battery(gen::Rng& rng) {
  Battery b;
  for (int i = 0; i < 600; ++i) {
    std::vector<Ordinal> cuts;
    const std::size_t k = 1 + gen::below(rng, 3);
    for (std::size_t j = 0; j < k; ++j) cuts.push_back(gen::ordinal(rng, 1, 2, 3));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.front().is_zero()) cuts.erase(cuts.begin());
    if (cuts.empty()) continue;
    std::vector<StepRegion> regions;
    Ordinal lo;
    for (std::size_t j = 0; j <= cuts.size(); ++j) {
      Ordinal inc;
      if (j < cuts.size()) {
        inc = gen::coin(rng) ? Ordinal::natural(1 + gen::below(rng, 3)) : gen::ordinal(rng, 1, 1, 2);
        if (inc.is_zero()) inc = Ordinal::natural(1);
      }
      const auto hi = j < cuts.size() ? std::optional(cuts[j]) : std::nullopt;
      regions.push_back({lo, hi, inc});
      if (hi) lo = *hi;
    }
    std::optional<OrdinalStepOperator> op;
    try {
      op.emplace(regions, Ordinal());
    } catch (const PreconditionViolation&) {
      continue;
    }
    const auto t = run_transfinite(*op, {1000, 16});
    const std::string tag = "case " + std::to_string(i);
    if (!t.theta) {
      b.digest.add("diverged");
      continue;
    }
    b.check(verify_fixed(OrdinalDomain{&*op}, t), tag + ": trace fails verify_fixed");
    b.check(op->apply(*t.fixed_value) == *t.fixed_value, tag + ": value is not fixed");
    b.check(run_transfinite(*op, {5000, 64}).theta == t.theta, tag + ": theta depends on the budget");
    b.digest.add(t.theta->to_string() + "/" + t.fixed_value->to_string());
  }
  return b;
}

Battery fincat_battery(gen::Rng& rng) {
  Battery b;
  for (int i = 0; i < 30; ++i) {
    const PolyFunctor f = gen::converging_functor(rng);
    const auto res = initial_algebra(f, 10);
    const std::string tag = "functor " + std::to_string(i);
    const auto* init = std::get_if<InitialAlgebra>(&res);
    b.check(init != nullptr, tag + ": did not converge");
    if (!init) continue;
    b.check(lambek_check(f, init->algebra), tag + ": structure map is not a bijection");
    b.digest.add(std::to_string(init->theta) + ":" + std::to_string(init->algebra.carrier.size()));
    for (std::size_t n = 1; n <= 3; ++n) {
      const Algebra target = gen::random_algebra(rng, f, n);
      const auto h = unique_homomorphism(f, init->algebra, target);
      b.check(std::holds_alternative<FinMap>(h), tag + ": homomorphism into a size " + std::to_string(n) + " target not unique");
    }
  }
  const PolyFunctor lists{{{{"nil"}, 0}, {{"cons"}, 1}}};
  const auto growth = initial_algebra(lists, 12);
  b.check(std::holds_alternative<DivergenceReport>(growth), "1 + X converged");
  if (const auto* d = std::get_if<DivergenceReport>(&growth)) {
    for (std::size_t n = 0; n < d->growth.size(); ++n) {
      b.check(d->growth[n] == n, "1 + X growth at " + std::to_string(n));
      b.digest.add(std::to_string(d->growth[n]));
    }
  }
  return b;
}

Battery kripke_battery(gen::Rng& rng) {
  Battery b;
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = 1 + gen::below(rng, 3);
    const SentenceSystem sys = gen::sentence_system(rng, k);
    const auto fp = minimal_fixed_point(sys);
    const std::string tag = "system " + std::to_string(i);
    b.check(jump(sys, fp.valuation) == fp.valuation, tag + ": not fixed");
    // Every valuation pair: jump is monotone, and the fixed point is below all fixed points.
    std::vector<PartialValuation> all{PartialValuation(k, Truth::kUndefined)};
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<PartialValuation> next;
      for (const auto& v : all) {
        for (Truth t : {Truth::kUndefined, Truth::kTrue, Truth::kFalse}) {
          auto w = v;
          w[j] = t;
          next.push_back(w);
        }
      }
      all = std::move(next);
    }
    bool monotone = true, minimal = true;
    for (const auto& u : all) {
      const auto ju = jump(sys, u);
      if (ju == u && !info_leq(fp.valuation, u)) minimal = false;
      for (const auto& v : all) {
        if (info_leq(u, v) && !info_leq(ju, jump(sys, v))) monotone = false;
      }
    }
    b.check(monotone, tag + ": jump not monotone");
    b.check(minimal, tag + ": fixed point not minimal");
    std::string s;
    for (Truth t : fp.valuation) s += truth_char(t);
    b.digest.add(s + "@" + std::to_string(fp.stage));
  }
  return b;
}

Battery game_battery(gen::Rng& rng) {
  Battery b;
  for (int i = 0; i < 100; ++i) {
    const FiniteLattice l = gen::lattice(rng, 12);
    const MonotoneOp f = gen::monotone_op(rng, l);
    const std::size_t theta = lfp(l, f).stage;
    if (theta > 4) continue;
    const std::string tag = "game " + std::to_string(i);
    const ReflectiveGameSpec spec = alignment_game(l, f, std::max<std::size_t>(theta, 1));
    const AssumptionReport a = check_assumptions(spec);
    b.check(a.all(), tag + ": alignment game fails the hypothesis check");
    const auto eqs = enumerate_reflective_equilibria(spec);
    const auto stitched = stitch_equilibrium(spec);
    const auto* eq = std::get_if<ReflectiveEquilibrium>(&stitched);
    b.check(eq != nullptr, tag + ": stitching failed");
    if (!eq) continue;
    b.check(!eqs.empty() && std::all_of(eqs.begin(), eqs.end(), [&](const auto& e) { return e.outcomes == eq->outcomes; }),
            tag + ": outcome sequence not unique");
    const CorrespondenceResult c = correspondence_check(l, f);
    b.check(c.ok, tag + ": " + c.diagnostics);
    b.digest.add(eq->final_outcome + "@" + std::to_string(stabilization_stage(*eq)));
  }
  const ReflectiveGameSpec cx = continuity_counterexample();
  b.check(!check_assumptions(cx).continuity_of_payoffs, "counterexample passes the continuity check");
  const auto cx_eqs = enumerate_reflective_equilibria(cx);
  b.check(std::any_of(cx_eqs.begin(), cx_eqs.end(), [&](const auto& e) { return e.outcomes != cx_eqs.front().outcomes; }),
          "counterexample has a unique outcome sequence");
  return b;
}

}  // namespace

Json run_suite(std::uint64_t seed) {
  gen::Rng rng(seed);
  Json batteries = Json::object();
  std::size_t failures = 0;
  auto record = [&](const char* name, const Battery& b) {
    batteries[name] = b.json();
    failures += b.failures;
  };
  record("ordinal", ordinal_battery(rng));
  record("lattice", lattice_battery(rng));
  record("engine", engine_battery(rng));
  record("fincat", fincat_battery(rng));
  record("kripke", kripke_battery(rng));
  record("game", game_battery(rng));
  return {{"seed", seed}, {"batteries", batteries}, {"failures", failures}};
}

}  // namespace transfix
