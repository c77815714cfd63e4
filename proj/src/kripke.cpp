#include "transfix/kripke.hpp"

#include <algorithm>

#include "transfix/errors.hpp"

namespace transfix {

namespace {

constexpr const char* kModule = "kripke";

void validate(const Expr& e, const std::map<std::string, Expr>& sentences, const std::string& owner) {
  auto arity = [&](std::size_t n) {
    if (e.operands.size() != n) {
      throw PreconditionViolation(kModule, "sentence " + owner + ": connective expects " + std::to_string(n) +
                                               " operand(s), got " + std::to_string(e.operands.size()));
    }
  };
  switch (e.kind) {
    case Expr::Kind::kAtom:
      arity(0);
      break;
    case Expr::Kind::kTr:
      arity(0);
      if (!sentences.contains(e.ref)) {
        throw PreconditionViolation(kModule, "sentence " + owner + " refers to undefined sentence " + e.ref);
      }
      break;
    case Expr::Kind::kNot:
      arity(1);
      break;
    case Expr::Kind::kAnd:
    case Expr::Kind::kOr:
      arity(2);
      break;
  }
  for (const Expr& op : e.operands) validate(op, sentences, owner);
}

Truth negate(Truth t) {
  switch (t) {
    case Truth::kTrue:
      return Truth::kFalse;
    case Truth::kFalse:
      return Truth::kTrue;
    default:
      return Truth::kUndefined;
  }
}

}  // namespace

char truth_char(Truth t) {
  switch (t) {
    case Truth::kTrue:
      return 'T';
    case Truth::kFalse:
      return 'F';
    default:
      return 'U';
  }
}

bool info_leq(Truth a, Truth b) { return a == Truth::kUndefined || a == b; }

bool info_leq(const PartialValuation& a, const PartialValuation& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!info_leq(a[i], b[i])) return false;
  }
  return true;
}

SentenceSystem::SentenceSystem(std::map<std::string, Expr> sentences) : sentences_(std::move(sentences)) {
  for (const auto& [name, body] : sentences_) {
    validate(body, sentences_, name);
    names_.push_back(name);
  }
}

std::size_t SentenceSystem::index_of(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) throw PreconditionViolation(kModule, "unknown sentence " + name);
  return static_cast<std::size_t>(it - names_.begin());
}

Truth evaluate(const SentenceSystem& sys, const Expr& e, const PartialValuation& v) {
  switch (e.kind) {
    case Expr::Kind::kAtom:
      return e.truth ? Truth::kTrue : Truth::kFalse;
    case Expr::Kind::kTr:
      return v[sys.index_of(e.ref)];
    case Expr::Kind::kNot:
      return negate(evaluate(sys, e.operands[0], v));
    case Expr::Kind::kAnd: {
      const Truth a = evaluate(sys, e.operands[0], v), b = evaluate(sys, e.operands[1], v);
      if (a == Truth::kFalse || b == Truth::kFalse) return Truth::kFalse;
      if (a == Truth::kTrue && b == Truth::kTrue) return Truth::kTrue;
      return Truth::kUndefined;
    }
    case Expr::Kind::kOr: {
      const Truth a = evaluate(sys, e.operands[0], v), b = evaluate(sys, e.operands[1], v);
      if (a == Truth::kTrue || b == Truth::kTrue) return Truth::kTrue;
      if (a == Truth::kFalse && b == Truth::kFalse) return Truth::kFalse;
      return Truth::kUndefined;
    }
  }
  return Truth::kUndefined;
}

PartialValuation jump(const SentenceSystem& sys, const PartialValuation& v) {
  if (v.size() != sys.size()) throw PreconditionViolation(kModule, "valuation is not total over the system");
  PartialValuation out;
  out.reserve(sys.size());
  for (const auto& [name, body] : sys.sentences()) out.push_back(evaluate(sys, body, v));
  return out;
}

KripkeFixpoint minimal_fixed_point(const SentenceSystem& sys) {
  KripkeFixpoint fp;
  fp.chain.emplace_back(sys.size(), Truth::kUndefined);
  for (PartialValuation next = jump(sys, fp.chain.back()); next != fp.chain.back(); next = jump(sys, fp.chain.back())) {
    fp.chain.push_back(std::move(next));
  }
  fp.valuation = fp.chain.back();
  fp.stage = fp.chain.size() - 1;
  return fp;
}

std::string to_string(Grounding g) {
  switch (g) {
    case Grounding::kGroundedTrue:
      return "groundedTrue";
    case Grounding::kGroundedFalse:
      return "groundedFalse";
    default:
      return "ungrounded";
  }
}

std::map<std::string, Grounding> classify(const SentenceSystem& sys) {
  const KripkeFixpoint fp = minimal_fixed_point(sys);
  std::map<std::string, Grounding> out;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const Truth t = fp.valuation[i];
    out[sys.names()[i]] = t == Truth::kTrue    ? Grounding::kGroundedTrue
                          : t == Truth::kFalse ? Grounding::kGroundedFalse
                                               : Grounding::kUngrounded;
  }
  return out;
}

}  // namespace transfix
