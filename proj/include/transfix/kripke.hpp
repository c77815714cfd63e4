#pragma once

#include <map>
#include <string>
#include <vector>

namespace transfix {

/// Strong Kleene truth values. Information order: U below both T and F.
enum class Truth { kUndefined, kTrue, kFalse };

char truth_char(Truth t);
bool info_leq(Truth a, Truth b);

/// Sentence body: atom, truth-predicate reference, or a connective.
struct Expr {
  enum class Kind { kAtom, kTr, kNot, kAnd, kOr };
  Kind kind = Kind::kAtom;
  bool truth = false;             // kAtom
  std::string ref;                // kTr
  std::vector<Expr> operands;     // kNot: 1, kAnd/kOr: 2

  static Expr atom(bool value) { return {Kind::kAtom, value, {}, {}}; }
  static Expr tr(std::string name) { return {Kind::kTr, false, std::move(name), {}}; }
  static Expr negation(Expr e) { return {Kind::kNot, false, {}, {std::move(e)}}; }
  static Expr conjunction(Expr a, Expr b) { return {Kind::kAnd, false, {}, {std::move(a), std::move(b)}}; }
  static Expr disjunction(Expr a, Expr b) { return {Kind::kOr, false, {}, {std::move(a), std::move(b)}}; }

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// A finite system of named self-referential sentences. Names are kept in
/// sorted order; valuations are indexed by that order.
class SentenceSystem {
 public:
  /// Throws PreconditionViolation if a Tr reference is unresolved or an
  /// operand count is wrong.
  explicit SentenceSystem(std::map<std::string, Expr> sentences);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::map<std::string, Expr>& sentences() const { return sentences_; }
  std::size_t index_of(const std::string& name) const;

  friend bool operator==(const SentenceSystem& a, const SentenceSystem& b) { return a.sentences_ == b.sentences_; }

 private:
  std::map<std::string, Expr> sentences_;
  std::vector<std::string> names_;
};

/// Total valuation, one value per sentence in name order.
using PartialValuation = std::vector<Truth>;

/// Pointwise information order.
bool info_leq(const PartialValuation& a, const PartialValuation& b);

/// Strong Kleene evaluation of `e` where Tr(n) reads v(n).
Truth evaluate(const SentenceSystem& sys, const Expr& e, const PartialValuation& v);

/// One application of the truth jump to every sentence.
PartialValuation jump(const SentenceSystem& sys, const PartialValuation& v);

struct KripkeFixpoint {
  PartialValuation valuation;
  std::size_t stage = 0;
  std::vector<PartialValuation> chain;  // stages 0..stage
};

/// Iterates jump from all-U until it stops changing.
KripkeFixpoint minimal_fixed_point(const SentenceSystem& sys);

enum class Grounding { kGroundedTrue, kGroundedFalse, kUngrounded };

std::string to_string(Grounding g);

std::map<std::string, Grounding> classify(const SentenceSystem& sys);

}  // namespace transfix
