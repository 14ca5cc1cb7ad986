#pragma once

#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dickson/budget.hpp"
#include "dickson/nat.hpp"

namespace dickson {

/// Error raised by the DSL parsers. Carries the byte offset of the failure
/// and the set of tokens that would have been accepted there.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, std::set<std::string> expected, const std::string& found);

  std::size_t position() const { return position_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::set<std::string> expected_;
};

namespace detail {
class SequenceNode;
}

/// A total function N -> N with a finite description.
///
/// Sequences are immutable handles over a shared representation. Shifted
/// views are index arithmetic over the same node; black-box rules memoize
/// their results per Sequence. Evaluation goes through `at`, which charges
/// the caller's Budget one unit.
class Sequence {
 public:
  /// Evaluator for black-box rules supplied by library users.
  using Rule = std::function<Nat(Index)>;
  /// Evaluator for rules that themselves evaluate other sequences, such as
  /// the engine's derived sequences. Receives the caller's budget.
  using BudgetedRule = std::function<Nat(Index, Budget&)>;

  static Sequence constant(Nat c);
  static Sequence affine(Nat slope, Nat intercept);
  static Sequence prefix(std::vector<Nat> head, Sequence tail);
  static Sequence periodic(std::vector<Nat> period);
  /// n, n-1, ..., 1, 0, 0, ...
  static Sequence decreasing(Nat n);
  /// n, n-1, ..., 1, n+1, n+2, ...: member n of the family that admits no
  /// pair good for all members at once.
  static Sequence counterexample(Nat n);
  static Sequence sum(Sequence lhs, Sequence rhs);
  /// Memoized black-box rule. Totality cannot be verified; a rule that loops
  /// loops.
  static Sequence rule(std::string name, Rule fn);
  static Sequence budgeted_rule(std::string name, BudgetedRule fn);

  /// View with shifted(d)(n) = (*this)(n + d). Nested shifts collapse.
  Sequence shifted(Index offset) const;

  /// Value at position n; charges one evaluation.
  Nat at(Index n, Budget& budget) const;

  /// DSL text. Black-box rules print as `rule:<name>` which does not parse.
  std::string to_dsl() const;

 private:
  explicit Sequence(std::shared_ptr<const detail::SequenceNode> node) : node_(std::move(node)) {}

  std::shared_ptr<const detail::SequenceNode> node_;
};

/// Shifts every sequence of a family by the same offset.
std::vector<Sequence> shift_all(const std::vector<Sequence>& seqs, Index offset);

/// Parses the sequence DSL:
///   const(c) | affine(a,b) | prefix(v1,...,vk);<seq> | periodic(v1,...,vk)
///   | dec(n) | cex(n) | sum(<seq>,<seq>) | shift(<seq>,d)
/// Whitespace is ignored everywhere.
Sequence parse_sequence(std::string_view text);

/// A 2-coloring of N: a sequence whose values must be 0 or 1.
class Coloring {
 public:
  explicit Coloring(Sequence rule) : rule_(std::move(rule)) {}

  /// Color at n; throws std::domain_error when the rule leaves {0,1}.
  int at(Index n, Budget& budget) const;

  const Sequence& sequence() const { return rule_; }

 private:
  Sequence rule_;
};

}  // namespace dickson
