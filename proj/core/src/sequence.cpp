#include "dickson/sequence.hpp"

#include <map>
#include <mutex>
#include <sstream>

#include "text_cursor.hpp"

namespace dickson {

namespace {

std::string join_expected(const std::set<std::string>& expected) {
  std::string out;
  for (const auto& e : expected) {
    if (!out.empty()) out += ", ";
    out += "'" + e + "'";
  }
  return out;
}

std::string join_values(const std::vector<Nat>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += values[i].str();
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::size_t position, std::set<std::string> expected, const std::string& found)
    : std::runtime_error("parse error at position " + std::to_string(position) + ": expected one of " +
                         join_expected(expected) + " but found '" + found + "'"),
      position_(position),
      expected_(std::move(expected)) {}

namespace detail {

class SequenceNode {
 public:
  virtual ~SequenceNode() = default;
  /// Uncharged evaluation; `Sequence::at` charges once per top-level call.
  virtual Nat value(Index n, Budget& budget) const = 0;
  virtual std::string dsl() const = 0;
};

namespace {

class ConstNode final : public SequenceNode {
 public:
  explicit ConstNode(Nat c) : c_(std::move(c)) {}
  Nat value(Index, Budget&) const override { return c_; }
  std::string dsl() const override { return "const(" + c_.str() + ")"; }

 private:
  Nat c_;
};

class AffineNode final : public SequenceNode {
 public:
  AffineNode(Nat a, Nat b) : a_(std::move(a)), b_(std::move(b)) {}
  Nat value(Index n, Budget&) const override { return a_ * n + b_; }
  std::string dsl() const override { return "affine(" + a_.str() + "," + b_.str() + ")"; }

 private:
  Nat a_, b_;
};

class PrefixNode final : public SequenceNode {
 public:
  PrefixNode(std::vector<Nat> head, std::shared_ptr<const SequenceNode> tail)
      : head_(std::move(head)), tail_(std::move(tail)) {}
  Nat value(Index n, Budget& budget) const override {
    if (n < head_.size()) return head_[n];
    return tail_->value(n - head_.size(), budget);
  }
  std::string dsl() const override { return "prefix(" + join_values(head_) + ");" + tail_->dsl(); }

 private:
  std::vector<Nat> head_;
  std::shared_ptr<const SequenceNode> tail_;
};

class PeriodicNode final : public SequenceNode {
 public:
  explicit PeriodicNode(std::vector<Nat> period) : period_(std::move(period)) {}
  Nat value(Index n, Budget&) const override { return period_[n % period_.size()]; }
  std::string dsl() const override { return "periodic(" + join_values(period_) + ")"; }

 private:
  std::vector<Nat> period_;
};

class DecreasingNode final : public SequenceNode {
 public:
  explicit DecreasingNode(Nat n) : n_(std::move(n)) {}
  Nat value(Index i, Budget&) const override { return monus(n_, Nat(i)); }
  std::string dsl() const override { return "dec(" + n_.str() + ")"; }

 private:
  Nat n_;
};

class CounterexampleNode final : public SequenceNode {
 public:
  explicit CounterexampleNode(Nat n) : n_(std::move(n)) {}
  Nat value(Index i, Budget&) const override {
    Nat idx(i);
    return idx < n_ ? Nat(n_ - idx) : Nat(idx + 1);
  }
  std::string dsl() const override { return "cex(" + n_.str() + ")"; }

 private:
  Nat n_;
};

class SumNode final : public SequenceNode {
 public:
  SumNode(std::shared_ptr<const SequenceNode> lhs, std::shared_ptr<const SequenceNode> rhs)
      : lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}
  Nat value(Index n, Budget& budget) const override {
    return lhs_->value(n, budget) + rhs_->value(n, budget);
  }
  std::string dsl() const override { return "sum(" + lhs_->dsl() + "," + rhs_->dsl() + ")"; }

 private:
  std::shared_ptr<const SequenceNode> lhs_, rhs_;
};

class ShiftNode final : public SequenceNode {
 public:
  ShiftNode(std::shared_ptr<const SequenceNode> base, Index offset) : base_(std::move(base)), offset_(offset) {}
  Nat value(Index n, Budget& budget) const override { return base_->value(checked_add(n, offset_), budget); }
  std::string dsl() const override { return "shift(" + base_->dsl() + "," + std::to_string(offset_) + ")"; }

  const std::shared_ptr<const SequenceNode>& base() const { return base_; }
  Index offset() const { return offset_; }

 private:
  std::shared_ptr<const SequenceNode> base_;
  Index offset_;
};

class RuleNode final : public SequenceNode {
 public:
  RuleNode(std::string name, Sequence::Rule fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  Nat value(Index n, Budget&) const override {
    {
      std::lock_guard lock(mutex_);
      if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    }
    Nat v = fn_(n);
    if (v < 0) throw std::domain_error("rule '" + name_ + "' produced a negative value");
    std::lock_guard lock(mutex_);
    return memo_.emplace(n, std::move(v)).first->second;
  }
  std::string dsl() const override { return "rule:" + name_; }

 private:
  std::string name_;
  Sequence::Rule fn_;
  mutable std::mutex mutex_;
  mutable std::map<Index, Nat> memo_;
};

class BudgetedRuleNode final : public SequenceNode {
 public:
  BudgetedRuleNode(std::string name, Sequence::BudgetedRule fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  Nat value(Index n, Budget& budget) const override { return fn_(n, budget); }
  std::string dsl() const override { return "rule:" + name_; }

 private:
  std::string name_;
  Sequence::BudgetedRule fn_;
};

}  // namespace
}  // namespace detail

Sequence Sequence::constant(Nat c) { return Sequence(std::make_shared<detail::ConstNode>(std::move(c))); }

Sequence Sequence::affine(Nat slope, Nat intercept) {
  return Sequence(std::make_shared<detail::AffineNode>(std::move(slope), std::move(intercept)));
}

Sequence Sequence::prefix(std::vector<Nat> head, Sequence tail) {
  if (head.empty()) return tail;
  return Sequence(std::make_shared<detail::PrefixNode>(std::move(head), std::move(tail.node_)));
}

Sequence Sequence::periodic(std::vector<Nat> period) {
  if (period.empty()) throw std::invalid_argument("periodic sequence needs at least one value");
  return Sequence(std::make_shared<detail::PeriodicNode>(std::move(period)));
}

Sequence Sequence::decreasing(Nat n) { return Sequence(std::make_shared<detail::DecreasingNode>(std::move(n))); }

Sequence Sequence::counterexample(Nat n) {
  return Sequence(std::make_shared<detail::CounterexampleNode>(std::move(n)));
}

Sequence Sequence::sum(Sequence lhs, Sequence rhs) {
  return Sequence(std::make_shared<detail::SumNode>(std::move(lhs.node_), std::move(rhs.node_)));
}

Sequence Sequence::rule(std::string name, Rule fn) {
  return Sequence(std::make_shared<detail::RuleNode>(std::move(name), std::move(fn)));
}

Sequence Sequence::budgeted_rule(std::string name, BudgetedRule fn) {
  return Sequence(std::make_shared<detail::BudgetedRuleNode>(std::move(name), std::move(fn)));
}

Sequence Sequence::shifted(Index offset) const {
  if (offset == 0) return *this;
  if (auto shift = std::dynamic_pointer_cast<const detail::ShiftNode>(node_)) {
    return Sequence(std::make_shared<detail::ShiftNode>(shift->base(), checked_add(shift->offset(), offset)));
  }
  return Sequence(std::make_shared<detail::ShiftNode>(node_, offset));
}

Nat Sequence::at(Index n, Budget& budget) const {
  budget.charge();
  return node_->value(n, budget);
}

std::string Sequence::to_dsl() const { return node_->dsl(); }

std::vector<Sequence> shift_all(const std::vector<Sequence>& seqs, Index offset) {
  std::vector<Sequence> out;
  out.reserve(seqs.size());
  for (const auto& s : seqs) out.push_back(s.shifted(offset));
  return out;
}

int Coloring::at(Index n, Budget& budget) const {
  Nat v = rule_.at(n, budget);
  if (v > 1) {
    throw std::domain_error("coloring value " + v.str() + " at position " + std::to_string(n) + " is not in {0,1}");
  }
  return static_cast<int>(v);
}

namespace {

std::vector<Nat> value_list(detail::TextCursor& cur) {
  std::vector<Nat> values;
  cur.expect("(");
  values.push_back(cur.natural());
  while (cur.accept(",")) values.push_back(cur.natural());
  cur.expect(")");
  return values;
}

Nat single_arg(detail::TextCursor& cur) {
  cur.expect("(");
  Nat v = cur.natural();
  cur.expect(")");
  return v;
}

const std::set<std::string> kSequenceHeads = {"const", "affine", "prefix", "periodic", "dec", "cex", "sum", "shift"};

Sequence parse_seq(detail::TextCursor& cur) {
  std::size_t start = cur.position();
  std::string head = cur.word();
  if (head == "const") return Sequence::constant(single_arg(cur));
  if (head == "dec") return Sequence::decreasing(single_arg(cur));
  if (head == "cex") return Sequence::counterexample(single_arg(cur));
  if (head == "periodic") return Sequence::periodic(value_list(cur));
  if (head == "affine") {
    cur.expect("(");
    Nat a = cur.natural();
    cur.expect(",");
    Nat b = cur.natural();
    cur.expect(")");
    return Sequence::affine(std::move(a), std::move(b));
  }
  if (head == "prefix") {
    auto values = value_list(cur);
    cur.expect(";");
    return Sequence::prefix(std::move(values), parse_seq(cur));
  }
  if (head == "sum") {
    cur.expect("(");
    Sequence lhs = parse_seq(cur);
    cur.expect(",");
    Sequence rhs = parse_seq(cur);
    cur.expect(")");
    return Sequence::sum(std::move(lhs), std::move(rhs));
  }
  if (head == "shift") {
    cur.expect("(");
    Sequence base = parse_seq(cur);
    cur.expect(",");
    Nat d = cur.natural();
    cur.expect(")");
    return base.shifted(to_index(d));
  }
  cur.rewind(start);
  cur.fail(kSequenceHeads);
}

}  // namespace

Sequence parse_sequence(std::string_view text) {
  detail::TextCursor cur(text);
  Sequence s = parse_seq(cur);
  if (!cur.at_end()) cur.fail({"<end of input>"});
  return s;
}

}  // namespace dickson
