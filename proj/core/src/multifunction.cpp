#include "dickson/multifunction.hpp"

#include <stdexcept>
#include <variant>

#include "text_cursor.hpp"

namespace dickson {

namespace detail {

enum class Op { kAdd, kMonus, kMul, kDiv, kPow, kMin, kMax };

struct Expr {
  struct Binary {
    Op op;
    std::shared_ptr<const Expr> lhs, rhs;
  };
  std::variant<Nat, int, Binary> node;  // constant, variable slot, operation
};

}  // namespace detail

namespace {

using detail::Expr;
using detail::Op;
using ExprPtr = std::shared_ptr<const Expr>;

// Exponentiation results beyond this many bits are treated as unreachable.
constexpr std::size_t kMaxPowerBits = 1u << 20;

Nat power(const Nat& base, const Nat& exponent) {
  if (base == 0) return exponent == 0 ? Nat(1) : Nat(0);
  if (base == 1 || exponent == 0) return Nat(1);
  std::size_t base_bits = boost::multiprecision::msb(base) + 1;
  if (exponent > Nat(kMaxPowerBits) || Nat(base_bits - 1) * exponent > Nat(kMaxPowerBits)) {
    throw BudgetExhausted("power " + base.str() + "^" + exponent.str() + " is too large to evaluate");
  }
  return boost::multiprecision::pow(base, static_cast<unsigned>(exponent));
}

Nat eval(const Expr& e, std::span<const Nat> args) {
  if (auto c = std::get_if<Nat>(&e.node)) return *c;
  if (auto v = std::get_if<int>(&e.node)) return args[static_cast<std::size_t>(*v)];
  const auto& b = std::get<Expr::Binary>(e.node);
  Nat x = eval(*b.lhs, args);
  Nat y = eval(*b.rhs, args);
  switch (b.op) {
    case Op::kAdd: return x + y;
    case Op::kMonus: return monus(x, y);
    case Op::kMul: return x * y;
    case Op::kDiv: return y == 0 ? Nat(0) : Nat(x / y);
    case Op::kPow: return power(x, y);
    case Op::kMin: return x < y ? x : y;
    case Op::kMax: return x < y ? y : x;
  }
  return 0;
}

const char* op_text(Op op) {
  switch (op) {
    case Op::kAdd: return "+";
    case Op::kMonus: return "-";
    case Op::kMul: return "*";
    case Op::kDiv: return "/";
    case Op::kPow: return "^";
    case Op::kMin: return "min";
    case Op::kMax: return "max";
  }
  return "?";
}

constexpr const char* kVarNames[] = {"i", "j", "k"};

std::string print(const Expr& e) {
  if (auto c = std::get_if<Nat>(&e.node)) return c->str();
  if (auto v = std::get_if<int>(&e.node)) return kVarNames[*v];
  const auto& b = std::get<Expr::Binary>(e.node);
  if (b.op == Op::kMin || b.op == Op::kMax) {
    return std::string(op_text(b.op)) + "(" + print(*b.lhs) + "," + print(*b.rhs) + ")";
  }
  return "(" + print(*b.lhs) + op_text(b.op) + print(*b.rhs) + ")";
}

ExprPtr binary(Op op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(Expr{Expr::Binary{op, std::move(lhs), std::move(rhs)}});
}

class FunctionParser {
 public:
  FunctionParser(detail::TextCursor& cur, int arity) : cur_(cur), arity_(arity) {}

  // expr := term (('+' | '-') term)*
  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (cur_.accept("+")) {
        lhs = binary(Op::kAdd, lhs, term());
      } else if (cur_.accept("-")) {
        lhs = binary(Op::kMonus, lhs, term());
      } else {
        return lhs;
      }
    }
  }

 private:
  // term := factor (('*' | '·' | '/') factor)*
  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      if (cur_.accept("*") || cur_.accept("·")) {
        lhs = binary(Op::kMul, lhs, factor());
      } else if (cur_.accept("/")) {
        lhs = binary(Op::kDiv, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  // factor := atom ('^' factor)?
  ExprPtr factor() {
    ExprPtr base = atom();
    if (cur_.accept("^")) return binary(Op::kPow, base, factor());
    return base;
  }

  ExprPtr atom() {
    if (cur_.peek_digit()) return std::make_shared<const Expr>(Expr{cur_.natural()});
    if (cur_.accept("(")) {
      ExprPtr inner = expr();
      cur_.expect(")");
      return inner;
    }
    std::size_t start = cur_.position();
    std::string name = cur_.word();
    for (int v = 0; v < arity_; ++v) {
      if (name == kVarNames[v]) return std::make_shared<const Expr>(Expr{v});
    }
    Op op;
    if (name == "min") {
      op = Op::kMin;
    } else if (name == "max") {
      op = Op::kMax;
    } else if (name == "monus") {
      op = Op::kMonus;
    } else {
      cur_.rewind(start);
      std::set<std::string> expected = {"<natural>", "(", "min", "max", "monus"};
      for (int v = 0; v < arity_; ++v) expected.insert(kVarNames[v]);
      cur_.fail(expected);
    }
    cur_.expect("(");
    ExprPtr lhs = expr();
    cur_.expect(",");
    ExprPtr rhs = expr();
    cur_.expect(")");
    return binary(op, lhs, rhs);
  }

  detail::TextCursor& cur_;
  int arity_;
};

}  // namespace

MultiFunction::MultiFunction(int arity, std::shared_ptr<const detail::Expr> expr, Rule rule, std::string name)
    : arity_(arity), expr_(std::move(expr)), rule_(std::move(rule)), name_(std::move(name)) {
  if (arity_ != 2 && arity_ != 3) throw std::invalid_argument("function arity must be 2 or 3");
}

MultiFunction MultiFunction::rule(int arity, std::string name, Rule fn) {
  return MultiFunction(arity, nullptr, std::move(fn), std::move(name));
}

Nat MultiFunction::at(std::span<const Nat> args, Budget& budget) const {
  if (args.size() != static_cast<std::size_t>(arity_)) {
    throw std::invalid_argument("function of arity " + std::to_string(arity_) + " applied to " +
                                std::to_string(args.size()) + " arguments");
  }
  budget.charge();
  if (expr_) return eval(*expr_, args);
  Nat v = rule_(args);
  if (v < 0) throw std::domain_error("rule '" + name_ + "' produced a negative value");
  return v;
}

std::string MultiFunction::to_dsl() const {
  if (!expr_) return "rule:" + name_;
  return "f" + std::to_string(arity_) + ":" + print(*expr_);
}

MultiFunction parse_function(std::string_view text) {
  detail::TextCursor cur(text);
  int arity = 0;
  if (cur.accept("f2:")) {
    arity = 2;
  } else if (cur.accept("f3:")) {
    arity = 3;
  } else {
    cur.fail({"f2:", "f3:"});
  }
  FunctionParser parser(cur, arity);
  ExprPtr e = parser.expr();
  if (!cur.at_end()) cur.fail({"+", "-", "*", "/", "^", "<end of input>"});
  return MultiFunction(arity, std::move(e), nullptr, "");
}

}  // namespace dickson
