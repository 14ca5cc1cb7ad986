#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "dickson/budget.hpp"
#include "dickson/nat.hpp"

namespace dickson {

using Point2 = std::array<Nat, 2>;
using Point3 = std::array<Nat, 3>;

namespace detail {
struct Expr;
}

/// A total function N^2 -> N or N^3 -> N.
///
/// Built from the function DSL, `f2:<expr in i,j>` or `f3:<expr in i,j,k>`,
/// where expressions combine naturals and variables with `+`, `*` (or `·`),
/// `-` (monus), `/` (floor division, x/0 = 0), `^` (power) and the binary
/// functions `min`, `max`, `monus`. Each evaluation charges one unit.
class MultiFunction {
 public:
  using Rule = std::function<Nat(std::span<const Nat>)>;

  /// Black-box rule with the given arity (2 or 3).
  static MultiFunction rule(int arity, std::string name, Rule fn);

  int arity() const { return arity_; }

  Nat at(std::span<const Nat> args, Budget& budget) const;
  Nat at(const Point2& p, Budget& budget) const { return at(std::span<const Nat>(p), budget); }
  Nat at(const Point3& p, Budget& budget) const { return at(std::span<const Nat>(p), budget); }

  std::string to_dsl() const;

 private:
  friend MultiFunction parse_function(std::string_view text);

  MultiFunction(int arity, std::shared_ptr<const detail::Expr> expr, Rule rule, std::string name);

  int arity_;
  std::shared_ptr<const detail::Expr> expr_;
  Rule rule_;
  std::string name_;
};

MultiFunction parse_function(std::string_view text);

}  // namespace dickson
