#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace dickson {

/// Arbitrary-precision natural number. Values, bounds and coordinates use
/// this type; nested bound sums overflow fixed-width integers quickly.
using Nat = boost::multiprecision::cpp_int;

/// Position inside a sequence. Every position the engine actually evaluates
/// fits here; anything larger can never be reached within a budget.
using Index = std::uint64_t;

inline std::string to_string(const Nat& n) { return n.str(); }

/// Truncated subtraction on naturals.
inline Nat monus(const Nat& a, const Nat& b) { return a > b ? Nat(a - b) : Nat(0); }

}  // namespace dickson
