#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "dickson/nat.hpp"

namespace dickson {

/// Raised when an engine call runs out of evaluations. It signals a divergent
/// or astronomically expensive computation; callers never see a silent loop.
class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(const std::string& what) : std::runtime_error("budget exhausted: " + what) {}
};

/// Shared evaluation counter for one engine call. Every point evaluation of a
/// Sequence or MultiFunction charges one unit.
///
/// A second counter caps the number of trace records kept for certificates,
/// so that a run that fits the evaluation limit cannot exhaust memory first.
class Budget {
 public:
  static constexpr std::uint64_t kDefaultLimit = 10'000'000;
  static constexpr std::uint64_t kDefaultRecordLimit = 4'000'000;

  explicit Budget(std::uint64_t limit = kDefaultLimit, std::uint64_t record_limit = kDefaultRecordLimit)
      : limit_(limit), record_limit_(record_limit) {}

  void charge(std::uint64_t units = 1) {
    if (units > limit_ - used_) {
      used_ = limit_;
      throw BudgetExhausted("limit of " + std::to_string(limit_) + " evaluations reached");
    }
    used_ += units;
  }

  void charge_records(std::uint64_t records) {
    if (records > record_limit_ - records_) {
      records_ = record_limit_;
      throw BudgetExhausted("certificate record limit of " + std::to_string(record_limit_) + " reached");
    }
    records_ += records;
  }

  /// Fails immediately when `needed` evaluations can no longer fit.
  void require(const Nat& needed, const std::string& what) const {
    if (needed > Nat(remaining())) {
      throw BudgetExhausted(what + " needs at least " + needed.str() + " evaluations, " +
                            std::to_string(remaining()) + " remain");
    }
  }

  std::uint64_t limit() const { return limit_; }
  std::uint64_t used() const { return used_; }
  std::uint64_t remaining() const { return limit_ - used_; }
  std::uint64_t records() const { return records_; }
  std::uint64_t record_limit() const { return record_limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
  std::uint64_t record_limit_;
  std::uint64_t records_ = 0;
};

/// Converts a natural to an Index, treating unreachable positions as
/// exhaustion.
inline Index to_index(const Nat& n) {
  if (n > Nat(std::numeric_limits<Index>::max())) {
    throw BudgetExhausted("position " + n.str() + " is beyond the addressable range");
  }
  return static_cast<Index>(n);
}

/// Converts a natural used as a repetition count. Each repetition costs at
/// least one evaluation, so a count above the remaining budget cannot finish.
inline std::size_t to_count(const Nat& n, const Budget& budget, const std::string& what) {
  budget.require(n, what);
  return static_cast<std::size_t>(n);
}

inline Index checked_add(Index a, Index b) {
  if (a > std::numeric_limits<Index>::max() - b) {
    throw BudgetExhausted("position overflow at " + std::to_string(a) + " + " + std::to_string(b));
  }
  return a + b;
}

}  // namespace dickson
