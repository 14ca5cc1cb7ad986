#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dickson/certificate.hpp"
#include "dickson/sequence.hpp"

namespace dickson {

class HorizonTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of l-subsets of {0,...,horizon}, saturated at `cap + 1`.
std::uint64_t subset_count(Index horizon, std::size_t l, std::uint64_t cap);

struct OracleReport {
  std::optional<GoodSet> minimal_witness;  ///< lexicographically least good set within the horizon
  std::optional<Index> minimal_last_index;  ///< least last index over all good sets within the horizon
  Index horizon = 0;
  std::optional<Nat> extracted_bound;
  bool tight = false;  ///< minimal_last_index equals extracted_bound
  std::uint64_t candidates = 0;  ///< subsets examined by both enumerations
};

constexpr std::uint64_t kDefaultSubsetCap = 1'000'000;

/// Exhaustive search over strictly increasing l-subsets of {0,...,horizon}.
/// Lexicographic enumeration gives the least good set; a second enumeration
/// ordered by last index gives the least last index. Throws HorizonTooLarge
/// if there are more than `cap` subsets.
OracleReport minimal_good_set(const std::vector<Sequence>& seqs, std::size_t l, Index horizon, Budget& budget,
                              std::optional<Nat> extracted_bound = std::nullopt,
                              std::uint64_t cap = kDefaultSubsetCap);

/// Same search over a table of precomputed values, values[s][n] = seqs[s](n).
OracleReport minimal_good_set(const std::vector<std::vector<Nat>>& values, std::size_t l,
                              std::uint64_t cap = kDefaultSubsetCap);

struct FamilyVerdict {
  Index n_max = 0;
  std::uint64_t pairs = 0;
  std::uint64_t refuted = 0;
  std::optional<std::pair<Index, Index>> first_unrefuted;
  bool all_refuted() const { return refuted == pairs; }
};

/// For all i < j <= n_max, checks that member j+1 of the family
/// n, n-1, ..., 1, n+1, n+2, ... descends from i to j.
FamilyVerdict counterexample_family_check(Index n_max);

/// One parameter point of a tightness experiment.
struct TightnessRow {
  std::string family;
  Index param = 0;
  std::size_t l = 0;
  Nat extracted_bound;
  std::optional<Index> minimal_last_index;
  bool tight = false;
  std::uint64_t evals = 0;
  std::optional<Index> truncated_horizon;  ///< set when the oracle horizon was shrunk below the bound
};

/// Families: "dec" (dec(p) with the length-l search), "const" (const(p),
/// length l), "gap" (1 followed by p zeros, distance-p pair; the oracle
/// column is the least i with a(i) <= a(i+p)). Points run on `jobs` threads;
/// rows come back in parameter order.
std::vector<TightnessRow> tightness_experiment(const std::string& family, Index first, Index last, std::size_t l,
                                               std::uint64_t budget_limit, std::size_t jobs = 1,
                                               std::uint64_t cap = kDefaultSubsetCap);

std::string tightness_csv_header();
std::string tightness_csv_row(const TightnessRow& row);

}  // namespace dickson
