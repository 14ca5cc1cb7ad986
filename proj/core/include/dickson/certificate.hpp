#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dickson/budget.hpp"
#include "dickson/nat.hpp"
#include "dickson/sequence.hpp"

namespace dickson {

/// Strictly increasing positions on which k sequences weakly increase.
struct GoodSet {
  std::vector<Index> indices;
  std::size_t k = 0;

  friend bool operator==(const GoodSet&, const GoodSet&) = default;
};

struct BoundCertificate;

/// One record of a derivation trace. `sym` names the quantity; the other
/// fields are present as the quantity requires: `j` numbers repeated
/// quantities, `val` holds a natural, `tag` a label, and nested
/// sub-derivations carry the position `offset` of the tail they ran on.
struct TraceEntry {
  std::string sym;
  std::optional<std::uint64_t> j;
  std::optional<Nat> val;
  std::optional<std::string> tag;
  std::optional<Nat> offset;
  std::shared_ptr<const BoundCertificate> cert;
};

/// Extracted bound plus the derivation that produced it.
///
/// `kind` identifies the derivation scheme:
///   dl_1_2  one sequence, length 2 (first non-descent)
///   dl_1_l  one sequence, length l >= 3 (repetition over tails)
///   dl_2_2  two sequences, length 2 (second sequence steers the rounds)
///   dl_k_2  k >= 2 sequences, length 2 (last sequence steers the rounds;
///           the engine dispatches here for k >= 3)
///   dl_k_l  k >= 2 sequences, length l >= 3 (harvest of length-2 witnesses)
/// `indices` are positions in the coordinates of the sequences the
/// certificate was produced for; nested certificates use their tail's
/// coordinates.
struct BoundCertificate {
  std::string kind;
  std::size_t k = 0;
  std::size_t l = 0;
  std::vector<Index> indices;
  Nat bound;
  std::vector<TraceEntry> trace;
  Index max_index_probed = 0;
};

struct Witness {
  GoodSet good;
  BoundCertificate cert;
};

/// Name of the scheme the engine uses for k sequences and length l.
std::string derivation_kind(std::size_t k, std::size_t l);

/// Outcome of an independent certificate check. Each failure starts with the
/// violated clause: `shape`, `goodness`, `bound`, `trace` or `budget`.
struct Verdict {
  bool pass = true;
  std::vector<std::string> failures;
};

/// Re-evaluates goodness of the certificate's indices, re-derives the bound
/// from the trace and the input sequences, and confirms indices <= bound.
/// Never throws for malformed certificates; the verdict lists every problem.
Verdict check_certificate(const std::vector<Sequence>& seqs, const GoodSet& good, const BoundCertificate& cert,
                          std::uint64_t budget_limit = Budget::kDefaultLimit);

/// Canonical JSON: sorted keys, no whitespace, naturals as decimal integers
/// (naturals above 2^64-1 are written as decimal strings).
std::string to_canonical_json(const BoundCertificate& cert);

/// Raised for JSON documents that do not follow the certificate schema.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

BoundCertificate certificate_from_json(std::string_view text);

}  // namespace dickson
