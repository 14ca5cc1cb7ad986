#pragma once

#include <span>
#include <vector>

#include "dickson/budget.hpp"
#include "dickson/certificate.hpp"
#include "dickson/sequence.hpp"

namespace dickson {

/// Leftmost t with values[t] <= values[t+1], reading the list as extended by
/// repeating its last value. For a non-empty list the result is at most
/// values[0] and at most size()-1.
std::size_t first_non_descent(std::span<const Nat> values);

/// Length-2 witness for one sequence: the first i with a(i) <= a(i+1).
/// The bound a(0)+1 is attained by dec(n).
Witness dl_1_2(const Sequence& a, Budget& budget);

/// Distance-n good pair (i, i+n) with i <= a(0)+...+a(n-1), found by running
/// the length-2 search on the window sums beta(m) = a(m)+...+a(m+n-1).
struct GapPair {
  Index i = 0;
  Index n = 0;
  Nat bound;  ///< a(0)+...+a(n-1); the returned i never exceeds it
  Nat beta_i, beta_next;  ///< window sums at i and i+1
  Nat value_i, value_gap;  ///< a(i) and a(i+n)
};
GapPair gap_pair(const Sequence& a, Index n, Budget& budget);

/// Length-l witness for one sequence. For l >= 3, runs the length l-1 search
/// on N = a(i1)+2 consecutive tails (i1 the first index of the first run),
/// then picks the first non-descent among the runs' first values and splices
/// that first index onto the following run.
Witness dl_1_l(const Sequence& a, std::size_t l, Budget& budget);

/// Common good pair for two sequences. Rounds run the one-sequence search on
/// tails of `a`, with the length of each round set by `b` at the previous
/// round's first index. A drop of `b` between rounds ends the search inside
/// the current round; otherwise after N = a(i1)+2 rounds the first indices
/// already carry a good pair.
Witness dl_2_2(const Sequence& a, const Sequence& b, Budget& budget);

/// Length-l witness for two sequences; l = 2 is dl_2_2.
Witness dl_2_l(const Sequence& a, const Sequence& b, std::size_t l, Budget& budget);

/// General case. Dispatches to the schemes above:
///   k = 1: dl_1_2 / dl_1_l
///   k = 2, l = 2: dl_2_2
///   k >= 3, l = 2: vertical_step (last sequence steers)
///   k >= 2, l >= 3: harvest of length-2 witnesses on consecutive tails,
///                   recursion at length l-1 on the values at their first
///                   indices
Witness dl_k_l(const std::vector<Sequence>& seqs, std::size_t l, Budget& budget);

/// The vertical scheme for any k >= 2: rounds of length-l witnesses for the
/// first k-1 sequences, steered by the last one, with the length-2 search of
/// the first k-1 sequences run lazily over the rounds' first indices.
/// dl_k_l uses it for k >= 3; with k = 2 it agrees with dl_2_2 on indices and
/// bound.
Witness vertical_step(const std::vector<Sequence>& seqs, Budget& budget);

}  // namespace dickson
