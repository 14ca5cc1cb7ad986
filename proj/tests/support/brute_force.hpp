#pragma once

// Reference searches written without the engine: plain loops over value
// tables. Tests compare engine and oracle outputs against these.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dickson/sequence.hpp"

namespace dickson::testing {

using Table = std::vector<std::vector<Nat>>;

inline std::vector<Nat> values(const Sequence& s, Index count) {
  Budget b(count + 1);
  std::vector<Nat> out;
  for (Index n = 0; n < count; ++n) out.push_back(s.at(n, b));
  return out;
}

inline Table table(const std::vector<Sequence>& seqs, Index count) {
  Table t;
  for (const auto& s : seqs) t.push_back(values(s, count));
  return t;
}

inline bool good(const Table& t, const std::vector<Index>& set) {
  for (std::size_t r = 1; r < set.size(); ++r) {
    if (set[r - 1] >= set[r]) return false;
  }
  for (const auto& row : t) {
    for (std::size_t r = 0; r < set.size(); ++r) {
      for (std::size_t s = r + 1; s < set.size(); ++s) {
        if (row.at(set[r]) > row.at(set[s])) return false;
      }
    }
  }
  return true;
}

inline bool good_on(const std::vector<Sequence>& seqs, const std::vector<Index>& set) {
  Index top = 0;
  for (Index i : set) top = std::max(top, i);
  return good(table(seqs, top + 1), set);
}

/// First i with a(i) <= a(i+1), scanning at most `limit` positions.
inline std::optional<Index> first_non_descent_scan(const std::vector<Nat>& a) {
  for (Index i = 0; i + 1 < a.size(); ++i) {
    if (a[i] <= a[i + 1]) return i;
  }
  return std::nullopt;
}

/// Every good pair (i, j) with j < width, in lexicographic order.
inline std::vector<std::pair<Index, Index>> good_pairs(const Table& t) {
  std::vector<std::pair<Index, Index>> out;
  const Index width = t.front().size();
  for (Index i = 0; i < width; ++i) {
    for (Index j = i + 1; j < width; ++j) {
      if (good(t, {i, j})) out.emplace_back(i, j);
    }
  }
  return out;
}

/// Least last index of a good l-set inside the table, by increasing last
/// index and a recursive choice of the earlier ones.
inline std::optional<Index> least_last_index(const Table& t, std::size_t l) {
  const Index width = t.front().size();
  // longest[j]: longest chain ending at j in the product order of the rows.
  std::vector<std::size_t> longest(width, 1);
  for (Index j = 0; j < width; ++j) {
    for (Index i = 0; i < j; ++i) {
      if (good(t, {i, j})) longest[j] = std::max(longest[j], longest[i] + 1);
    }
    if (longest[j] >= l) return j;
  }
  return std::nullopt;
}

/// Lexicographically least good l-set inside the table.
inline std::optional<std::vector<Index>> least_good_set(const Table& t, std::size_t l) {
  const Index width = t.front().size();
  std::vector<Index> set;
  std::optional<std::vector<Index>> found;
  auto extend = [&](auto&& self, Index from) -> bool {
    if (set.size() == l) {
      if (good(t, set)) {
        found = set;
        return true;
      }
      return false;
    }
    for (Index i = from; i < width; ++i) {
      set.push_back(i);
      if (self(self, i + 1)) return true;
      set.pop_back();
    }
    return false;
  };
  extend(extend, 0);
  return found;
}

/// DSL text for a random sequence: prefix of length <= max_prefix with
/// values <= max_value, followed by a constant or periodic tail.
inline std::string random_sequence(std::mt19937_64& rng, bool periodic_tail, std::size_t max_prefix = 8,
                                   unsigned max_value = 6) {
  std::uniform_int_distribution<unsigned> value(0, max_value);
  std::uniform_int_distribution<std::size_t> length(0, max_prefix);
  std::string tail;
  if (periodic_tail) {
    std::uniform_int_distribution<std::size_t> period(1, 3);
    std::size_t p = period(rng);
    tail = "periodic(";
    for (std::size_t i = 0; i < p; ++i) tail += (i ? "," : "") + std::to_string(value(rng));
    tail += ")";
  } else {
    tail = "const(" + std::to_string(value(rng)) + ")";
  }
  std::size_t n = length(rng);
  if (n == 0) return tail;
  std::string text = "prefix(";
  for (std::size_t i = 0; i < n; ++i) text += (i ? "," : "") + std::to_string(value(rng));
  return text + ");" + tail;
}

}  // namespace dickson::testing
