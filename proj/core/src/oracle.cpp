#include "dickson/oracle.hpp"

#include <future>

#include "dickson/engine.hpp"

namespace dickson {

std::uint64_t subset_count(Index horizon, std::size_t l, std::uint64_t cap) {
  Nat n = Nat(horizon) + 1;
  if (n < l) return 0;
  Nat c = 1;
  for (std::size_t i = 0; i < l; ++i) {
    c = c * (n - i) / (i + 1);
    if (c > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

namespace {

bool good_on(const std::vector<std::vector<Nat>>& values, const std::vector<Index>& set) {
  for (const auto& row : values) {
    for (std::size_t r = 1; r < set.size(); ++r) {
      if (row[set[r - 1]] > row[set[r]]) return false;
    }
  }
  return true;
}

// Advances `set` to the next l-subset of {0,...,top} in lexicographic order.
bool next_subset(std::vector<Index>& set, Index top) {
  const std::size_t l = set.size();
  for (std::size_t pos = l; pos-- > 0;) {
    if (set[pos] < top - (l - 1 - pos)) {
      ++set[pos];
      for (std::size_t q = pos + 1; q < l; ++q) set[q] = set[q - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<Index> first_subset(std::size_t l) {
  std::vector<Index> set(l);
  for (std::size_t i = 0; i < l; ++i) set[i] = i;
  return set;
}

}  // namespace

OracleReport minimal_good_set(const std::vector<std::vector<Nat>>& values, std::size_t l, std::uint64_t cap) {
  if (values.empty()) throw std::invalid_argument("at least one sequence is required");
  if (l < 1) throw std::invalid_argument("set size must be positive");
  OracleReport report;
  const std::size_t width = values.front().size();
  for (const auto& row : values) {
    if (row.size() != width) throw std::invalid_argument("value rows of different lengths");
  }
  if (width == 0) return report;
  report.horizon = width - 1;
  if (subset_count(report.horizon, l, cap) > cap) {
    throw HorizonTooLarge("C(" + std::to_string(width) + ", " + std::to_string(l) + ") exceeds the cap of " +
                          std::to_string(cap) + " subsets");
  }
  if (width < l) return report;

  std::vector<Index> set = first_subset(l);
  do {
    ++report.candidates;
    if (good_on(values, set)) {
      report.minimal_witness = GoodSet{set, values.size()};
      break;
    }
  } while (next_subset(set, report.horizon));

  // Ordered by last index, then lexicographically on the rest.
  for (Index last = l - 1; last <= report.horizon && !report.minimal_last_index; ++last) {
    if (l == 1) {
      ++report.candidates;
      report.minimal_last_index = last;
      break;
    }
    std::vector<Index> head = first_subset(l - 1);
    do {
      ++report.candidates;
      head.push_back(last);
      bool ok = good_on(values, head);
      head.pop_back();
      if (ok) {
        report.minimal_last_index = last;
        break;
      }
    } while (next_subset(head, last - 1));
  }
  return report;
}

OracleReport minimal_good_set(const std::vector<Sequence>& seqs, std::size_t l, Index horizon, Budget& budget,
                              std::optional<Nat> extracted_bound, std::uint64_t cap) {
  if (subset_count(horizon, l, cap) > cap) {
    throw HorizonTooLarge("C(" + std::to_string(horizon) + "+1, " + std::to_string(l) + ") exceeds the cap of " +
                          std::to_string(cap) + " subsets");
  }
  budget.require(Nat(horizon + 1) * seqs.size(), "oracle value table");
  std::vector<std::vector<Nat>> values;
  for (const Sequence& s : seqs) {
    std::vector<Nat> row;
    for (Index n = 0; n <= horizon; ++n) row.push_back(s.at(n, budget));
    values.push_back(std::move(row));
  }
  OracleReport report = minimal_good_set(values, l, cap);
  report.horizon = horizon;
  report.extracted_bound = std::move(extracted_bound);
  report.tight = report.extracted_bound && report.minimal_last_index &&
                 Nat(*report.minimal_last_index) == *report.extracted_bound;
  return report;
}

FamilyVerdict counterexample_family_check(Index n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  FamilyVerdict verdict;
  verdict.n_max = n_max;
  Budget budget;
  for (Index j = 1; j <= n_max; ++j) {
    Sequence member = Sequence::counterexample(Nat(j) + 1);
    Nat at_j = member.at(j, budget);
    for (Index i = 0; i < j; ++i) {
      ++verdict.pairs;
      if (member.at(i, budget) > 1 && at_j == 1) {
        ++verdict.refuted;
      } else if (!verdict.first_unrefuted) {
        verdict.first_unrefuted = std::make_pair(i, j);
      }
    }
  }
  return verdict;
}

namespace {

// Largest horizon <= wanted whose subset count fits the cap.
Index fit_horizon(Index wanted, std::size_t l, std::uint64_t cap) {
  if (subset_count(wanted, l, cap) <= cap) return wanted;
  Index lo = 0, hi = wanted;
  while (lo + 1 < hi) {
    Index mid = lo + (hi - lo) / 2;
    (subset_count(mid, l, cap) <= cap ? lo : hi) = mid;
  }
  return lo;
}

TightnessRow tightness_point(const std::string& family, Index p, std::size_t l, std::uint64_t budget_limit,
                             std::uint64_t cap) {
  TightnessRow row;
  row.family = family;
  row.param = p;
  Budget budget(budget_limit);
  if (family == "gap") {
    if (p == 0) throw std::invalid_argument("gap family needs a positive parameter");
    row.l = 2;
    std::vector<Nat> head(p + 1, Nat(0));
    head[0] = 1;
    Sequence a = Sequence::prefix(head, Sequence::constant(0));
    GapPair g = gap_pair(a, p, budget);
    row.extracted_bound = g.bound;
    row.evals = budget.used();
    Budget scan(budget_limit);
    Index limit = to_index(g.bound);
    for (Index i = 0; i <= limit; ++i) {
      if (a.at(i, scan) <= a.at(checked_add(i, p), scan)) {
        row.minimal_last_index = i;
        break;
      }
    }
  } else if (family == "dec" || family == "const") {
    row.l = l;
    Sequence a = family == "dec" ? Sequence::decreasing(p) : Sequence::constant(p);
    Witness w = dl_1_l(a, l, budget);
    row.extracted_bound = w.cert.bound;
    row.evals = budget.used();
    Index wanted = to_index(w.cert.bound);
    Index horizon = fit_horizon(wanted, l, cap);
    if (horizon < wanted) row.truncated_horizon = horizon;
    Budget scan(budget_limit);
    OracleReport report = minimal_good_set({a}, l, horizon, scan, w.cert.bound, cap);
    row.minimal_last_index = report.minimal_last_index;
  } else {
    throw std::invalid_argument("unknown family '" + family + "' (expected dec, const or gap)");
  }
  row.tight = row.minimal_last_index && Nat(*row.minimal_last_index) == row.extracted_bound;
  return row;
}

}  // namespace

std::vector<TightnessRow> tightness_experiment(const std::string& family, Index first, Index last, std::size_t l,
                                               std::uint64_t budget_limit, std::size_t jobs, std::uint64_t cap) {
  if (first > last) throw std::invalid_argument("empty parameter range");
  if (jobs == 0) jobs = 1;
  std::vector<TightnessRow> rows;
  std::vector<std::future<TightnessRow>> pending;
  for (Index p = first;; ++p) {
    pending.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, tightness_point, family, p,
                                 l, budget_limit, cap));
    if (pending.size() >= jobs || p == last) {
      for (auto& f : pending) rows.push_back(f.get());
      pending.clear();
    }
    if (p == last) break;
  }
  return rows;
}

std::string tightness_csv_header() { return "family,param,l,extracted_bound,minimal_last_index,tight,evals"; }

std::string tightness_csv_row(const TightnessRow& row) {
  return row.family + "," + std::to_string(row.param) + "," + std::to_string(row.l) + "," + row.extracted_bound.str() +
         "," + (row.minimal_last_index ? std::to_string(*row.minimal_last_index) : std::string("none")) + "," +
         (row.tight ? "true" : "false") + "," + std::to_string(row.evals);
}

}  // namespace dickson
