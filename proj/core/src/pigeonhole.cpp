#include "dickson/pigeonhole.hpp"

#include <map>
#include <stdexcept>

#include "dickson/engine.hpp"

namespace dickson {

MonoRun ph2_from_dl(const Coloring& chi, std::size_t l, Budget& budget) {
  if (l < 2) throw std::invalid_argument("run length must be at least 2");
  // Validates colors as the engine reads them.
  Sequence colors = Sequence::budgeted_rule("coloring", [chi](Index n, Budget& b) { return Nat(chi.at(n, b)); });

  std::vector<Index> kept;
  Index start = 0;
  for (std::size_t round = 0; round < l; ++round) {
    Witness w = dl_1_l(colors.shifted(start), l, budget);
    std::vector<Index> abs;
    for (Index i : w.good.indices) abs.push_back(checked_add(start, i));
    if (chi.at(abs.back(), budget) == 0) return MonoRun{abs, 0};
    kept.push_back(abs.back());
    start = checked_add(abs.back(), 1);
  }
  if (kept.size() != l) throw std::logic_error("pigeonhole reduction exceeded its round count");
  return MonoRun{kept, 1};
}

MonoRunResult mono_run(const Sequence& a, const Nat& m, std::size_t l, Budget& budget) {
  if (l < 1) throw std::invalid_argument("run length must be at least 1");
  MonoRunResult result;
  Nat k = Nat(l - 1) * m + 1;
  budget.require(k, "finite pigeonhole scan");
  result.k = to_index(k);

  std::vector<Nat> values;
  values.reserve(result.k);
  for (Index n = 0; n < result.k; ++n) {
    Nat v = a.at(n, budget);
    if (v >= m) {
      result.outcome = NotAllBelow{n, std::move(v)};
      return result;
    }
    values.push_back(std::move(v));
  }

  std::map<Nat, std::vector<Index>> seen;
  for (Index n = 0; n < result.k; ++n) {
    auto& run = seen[values[n]];
    run.push_back(n);
    if (run.size() == l) {
      result.outcome = MonoRun{run, values[n]};
      return result;
    }
  }
  throw std::logic_error("finite pigeonhole found no repeated value");
}

}  // namespace dickson
