#pragma once

#include <variant>
#include <vector>

#include "dickson/budget.hpp"
#include "dickson/sequence.hpp"

namespace dickson {

/// Strictly increasing indices sharing one color (or one value below M).
struct MonoRun {
  std::vector<Index> indices;
  Nat color;
};

/// Monochromatic set of size l for a 2-coloring, obtained from the
/// one-sequence witness search: run dl_1_l on the coloring's tail; a witness
/// ending in color 0 is all 0 (colors only rise along it) and is accepted,
/// otherwise its last index has color 1 and is kept while the search resumes
/// past it. After l kept indices the run of color 1 is complete.
///
/// Throws BudgetExhausted, std::domain_error for colors outside {0,1}, and
/// std::logic_error if the round count is exceeded (an unsound engine).
MonoRun ph2_from_dl(const Coloring& chi, std::size_t l, Budget& budget);

/// First position among the K scanned whose value reaches M.
struct NotAllBelow {
  Index n = 0;
  Nat value;
};

struct MonoRunResult {
  std::variant<MonoRun, NotAllBelow> outcome;
  Index k = 0;  ///< K = (l-1)M + 1, the number of terms examined
};

/// Finite pigeonhole on the first K = (l-1)M+1 terms: if they all stay below
/// M, the first value counted l times gives the run; otherwise the first
/// term with value >= M is reported.
MonoRunResult mono_run(const Sequence& a, const Nat& m, std::size_t l, Budget& budget);

}  // namespace dickson
