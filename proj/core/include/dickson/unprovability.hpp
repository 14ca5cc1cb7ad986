#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dickson/budget.hpp"
#include "dickson/multifunction.hpp"
#include "dickson/sequence.hpp"

namespace dickson {

/// Product order on N^k: componentwise <=.
bool product_le(std::span<const Nat> p, std::span<const Nat> q);

enum class Side { a, b };

/// l indices on which one sequence takes the same value below M.
struct EqualRun {
  Side which = Side::a;
  std::vector<Index> indices;
  Nat value;
};

/// Positions n, m with M <= first(n) <= second(m); `first_side` names the
/// sequence read at n (the other one is read at m).
struct Crossing {
  Side first_side = Side::a;
  Index n = 0;
  Index m = 0;
  Nat first_value;
  Nat second_value;
};

struct DichotomyResult {
  std::variant<EqualRun, Crossing> outcome;
  Index k = 0;  ///< block length K = (l-1)M + 1
  Nat bound;    ///< B = K(a(n1)+1), or K when the run lies in the first block
  std::size_t blocks = 0;
};

/// For sequences a, b, a threshold M and l > 1: either one of them takes one
/// value below M on l positions, or M <= a(n) <= b(m) or M <= b(n) <= a(m).
/// Scans blocks [(r-1)K, rK): a block where a (then b) stays below M yields
/// the equal run; otherwise the first positions n_r, m_r reaching M are
/// recorded. After a(n1)+1 blocks the interleaving a(n1), b(m1), a(n2), ...
/// has a first non-descent, which is the crossing.
DichotomyResult dichotomy_lemma(const Sequence& a, const Sequence& b, const Nat& m, std::size_t l, Budget& budget);

/// Points of N^2, each coordinate >= floor_m, on which f weakly increases
/// and where no earlier point is <= a later one.
struct WitnessChain {
  std::vector<Point2> points;
  std::vector<Nat> f_values;
  Nat floor_m;
  /// How each stage of the construction ended, innermost first, e.g.
  /// "pair:even", "run:a", "cross:b<=a".
  std::vector<std::string> branches;
};

WitnessChain incomparable_chain(const MultiFunction& f, std::size_t l, const Nat& m, Budget& budget);

/// lhs is not <= rhs, yet both functions weakly increase from lhs to rhs.
struct TripleWitness {
  Point3 lhs, rhs;
  Nat f1_lhs, f1_rhs, f2_lhs, f2_rhs;
  std::string branch;  ///< "both-zero", "zero-positive" or "both-positive"
  bool swapped = false;  ///< the two functions changed roles in the final step
  std::size_t descents = 0;  ///< restarts of the basic step from a smaller value
};

/// `chain_floor` (> 0) is the lower bound for the chains of the basic step.
TripleWitness incomparable_triples(const MultiFunction& f1, const MultiFunction& f2, Budget& budget,
                                   const Nat& chain_floor = 1);

/// Witnesses that a candidate linearization f of N^2 fails, one per floor
/// m = first_m, first_m+1, ...
struct Refutation2d {
  std::string f;
  std::size_t l = 0;
  std::vector<WitnessChain> chains;
};

Refutation2d one_step_refute_2d(const MultiFunction& f, std::size_t l, std::size_t trials, Budget& budget,
                                const Nat& first_m = 0);

/// Witnesses that a candidate pair f1, f2 on N^3 fails, one per chain floor
/// 1, 2, ..., trials.
struct Refutation3d {
  std::string f1, f2;
  std::vector<TripleWitness> witnesses;
};

Refutation3d one_step_refute_3d(const MultiFunction& f1, const MultiFunction& f2, std::size_t trials,
                                Budget& budget);

class RunTooShort : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Where a claimed run that strictly increases below n breaks.
struct AscentViolation {
  std::size_t position = 0;
  bool not_below = false;  ///< run[position] >= n; otherwise run[position-1] >= run[position]
};

/// A run of length >= n+1 cannot strictly increase while staying below n.
/// Applies the first non-descent search to n, run[n], run[n-1], ..., run[0].
AscentViolation bounded_ascent_refute(const Nat& n, const std::vector<Nat>& run);

/// Failure of f as an order-embedding of the lexicographic order on N^2 into N.
struct LexViolation {
  Nat t;
  bool strict = false;  ///< f(0,t) >= f(0,t+1); otherwise f(0,t) >= f(1,0)
  Nat f_t, f_next, f_one;
  std::size_t ray_probes = 0;
};

/// Walks (0,0) <lex (0,1) <lex ... below (1,0); a strictly increasing f
/// bounded by f(1,0) breaks within f(1,0)+2 probes of the ray.
LexViolation lex_embed_refute(const MultiFunction& f, Budget& budget);

}  // namespace dickson
