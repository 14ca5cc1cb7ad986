#include "dickson/unprovability.hpp"

#include <algorithm>
#include <map>

#include "dickson/engine.hpp"
#include "dickson/pigeonhole.hpp"

namespace dickson {

bool product_le(std::span<const Nat> p, std::span<const Nat> q) {
  if (p.size() != q.size()) throw std::invalid_argument("points of different dimension");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > q[i]) return false;
  }
  return true;
}

namespace {

void ensure(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("witness failed re-verification: ") + what);
}

}  // namespace

DichotomyResult dichotomy_lemma(const Sequence& a, const Sequence& b, const Nat& m, std::size_t l, Budget& budget) {
  if (l < 2) throw std::invalid_argument("dichotomy needs l > 1");
  DichotomyResult result;
  std::vector<Index> ns, ms;
  std::optional<Nat> rounds;

  for (std::size_t r = 0; !rounds || Nat(r) < *rounds; ++r) {
    Index start = to_index(Nat(result.k) * r);
    MonoRunResult ra = mono_run(a.shifted(start), m, l, budget);
    result.k = ra.k;
    result.blocks = r + 1;
    auto close_run = [&](Side side, MonoRun run) {
      for (Index& i : run.indices) i = checked_add(start, i);
      result.outcome = EqualRun{side, std::move(run.indices), std::move(run.color)};
      result.bound = rounds ? Nat(result.k) * *rounds : Nat(result.k);
      return result;
    };
    if (auto* run = std::get_if<MonoRun>(&ra.outcome)) return close_run(Side::a, std::move(*run));
    Index n = checked_add(start, std::get<NotAllBelow>(ra.outcome).n);
    if (!rounds) rounds = std::get<NotAllBelow>(ra.outcome).value + 1;
    ns.push_back(n);
    MonoRunResult rb = mono_run(b.shifted(start), m, l, budget);
    if (auto* run = std::get_if<MonoRun>(&rb.outcome)) return close_run(Side::b, std::move(*run));
    ms.push_back(checked_add(start, std::get<NotAllBelow>(rb.outcome).n));
    budget.require(*rounds - (r + 1), "dichotomy blocks");
  }

  std::vector<Nat> gamma;
  for (std::size_t r = 0; r < ns.size(); ++r) {
    gamma.push_back(a.at(ns[r], budget));
    gamma.push_back(b.at(ms[r], budget));
  }
  std::size_t i = first_non_descent(gamma);
  ensure(i + 1 < gamma.size(), "crossing beyond the harvested blocks");
  Crossing c;
  if (i % 2 == 0) {
    c = Crossing{Side::a, ns[i / 2], ms[i / 2], gamma[i], gamma[i + 1]};
  } else {
    c = Crossing{Side::b, ms[i / 2], ns[i / 2 + 1], gamma[i], gamma[i + 1]};
  }
  ensure(m <= c.first_value && c.first_value <= c.second_value, "crossing inequalities");
  result.outcome = c;
  result.bound = Nat(result.k) * *rounds;
  return result;
}

namespace {

Point2 pt(Nat x, Nat y) { return Point2{std::move(x), std::move(y)}; }

// f on the two rays through (floor, floor): a(n) = f(floor, floor+n+1),
// b(n) = f(floor+n+1, floor).
Point2 ray_point(Side side, const Nat& floor, Index n) {
  Nat far = floor + n + 1;
  return side == Side::a ? pt(floor, far) : pt(far, floor);
}

Sequence ray(const MultiFunction& f, Side side, const Nat& floor) {
  return Sequence::budgeted_rule(side == Side::a ? "f-column-ray" : "f-row-ray",
                                 [f, side, floor](Index n, Budget& b) { return f.at(ray_point(side, floor, n), b); });
}

const char* side_name(Side s) { return s == Side::a ? "a" : "b"; }

// Extends a chain ending at value M by the outcome of the dichotomy on the
// two rays at `floor`: an equal run replaces the chain, a crossing appends
// its two ray points.
void extend_by_dichotomy(const MultiFunction& f, const Nat& floor, const Nat& threshold, std::size_t run_length,
                         std::vector<Point2>& points, std::vector<std::string>& branches, Budget& budget) {
  DichotomyResult d = dichotomy_lemma(ray(f, Side::a, floor), ray(f, Side::b, floor), threshold, run_length, budget);
  if (auto* run = std::get_if<EqualRun>(&d.outcome)) {
    // Along one ray the farther point lies above the nearer one, so the run
    // is listed from far to near.
    points.clear();
    for (auto it = run->indices.rbegin(); it != run->indices.rend(); ++it) points.push_back(ray_point(run->which, floor, *it));
    branches.push_back(std::string("run:") + side_name(run->which));
  } else {
    const auto& c = std::get<Crossing>(d.outcome);
    Side second = c.first_side == Side::a ? Side::b : Side::a;
    points.push_back(ray_point(c.first_side, floor, c.n));
    points.push_back(ray_point(second, floor, c.m));
    branches.push_back(c.first_side == Side::a ? "cross:a<=b" : "cross:b<=a");
  }
}

void build_chain(const MultiFunction& f, std::size_t l, const Nat& m, std::vector<Point2>& points,
                 std::vector<std::string>& branches, Budget& budget) {
  if (l == 2) {
    Sequence alpha = Sequence::budgeted_rule("f-interleaved-rays", [f, m](Index n, Budget& b) {
      Index k = n / 2;
      return f.at(ray_point(n % 2 == 0 ? Side::b : Side::a, m, k), b);
    });
    Witness w = dl_1_2(alpha, budget);
    Index i = w.good.indices[0];
    Index k = i / 2;
    if (i % 2 == 0) {
      points = {ray_point(Side::b, m, k), ray_point(Side::a, m, k)};
      branches.push_back("pair:even");
    } else {
      points = {ray_point(Side::a, m, k), ray_point(Side::b, m, k + 1)};
      branches.push_back("pair:odd");
    }
    return;
  }
  if (l == 3) {
    points = {pt(m + 1, m + 1)};
    extend_by_dichotomy(f, m, f.at(points.back(), budget), 3, points, branches, budget);
    return;
  }
  build_chain(f, l - 2, m + 1, points, branches, budget);
  extend_by_dichotomy(f, m, f.at(points.back(), budget), l, points, branches, budget);
}

}  // namespace

WitnessChain incomparable_chain(const MultiFunction& f, std::size_t l, const Nat& m, Budget& budget) {
  if (f.arity() != 2) throw std::invalid_argument("incomparable_chain needs a function of two arguments");
  if (l < 2) throw std::invalid_argument("chain length must be at least 2");
  WitnessChain chain;
  chain.floor_m = m;
  build_chain(f, l, m, chain.points, chain.branches, budget);

  ensure(chain.points.size() == l, "chain length");
  for (const Point2& p : chain.points) {
    chain.f_values.push_back(f.at(p, budget));
    ensure(p[0] >= m && p[1] >= m, "coordinate floor");
  }
  for (std::size_t r = 0; r + 1 < l; ++r) ensure(chain.f_values[r] <= chain.f_values[r + 1], "f weakly increases");
  for (std::size_t r = 0; r < l; ++r) {
    for (std::size_t s = r + 1; s < l; ++s) ensure(!product_le(chain.points[r], chain.points[s]), "incomparability");
  }
  return chain;
}

namespace {

std::size_t first_nonzero(const Point3& p) {
  for (std::size_t c = 0; c < 3; ++c) {
    if (p[c] != 0) return c;
  }
  throw std::logic_error("basic step needs a non-zero triple");
}

// The plane {x_c = 0} with coordinates in order.
Point3 embed(std::size_t c, const Point2& q) {
  Point3 out;
  std::size_t next = 0;
  for (std::size_t i = 0; i < 3; ++i) out[i] = i == c ? Nat(0) : q[next++];
  return out;
}

struct Pair3 {
  Point3 lhs, rhs;
};

// Basic step at a non-zero triple p where `zero` vanishes: either p itself
// pairs with a point of the plane x_c = 0, or a chain inside that plane
// gives two points on which `other` takes equal values.
Pair3 basic_step(const MultiFunction& zero, const MultiFunction& other, const Point3& p, const Nat& floor,
                 Budget& budget) {
  std::size_t c = first_nonzero(p);
  Nat v = other.at(p, budget);
  if (v == 0) return {p, embed(c, pt(0, 1))};

  MultiFunction g = MultiFunction::rule(2, "zero-function-on-plane", [zero, c](std::span<const Nat> q) {
    Budget local(1);
    return zero.at(embed(c, pt(q[0], q[1])), local);
  });
  std::size_t length = to_count(v + 1, budget, "chain length");
  WitnessChain chain = incomparable_chain(g, length, floor, budget);
  std::map<Nat, std::size_t> seen;
  for (std::size_t t = 0; t < chain.points.size(); ++t) {
    Point3 q = embed(c, chain.points[t]);
    Nat w = other.at(q, budget);
    if (w >= v) return {p, q};
    auto [it, fresh] = seen.emplace(w, t);
    if (!fresh) return {embed(c, chain.points[it->second]), q};
  }
  throw std::logic_error("basic step found neither a large value nor a repetition");
}

MultiFunction monus_by(const MultiFunction& f, const Nat& d) {
  return MultiFunction::rule(3, "monus-shift", [f, d](std::span<const Nat> q) {
    Budget local(1);
    return monus(f.at(q, local), d);
  });
}

}  // namespace

TripleWitness incomparable_triples(const MultiFunction& f1, const MultiFunction& f2, Budget& budget,
                                   const Nat& chain_floor) {
  if (f1.arity() != 3 || f2.arity() != 3) throw std::invalid_argument("incomparable_triples needs functions of three arguments");
  if (chain_floor == 0) throw std::invalid_argument("chain floor must be positive");
  TripleWitness out;
  const Point3 unit{Nat(1), Nat(0), Nat(0)};
  Nat l1 = f1.at(unit, budget), l2 = f2.at(unit, budget);
  out.branch = l1 == 0 && l2 == 0 ? "both-zero" : (l1 == 0 || l2 == 0) ? "zero-positive" : "both-positive";

  Point3 p = unit;
  Pair3 found;
  Nat previous_low;
  for (;;) {
    Nat v1 = f1.at(p, budget), v2 = f2.at(p, budget);
    bool swap = v1 > v2;
    const Nat& low = swap ? v2 : v1;
    if (out.descents > 0) ensure(low < previous_low, "descent loop must lower the minimum");
    out.swapped = swap;
    if (low == 0) {
      found = swap ? basic_step(f2, f1, p, chain_floor, budget) : basic_step(f1, f2, p, chain_floor, budget);
      break;
    }
    MultiFunction g1 = monus_by(f1, low), g2 = monus_by(f2, low);
    Pair3 step = swap ? basic_step(g2, g1, p, chain_floor, budget) : basic_step(g1, g2, p, chain_floor, budget);
    Nat n1 = f1.at(step.lhs, budget), n2 = f2.at(step.lhs, budget);
    Nat m1 = f1.at(step.rhs, budget), m2 = f2.at(step.rhs, budget);
    if (n1 <= m1 && n2 <= m2) {
      found = step;
      break;
    }
    previous_low = low;
    p = std::min(n1, n2) < low ? step.lhs : step.rhs;
    ++out.descents;
  }

  out.lhs = found.lhs;
  out.rhs = found.rhs;
  out.f1_lhs = f1.at(out.lhs, budget);
  out.f1_rhs = f1.at(out.rhs, budget);
  out.f2_lhs = f2.at(out.lhs, budget);
  out.f2_rhs = f2.at(out.rhs, budget);
  ensure(out.f1_lhs <= out.f1_rhs && out.f2_lhs <= out.f2_rhs, "both functions weakly increase");
  ensure(!product_le(out.lhs, out.rhs), "lhs is not below rhs");
  return out;
}

Refutation2d one_step_refute_2d(const MultiFunction& f, std::size_t l, std::size_t trials, Budget& budget,
                                const Nat& first_m) {
  if (trials < 1) throw std::invalid_argument("at least one trial is required");
  Refutation2d out{f.to_dsl(), l, {}};
  for (std::size_t t = 0; t < trials; ++t) out.chains.push_back(incomparable_chain(f, l, first_m + t, budget));
  return out;
}

Refutation3d one_step_refute_3d(const MultiFunction& f1, const MultiFunction& f2, std::size_t trials,
                                Budget& budget) {
  if (trials < 1) throw std::invalid_argument("at least one trial is required");
  Refutation3d out{f1.to_dsl(), f2.to_dsl(), {}};
  for (std::size_t t = 0; t < trials; ++t) out.witnesses.push_back(incomparable_triples(f1, f2, budget, Nat(t + 1)));
  return out;
}

AscentViolation bounded_ascent_refute(const Nat& n, const std::vector<Nat>& run) {
  if (Nat(run.size()) <= n) {
    throw RunTooShort("a run of length " + std::to_string(run.size()) + " can increase strictly below " + n.str());
  }
  std::size_t top = static_cast<std::size_t>(n);
  std::vector<Nat> beta{n};
  for (std::size_t q = 0; q <= top; ++q) beta.push_back(run[top - q]);
  std::size_t t = first_non_descent(beta);
  AscentViolation v;
  if (t == 0) {
    v.position = top;
    v.not_below = true;
    ensure(run[top] >= n, "value reaches n");
  } else {
    v.position = top - t + 1;
    ensure(run[v.position - 1] >= run[v.position], "run fails to increase");
  }
  return v;
}

LexViolation lex_embed_refute(const MultiFunction& f, Budget& budget) {
  if (f.arity() != 2) throw std::invalid_argument("lex_embed_refute needs a function of two arguments");
  LexViolation v;
  v.f_one = f.at(pt(1, 0), budget);
  Nat current = f.at(pt(0, 0), budget);
  v.ray_probes = 1;
  for (Nat t = 0;; ++t) {
    Nat next = f.at(pt(0, t + 1), budget);
    ++v.ray_probes;
    if (current >= next || current >= v.f_one) {
      v.t = t;
      v.strict = current >= next;
      v.f_t = std::move(current);
      v.f_next = std::move(next);
      ensure(Nat(v.ray_probes) <= v.f_one + 2, "probe count");
      return v;
    }
    current = std::move(next);
  }
}

}  // namespace dickson
