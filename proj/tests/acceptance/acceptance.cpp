// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "dickson/certificate.hpp"
#include "dickson/engine.hpp"
#include "dickson/oracle.hpp"
#include "dickson/unprovability.hpp"
#include "support/brute_force.hpp"
#include "support/witness_checks.hpp"

using namespace dickson;
namespace bf = dickson::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

Outcome base_case_optimality() {
  for (Index n = 0; n <= 30; ++n) {
    Budget b;
    Sequence a = parse_sequence("dec(" + std::to_string(n) + ")");
    Witness w = dl_1_2(a, b);
    if (w.good.indices != std::vector<Index>{n, n + 1}) return fail("dec(" + std::to_string(n) + "): wrong pair");
    if (w.cert.bound != n + 1) return fail("dec(" + std::to_string(n) + "): wrong bound");
    if (n > 0) {
      Budget ob;
      OracleReport r = minimal_good_set({a}, 2, n, ob);
      if (r.minimal_witness) return fail("dec(" + std::to_string(n) + "): good pair below n+1");
    }
  }
  return {true, "n = 0..30"};
}

Outcome gap_tightness() {
  for (Index n = 1; n <= 15; ++n) {
    std::string text = "prefix(1";
    for (Index z = 0; z < n; ++z) text += ",0";
    text += ");const(0)";
    Budget b;
    Sequence a = parse_sequence(text);
    GapPair g = gap_pair(a, n, b);
    Budget fresh;
    bool ok = g.bound == 1 && g.i == 1 && a.at(0, fresh) > a.at(n, fresh) && a.at(1, fresh) <= a.at(1 + n, fresh);
    if (!ok) return fail("n = " + std::to_string(n));
  }
  return {true, "n = 1..15, i = bound = 1"};
}

struct FuzzStats {
  int cases = 0, skipped = 0, failures = 0;
  int oracle_checked = 0, oracle_skipped = 0, oracle_failures = 0;
  std::string first_problem;
  double engine_s = 0, check_s = 0, oracle_s = 0;
};

double since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

FuzzStats run_fuzz() {
  FuzzStats s;
  std::mt19937_64 rng(20240601);
  for (bool periodic : {false, true}) {
    for (int c = 0; c < 1000; ++c) {
      std::size_t k = 1 + c % 3, l = 2 + (c / 3) % 3;
      std::vector<std::string> texts;
      std::vector<Sequence> seqs;
      for (std::size_t i = 0; i < k; ++i) {
        texts.push_back(bf::random_sequence(rng, periodic));
        seqs.push_back(parse_sequence(texts.back()));
      }
      ++s.cases;
      auto problem = [&](const std::string& what) {
        ++s.failures;
        if (s.first_problem.empty()) {
          s.first_problem = what + " k=" + std::to_string(k) + " l=" + std::to_string(l) + " " + texts.front();
        }
      };
      Budget budget(100'000, 100'000);
      Witness w;
      auto t0 = std::chrono::steady_clock::now();
      try {
        w = dl_k_l(seqs, l, budget);
        s.engine_s += since(t0);
      } catch (const BudgetExhausted&) {
        s.engine_s += since(t0);
        ++s.skipped;
        continue;
      }
      t0 = std::chrono::steady_clock::now();
      if (!check_certificate(seqs, w.good, w.cert, 2'000'000).pass) problem("certificate rejected");
      if (w.good.indices.size() != l || !bf::good_on(seqs, w.good.indices)) problem("not good");
      if (Nat(w.good.indices.back()) > w.cert.bound) problem("index above bound");

      s.check_s += since(t0);
      if (w.cert.bound > 100'000) {
        ++s.oracle_skipped;
        continue;
      }
      Index horizon = to_index(w.cert.bound);
      t0 = std::chrono::steady_clock::now();
      try {
        Budget ob;
        OracleReport r = minimal_good_set(seqs, l, horizon, ob, w.cert.bound, 200'000);
        ++s.oracle_checked;
        if (!r.minimal_last_index || Nat(*r.minimal_last_index) > w.cert.bound) {
          ++s.oracle_failures;
          if (s.first_problem.empty()) s.first_problem = "oracle above bound for " + texts.front();
        }
      } catch (const HorizonTooLarge&) {
        ++s.oracle_skipped;
      }
      s.oracle_s += since(t0);
    }
  }
  return s;
}

const FuzzStats& fuzz() {
  static const FuzzStats stats = run_fuzz();
  return stats;
}

Outcome soundness_fuzzing() {
  const FuzzStats& s = fuzz();
  std::string d = std::to_string(s.cases) + " cases, " + std::to_string(s.skipped) + " over budget, " +
                  std::to_string(s.failures) + " failures (engine " +
                  std::to_string(int(s.engine_s)) + " s, checks " + std::to_string(int(s.check_s)) + " s, oracle " +
                  std::to_string(int(s.oracle_s)) + " s)";
  if (s.failures) return fail(d + "; " + s.first_problem);
  if (s.skipped == s.cases) return fail(d + "; nothing ran");
  return {true, d};
}

Outcome oracle_dominance() {
  const FuzzStats& s = fuzz();
  std::string d = std::to_string(s.oracle_checked) + " checked, " + std::to_string(s.oracle_skipped) +
                  " horizons too large, " + std::to_string(s.oracle_failures) + " violations";
  if (s.oracle_failures || s.oracle_checked == 0) return fail(d);
  return {true, d};
}

Outcome counterexample_family() {
  FamilyVerdict v = counterexample_family_check(50);
  std::string d = std::to_string(v.refuted) + "/" + std::to_string(v.pairs) + " pairs refuted";
  if (v.pairs != 1275 || !v.all_refuted()) return fail(d);
  return {true, d};
}

Outcome chain_witnesses() {
  int count = 0;
  for (const char* f : {"f2: i+j", "f2: 0", "f2: (i+j)*(i+j+1)/2 + j", "f2: max(i,j)"}) {
    for (std::size_t l = 2; l <= 6; ++l) {
      for (int m : {0, 1, 5}) {
        Budget b;
        WitnessChain c = incomparable_chain(parse_function(f), l, m, b);
        std::string p = bf::chain_problem(f, l, m, c);
        if (!p.empty()) return fail(std::string(f) + " l=" + std::to_string(l) + " m=" + std::to_string(m) + ": " + p);
        ++count;
      }
    }
  }
  return {true, std::to_string(count) + " chains"};
}

Outcome triple_witnesses() {
  const std::vector<std::pair<const char*, const char*>> pairs{
      {"f3: 0", "f3: 0"},
      {"f3: j+k", "f3: j*k"},
      {"f3: 5*j", "f3: k"},
      {"f3: j+k", "f3: i"},
      {"f3: i+1", "f3: j"},
      {"f3: k*k", "f3: 2*i + j"},
      {"f3: i+j+k", "f3: max(i,max(j,k))"},
      {"f3: min(i,1)", "f3: min(i,1)"},
      {"f3: 3*i + j", "f3: i + k"},
      {"f3: 4", "f3: i*j + k + 1"},
  };
  std::map<std::string, int> branches;
  for (const auto& [f1, f2] : pairs) {
    Budget b;
    TripleWitness w = incomparable_triples(parse_function(f1), parse_function(f2), b);
    std::string p = bf::triple_problem(f1, f2, w);
    if (!p.empty()) return fail(std::string(f1) + " / " + f2 + ": " + p);
    ++branches[w.branch];
  }
  std::string d;
  for (const auto& [name, n] : branches) d += (d.empty() ? "" : ", ") + name + " x" + std::to_string(n);
  if (branches.size() != 3) return fail("branches: " + d);
  return {true, d};
}

// Every sequence with the given prefix length bound, values <= 4 and a constant tail.
std::vector<std::string> constant_tail_class(std::size_t max_prefix) {
  std::vector<std::string> out;
  std::vector<int> digits;
  std::function<void()> extend = [&] {
    for (int tail = 0; tail <= 4; ++tail) {
      std::string text;
      if (!digits.empty()) {
        text = "prefix(";
        for (std::size_t i = 0; i < digits.size(); ++i) text += (i ? "," : "") + std::to_string(digits[i]);
        text += ");";
      }
      out.push_back(text + "const(" + std::to_string(tail) + ")");
    }
    if (digits.size() == max_prefix) return;
    for (int v = 0; v <= 4; ++v) {
      digits.push_back(v);
      extend();
      digits.pop_back();
    }
  };
  extend();
  return out;
}

std::string dichotomy_problem(const Sequence& a, const Sequence& b, int m, std::size_t l) {
  Budget budget;
  DichotomyResult d = dichotomy_lemma(a, b, m, l, budget);
  Budget fresh;
  Index k = static_cast<Index>((l - 1) * m + 1);
  if (d.k != k) return "block length";
  if (auto* run = std::get_if<EqualRun>(&d.outcome)) {
    const Sequence& s = run->which == Side::a ? a : b;
    if (run->indices.size() != l || run->value >= m) return "run shape";
    for (std::size_t i = 0; i < l; ++i) {
      if (i && run->indices[i] <= run->indices[i - 1]) return "run order";
      if (Nat(run->indices[i]) > d.bound || s.at(run->indices[i], fresh) != run->value) return "run value";
    }
    return {};
  }
  const auto& c = std::get<Crossing>(d.outcome);
  const Sequence& first = c.first_side == Side::a ? a : b;
  const Sequence& second = c.first_side == Side::a ? b : a;
  Nat x = first.at(c.n, fresh), y = second.at(c.m, fresh);
  if (!(m <= x && x <= y)) return "crossing inequality";
  if (Nat(c.n) > d.bound || Nat(c.m) > d.bound) return "crossing index above bound";
  Nat a_first;
  for (Index i = 0;; ++i) {
    if (a.at(i, fresh) >= m) {
      a_first = a.at(i, fresh);
      break;
    }
  }
  if (d.bound != Nat(k) * (a_first + 1)) return "bound formula";
  return {};
}

Outcome dichotomy_classification() {
  std::vector<std::string> full = constant_tail_class(5);
  std::vector<std::string> short_class = constant_tail_class(3);
  std::vector<Sequence> all, few;
  for (const auto& t : full) all.push_back(parse_sequence(t));
  for (const auto& t : short_class) few.push_back(parse_sequence(t));
  std::uint64_t runs = 0;
  auto check = [&](const Sequence& a, const Sequence& b) -> std::string {
    for (int m = 0; m <= 3; ++m) {
      for (std::size_t l : {2, 3}) {
        std::string p = dichotomy_problem(a, b, m, l);
        ++runs;
        if (!p.empty()) return a.to_dsl() + " / " + b.to_dsl() + " M=" + std::to_string(m) + " l=" + std::to_string(l) + ": " + p;
      }
    }
    return {};
  };
  // All pairs with prefixes of length <= 3, then every member of the full class
  // against each constant, on both sides.
  for (const auto& a : few) {
    for (const auto& b : few) {
      if (auto p = check(a, b); !p.empty()) return fail(p);
    }
  }
  for (const auto& a : all) {
    for (int c = 0; c <= 4; ++c) {
      Sequence konst = parse_sequence("const(" + std::to_string(c) + ")");
      if (auto p = check(a, konst); !p.empty()) return fail(p);
      if (auto p = check(konst, a); !p.empty()) return fail(p);
    }
  }
  return {true, std::to_string(runs) + " runs over " + std::to_string(all.size()) + " sequences"};
}

Outcome lex_refutation() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> coef(0, 6), shape(0, 4);
  for (int trial = 0; trial < 100; ++trial) {
    std::string a = std::to_string(coef(rng)), b = std::to_string(coef(rng)), c = std::to_string(coef(rng));
    std::string text;
    switch (shape(rng)) {
      case 0: text = "f2: " + a + "*i + " + b + "*j + " + c; break;
      case 1: text = "f2: min(j," + a + ") + " + b + "*i"; break;
      case 2: text = "f2: max(i*" + a + ", j) + " + c; break;
      case 3: text = "f2: (i+j)*(i+j+1)/2 + j + " + c; break;
      default: text = "f2: " + a + "^i + j*" + b; break;
    }
    MultiFunction f = parse_function(text);
    Budget budget;
    LexViolation v = lex_embed_refute(f, budget);
    Budget fresh;
    Nat ft = f.at(Point2{0, v.t}, fresh), fn = f.at(Point2{0, v.t + 1}, fresh), f1 = f.at(Point2{1, 0}, fresh);
    if (Nat(v.ray_probes) > f1 + 2) return fail(text + ": too many probes");
    bool holds = v.strict ? ft >= fn : ft >= f1;
    if (!holds || v.f_t != ft || v.f_one != f1) return fail(text + ": violation does not re-verify");
  }
  return {true, "100 functions"};
}

int cli(const std::vector<std::string>& args, std::string& out) {
  std::ostringstream o, e;
  int code = cli::run(args, o, e);
  out = o.str();
  return code;
}

Outcome determinism() {
  const std::vector<std::vector<std::string>> commands{
      {"witness", "--seq", "dec(5)", "--l", "2"},
      {"witness", "--seq", "periodic(1,0)", "--seq", "periodic(0,1)", "--l", "3"},
      {"witness", "--seq", "const(1)", "--seq", "const(1)", "--seq", "const(1)", "--l", "2"},
      {"oracle", "--seq", "dec(3)", "--l", "2", "--horizon", "6"},
      {"tightness", "--family", "const", "--params", "0..4", "--l", "3", "--jobs", "2"},
      {"refute-2d", "--f", "f2: i+j", "--l", "4", "--trials", "3"},
      {"refute-3d", "--f1", "f3: min(i,1)", "--f2", "f3: min(i,1)", "--trials", "2"},
      {"lex-refute", "--f", "f2: (i+j)*(i+j+1)/2 + j"},
      {"dichotomy", "--seq", "prefix(0,4);const(2)", "--seq", "dec(6)", "--M", "2", "--l", "3"},
      {"pigeonhole", "--seq", "periodic(0,1)", "--l", "3"},
      {"counterexample", "--n-max", "10"},
  };
  for (const auto& cmd : commands) {
    std::string first, second;
    int c1 = cli(cmd, first), c2 = cli(cmd, second);
    if (c1 != c2 || first != second || first.empty()) return fail(cmd.front() + " differs between runs");
  }
  return {true, std::to_string(commands.size()) + " commands"};
}

Outcome budget_honesty() {
  const std::vector<std::vector<std::string>> families{
      {"affine(1,1)", "affine(2,0)", "affine(1,3)", "affine(3,1)"},
      {"affine(1,0)", "affine(1,0)", "affine(1,0)", "affine(1,0)"},
      {"affine(5,2)", "affine(1,9)", "affine(2,2)", "affine(7,0)"},
  };
  for (const auto& seqs : families) {
    std::vector<std::string> args{"witness", "--l", "4"};
    for (const auto& s : seqs) {
      args.push_back("--seq");
      args.push_back(s);
    }
    std::string out;
    if (int code = cli(args, out); code != cli::kBudget) return fail(seqs.front() + ": exit " + std::to_string(code));
  }
  return {true, std::to_string(families.size()) + " families exit 3"};
}

struct Criterion {
  const char* name;
  double seconds;
  Outcome (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"base-case optimality", 1, base_case_optimality},
      {"gap pair tightness", 1, gap_tightness},
      {"soundness fuzzing", 60, soundness_fuzzing},
      {"oracle dominance", 60, oracle_dominance},
      {"counterexample family", 1, counterexample_family},
      {"incomparable chains", 10, chain_witnesses},
      {"incomparable triples", 10, triple_witnesses},
      {"dichotomy classification", 30, dichotomy_classification},
      {"lexicographic embedding", 5, lex_refutation},
      {"determinism", 60, determinism},
      {"budget honesty", 60, budget_honesty},
  };
  int failed = 0, n = 0;
  for (const Criterion& c : criteria) {
    ++n;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && elapsed > c.seconds) o = fail(o.detail + "; exceeded " + std::to_string(c.seconds) + " s");
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %-26s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", n, c.name, elapsed, o.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
