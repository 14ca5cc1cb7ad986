#include <gtest/gtest.h>

#include <random>

#include "dickson/engine.hpp"
#include "support/brute_force.hpp"

using namespace dickson;
namespace bf = dickson::testing;

namespace {

std::vector<Sequence> parse_all(std::initializer_list<const char*> texts) {
  std::vector<Sequence> out;
  for (const char* t : texts) out.push_back(parse_sequence(t));
  return out;
}

// Validity, bound and certificate, all re-derived outside the engine.
void expect_sound(const std::vector<Sequence>& seqs, std::size_t l, const Witness& w) {
  ASSERT_EQ(w.good.indices.size(), l);
  EXPECT_TRUE(bf::good_on(seqs, w.good.indices));
  for (Index i : w.good.indices) EXPECT_LE(Nat(i), w.cert.bound);
  EXPECT_LE(Nat(w.cert.max_index_probed), w.cert.bound);
  Verdict v = check_certificate(seqs, w.good, w.cert);
  EXPECT_TRUE(v.pass) << (v.failures.empty() ? "" : v.failures.front());
}

Witness run(const std::vector<Sequence>& seqs, std::size_t l) {
  Budget b;
  return dl_k_l(seqs, l, b);
}

}  // namespace

TEST(FirstNonDescent, ReadsTheListAsConstantlyExtended) {
  std::vector<Nat> v{5, 3, 3, 1};
  EXPECT_EQ(first_non_descent(v), 1u);
  std::vector<Nat> falling{3, 2, 1, 0};
  EXPECT_EQ(first_non_descent(falling), 3u);
  std::vector<Nat> one{4};
  EXPECT_EQ(first_non_descent(one), 0u);
  EXPECT_THROW(first_non_descent(std::span<const Nat>{}), std::invalid_argument);
}

TEST(Dl12, Examples) {
  Budget b;
  Witness zero = dl_1_2(parse_sequence("const(0)"), b);
  EXPECT_EQ(zero.good.indices, (std::vector<Index>{0, 1}));
  EXPECT_EQ(zero.cert.bound, 1);

  Witness dec = dl_1_2(parse_sequence("dec(5)"), b);
  EXPECT_EQ(dec.good.indices, (std::vector<Index>{5, 6}));
  EXPECT_EQ(dec.cert.bound, 6);

  Sequence p = parse_sequence("prefix(2,0,7);const(7)");
  Witness w = dl_1_2(p, b);
  EXPECT_EQ(w.good.indices, (std::vector<Index>{1, 2}));
  EXPECT_EQ(w.cert.bound, 3);
  EXPECT_EQ(bf::first_non_descent_scan(bf::values(p, 10)), Index{1});
}

TEST(Dl12, FindsTheFirstNonDescent) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    Sequence a = parse_sequence(bf::random_sequence(rng, trial % 2 == 1));
    Budget b;
    Witness w = dl_1_2(a, b);
    auto scan = bf::first_non_descent_scan(bf::values(a, 40));
    ASSERT_TRUE(scan.has_value());
    EXPECT_EQ(w.good.indices[0], *scan);
    EXPECT_EQ(w.cert.bound, bf::values(a, 1)[0] + 1);
  }
}

TEST(GapPair, Examples) {
  Budget b;
  GapPair g = gap_pair(parse_sequence("prefix(1,0,0,0);const(0)"), 3, b);
  EXPECT_EQ(g.i, 1u);
  EXPECT_EQ(g.bound, 1);

  GapPair c = gap_pair(parse_sequence("const(4)"), 7, b);
  EXPECT_EQ(c.i, 0u);
  EXPECT_EQ(c.bound, 28);

  Sequence d = parse_sequence("dec(3)");
  GapPair e = gap_pair(d, 2, b);
  auto v = bf::values(d, 10);
  std::optional<Index> least;
  for (Index i = 0; i <= 5 && !least; ++i) {
    if (v[i] <= v[i + 2]) least = i;
  }
  ASSERT_TRUE(least);
  EXPECT_EQ(e.i, *least);
  EXPECT_EQ(e.bound, 5);
  EXPECT_THROW(gap_pair(d, 0, b), std::invalid_argument);
}

TEST(GapPair, WindowSumsRiseExactlyWhenTheGapPairIsGood) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Sequence a = parse_sequence(bf::random_sequence(rng, trial % 2 == 0));
    Index n = 1 + trial % 5;
    Budget b;
    GapPair g = gap_pair(a, n, b);
    EXPECT_LE(Nat(g.i), g.bound);
    EXPECT_LE(g.value_i, g.value_gap);
    EXPECT_EQ(g.beta_i <= g.beta_next, g.value_i <= g.value_gap);
    auto v = bf::values(a, g.i + n + 1);
    EXPECT_EQ(v[g.i], g.value_i);
    EXPECT_EQ(v[g.i + n], g.value_gap);
  }
}

TEST(Dl1l, ConstantBoundFollowsTheRepetitionFormula) {
  // M(1,2) = c+1 and M(1,l) = N * M(1,l-1) with N = c+2 runs of equal bound.
  for (int c = 0; c <= 4; ++c) {
    for (std::size_t l = 2; l <= 4; ++l) {
      Sequence a = Sequence::constant(c);
      Budget b;
      Witness w = dl_1_l(a, l, b);
      Nat expected = c + 1;
      for (std::size_t r = 2; r < l; ++r) expected *= c + 2;
      EXPECT_EQ(w.cert.bound, expected) << "c=" << c << " l=" << l;
      expect_sound({a}, l, w);
    }
  }
}

TEST(Dl1l, PeriodicZeroOneHasNoConsecutiveTriple) {
  Sequence a = parse_sequence("periodic(0,1)");
  Budget b;
  Witness w = dl_1_l(a, 3, b);
  expect_sound({a}, 3, w);
  auto& idx = w.good.indices;
  EXPECT_FALSE(idx[1] == idx[0] + 1 && idx[2] == idx[1] + 1);
}

TEST(Dl1l, BoundDominatesTheLeastWitness) {
  Sequence a = parse_sequence("prefix(2,1,3,0,5);const(5)");
  Budget b;
  Witness w = dl_1_l(a, 3, b);
  expect_sound({a}, 3, w);
  auto t = bf::table({a}, to_index(w.cert.bound) + 1);
  auto least = bf::least_last_index(t, 3);
  ASSERT_TRUE(least);
  EXPECT_LE(Nat(*least), w.cert.bound);
}

TEST(Dl22, Examples) {
  auto zeros = parse_all({"const(0)", "const(0)"});
  Witness z = run(zeros, 2);
  EXPECT_EQ(z.good.indices, (std::vector<Index>{0, 1}));
  expect_sound(zeros, 2, z);

  auto plateau = parse_all({"dec(2)", "affine(1,0)"});
  Witness p = run(plateau, 2);
  expect_sound(plateau, 2, p);
  auto pairs = bf::good_pairs(bf::table(plateau, to_index(p.cert.bound) + 1));
  ASSERT_FALSE(pairs.empty());
  EXPECT_LE(Nat(pairs.front().second), p.cert.bound);

  auto alternating = parse_all({"periodic(1,0)", "periodic(0,1)"});
  Witness alt = run(alternating, 2);
  expect_sound(alternating, 2, alt);
  EXPECT_GE(alt.good.indices[1], alt.good.indices[0] + 2);
  auto t = bf::table(alternating, 20);
  for (Index i = 0; i + 1 < 20; ++i) EXPECT_FALSE(bf::good(t, {i, i + 1}));
}

TEST(Dl2l, Examples) {
  auto steps = parse_all({"prefix(1,0);const(0)", "prefix(0,1);const(1)"});
  Witness w = run(steps, 3);
  expect_sound(steps, 3, w);
  auto least = bf::least_last_index(bf::table(steps, to_index(w.cert.bound) + 1), 3);
  ASSERT_TRUE(least);
  EXPECT_LE(Nat(*least), w.cert.bound);

  auto periodic = parse_all({"periodic(0,1)", "periodic(0,0,1)"});
  expect_sound(periodic, 3, run(periodic, 3));
}

TEST(Dl2l, ConstantsAtLengthFiveExceedTheDefaultBudget) {
  // The harvested bounds compound: (2,5) on constants needs far more work
  // than the default budget allows, and the engine says so.
  auto consts = parse_all({"const(3)", "const(3)"});
  Budget b;
  EXPECT_THROW(dl_k_l(consts, 5, b), BudgetExhausted);
}

TEST(DlKl, ThreeSequenceExamples) {
  auto ones = parse_all({"const(1)", "const(1)", "const(1)"});
  expect_sound(ones, 2, run(ones, 2));

  auto mixed = parse_all({"dec(2)", "periodic(0,1)", "const(5)"});
  Witness w = run(mixed, 2);
  expect_sound(mixed, 2, w);
  EXPECT_EQ(w.cert.kind, "dl_k_2");
  auto pairs = bf::good_pairs(bf::table(mixed, to_index(w.cert.bound) + 1));
  ASSERT_FALSE(pairs.empty());
}

TEST(DlKl, OneSequenceAgreesWithTheBaseSchemes) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Sequence a = parse_sequence(bf::random_sequence(rng, trial % 2 == 0));
    for (std::size_t l = 2; l <= 3; ++l) {
      Budget b1, b2;
      Witness general = dl_k_l({a}, l, b1);
      Witness direct = l == 2 ? dl_1_2(a, b2) : dl_1_l(a, l, b2);
      EXPECT_EQ(general.good.indices, direct.good.indices);
      EXPECT_EQ(to_canonical_json(general.cert), to_canonical_json(direct.cert));
    }
  }
}

TEST(DlKl, VerticalSchemeWithTwoSequencesAgreesWithDl22) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<Sequence> seqs{parse_sequence(bf::random_sequence(rng, trial % 2 == 0)),
                               parse_sequence(bf::random_sequence(rng, trial % 3 == 0))};
    Budget b1, b2;
    Witness explicit_pair = dl_2_2(seqs[0], seqs[1], b1);
    Witness vertical = vertical_step(seqs, b2);
    EXPECT_EQ(explicit_pair.good.indices, vertical.good.indices);
    EXPECT_EQ(explicit_pair.cert.bound, vertical.cert.bound);
    EXPECT_TRUE(check_certificate(seqs, vertical.good, vertical.cert).pass);
  }
}

TEST(DlKl, RandomInputsAreSound) {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    std::size_t k = 1 + trial % 3, l = 2 + (trial / 3) % 2;
    std::vector<Sequence> seqs;
    for (std::size_t s = 0; s < k; ++s) seqs.push_back(parse_sequence(bf::random_sequence(rng, s % 2 == 0, 5, 3)));
    Budget b(200000);
    try {
      Witness w = dl_k_l(seqs, l, b);
      expect_sound(seqs, l, w);
      ++checked;
    } catch (const BudgetExhausted&) {
    }
  }
  EXPECT_GT(checked, 60);
}

TEST(DlKl, BudgetFailuresAreLoudAndPrompt) {
  Budget b;
  EXPECT_THROW(dl_1_l(parse_sequence("const(0)"), 80, b), BudgetExhausted);
  EXPECT_EQ(b.used(), 0u);

  auto growing = parse_all({"affine(1,0)", "affine(2,0)", "affine(1,1)", "affine(3,2)"});
  Budget b2;
  EXPECT_THROW(dl_k_l(growing, 4, b2), BudgetExhausted);
  EXPECT_LE(b2.used(), b2.limit());

  Budget small(50);
  EXPECT_THROW(dl_k_l(parse_all({"dec(9)", "dec(9)"}), 3, small), BudgetExhausted);
}

TEST(DlKl, RejectsDegenerateArguments) {
  Budget b;
  EXPECT_THROW(dl_k_l({}, 2, b), std::invalid_argument);
  EXPECT_THROW(dl_k_l(parse_all({"const(0)"}), 1, b), std::invalid_argument);
}

TEST(DlKl, OutputIsDeterministic) {
  auto seqs = parse_all({"prefix(3,1,2);periodic(0,2)", "periodic(2,1,0)"});
  EXPECT_EQ(to_canonical_json(run(seqs, 3).cert), to_canonical_json(run(seqs, 3).cert));
}
