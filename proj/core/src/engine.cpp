#include "dickson/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace dickson {

namespace {

TraceEntry value_entry(std::string sym, Nat val, std::optional<std::uint64_t> j = std::nullopt) {
  TraceEntry e;
  e.sym = std::move(sym);
  e.j = j;
  e.val = std::move(val);
  return e;
}

TraceEntry tag_entry(std::string sym, std::string tag) {
  TraceEntry e;
  e.sym = std::move(sym);
  e.tag = std::move(tag);
  return e;
}

TraceEntry nested_entry(std::string sym, std::optional<std::uint64_t> j, Index offset,
                        std::shared_ptr<const BoundCertificate> cert) {
  TraceEntry e;
  e.sym = std::move(sym);
  e.j = j;
  e.offset = Nat(offset);
  e.cert = std::move(cert);
  return e;
}

std::shared_ptr<const BoundCertificate> share(BoundCertificate cert) {
  return std::make_shared<const BoundCertificate>(std::move(cert));
}

Witness finish(BoundCertificate cert, Budget& budget) {
  budget.charge_records(cert.trace.size() + 1);
  Witness w;
  w.good.indices = cert.indices;
  w.good.k = cert.k;
  w.cert = std::move(cert);
  return w;
}

// Every scheme of length l makes at least 2^(l-2) charged evaluations: each
// level repeats the level below at least twice.
void require_length(Budget& budget, std::size_t l) {
  if (l < 2) throw std::invalid_argument("witness length must be at least 2");
  std::string what = "witness of length " + std::to_string(l);
  if (l - 2 >= 64) budget.require(Nat(1) << 64, what);
  budget.require(Nat(1) << (l - 2), what);
}

void internal_check(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("internal invariant violated: ") + what);
}

// A finished sub-derivation run on the tail starting at `offset`.
struct Block {
  Index offset = 0;
  std::shared_ptr<const BoundCertificate> cert;

  Block(Index o, BoundCertificate c) : offset(o), cert(share(std::move(c))) {}

  Index first() const { return checked_add(offset, cert->indices.front()); }
  Index max_probed() const { return checked_add(offset, cert->max_index_probed); }
  std::vector<Index> absolute() const {
    std::vector<Index> out;
    for (Index i : cert->indices) out.push_back(checked_add(offset, i));
    return out;
  }
};

// Thrown by a vertical round whose steering value drops; caught only by the
// vertical_step call that owns the rounds.
struct SteerDrop {
  const void* owner;
  std::size_t round;
};

struct VerticalRound {
  Block block;
  Nat steer;
};

struct VerticalState {
  std::vector<Sequence> base;
  Sequence steer;
  std::vector<VerticalRound> rounds;
  Nat total = 0;

  VerticalState(std::vector<Sequence> b, Sequence s) : base(std::move(b)), steer(std::move(s)) {}

  void force(std::size_t r, Budget& budget) {
    while (rounds.size() <= r) {
      std::size_t j = rounds.size();
      std::size_t len = j == 0 ? 3 : to_count(rounds.back().steer + 1, budget, "round length");
      Index offset = to_index(total);
      Witness w = dl_k_l(shift_all(base, offset), len, budget);
      Block block{offset, std::move(w.cert)};
      Nat mu = steer.at(block.first(), budget);
      bool drop = j == 0 ? mu <= 1 : mu < rounds.back().steer;
      total += block.cert->bound;
      rounds.push_back({std::move(block), std::move(mu)});
      if (drop) throw SteerDrop{this, j};
    }
  }
};


struct HarvestState {
  std::vector<Sequence> seqs;
  std::vector<Block> harvests;
  Nat total = 0;

  explicit HarvestState(std::vector<Sequence> s) : seqs(std::move(s)) {}

  void force(std::size_t n, Budget& budget) {
    while (harvests.size() <= n) {
      Index offset = to_index(total);
      Witness w = dl_k_l(shift_all(seqs, offset), 2, budget);
      total += w.cert.bound;
      harvests.push_back(Block{offset, std::move(w.cert)});
    }
  }
};

Witness horizontal(const std::vector<Sequence>& seqs, std::size_t l, Budget& budget) {
  const std::size_t k = seqs.size();
  auto state = std::make_shared<HarvestState>(seqs);
  std::vector<Sequence> starred;
  for (std::size_t m = 0; m < k; ++m) {
    starred.push_back(Sequence::budgeted_rule("harvest-first-values", [state, m](Index n, Budget& b) {
      state->force(static_cast<std::size_t>(n), b);
      return state->seqs[m].at(state->harvests[n].first(), b);
    }));
  }
  Witness inner = dl_k_l(starred, l - 1, budget);
  std::size_t harvest_count = to_count(inner.cert.bound + 1, budget, "harvest count");
  state->force(harvest_count - 1, budget);

  BoundCertificate cert;
  cert.kind = derivation_kind(k, l);
  cert.k = k;
  cert.l = l;
  for (Index s : inner.cert.indices) cert.indices.push_back(state->harvests[s].first());
  const Block& last = state->harvests[inner.cert.indices.back()];
  cert.indices.push_back(checked_add(last.offset, last.cert->indices.back()));

  for (std::size_t n = 0; n < harvest_count; ++n) {
    const Block& h = state->harvests[n];
    cert.trace.push_back(nested_entry("harvest", n + 1, h.offset, h.cert));
    cert.trace.push_back(value_entry("M_n", h.cert->bound, n + 1));
    cert.max_index_probed = std::max(cert.max_index_probed, h.max_probed());
  }
  cert.trace.push_back(value_entry("H", Nat(harvest_count)));
  cert.trace.push_back(nested_entry("inner", std::nullopt, 0, share(std::move(inner.cert))));
  cert.bound = state->total;
  cert.trace.push_back(value_entry("M", cert.bound));
  return finish(std::move(cert), budget);
}

}  // namespace

std::size_t first_non_descent(std::span<const Nat> values) {
  if (values.empty()) throw std::invalid_argument("first_non_descent on an empty list");
  for (std::size_t t = 0; t + 1 < values.size(); ++t) {
    if (values[t] <= values[t + 1]) return t;
  }
  return values.size() - 1;  // last value compared with its own repetition
}

Witness dl_1_2(const Sequence& a, Budget& budget) {
  Nat a0 = a.at(0, budget);
  Index i = 0;
  Nat current = a0;
  for (;;) {
    Nat next = a.at(checked_add(i, 1), budget);
    if (current <= next) break;
    current = std::move(next);
    ++i;
  }
  internal_check(Nat(i) <= a0, "first non-descent beyond a(0)");

  BoundCertificate cert;
  cert.kind = "dl_1_2";
  cert.k = 1;
  cert.l = 2;
  cert.indices = {i, i + 1};
  cert.bound = a0 + 1;
  cert.max_index_probed = i + 1;
  cert.trace.push_back(value_entry("alpha(0)", a0));
  cert.trace.push_back(value_entry("i", Nat(i)));
  cert.trace.push_back(value_entry("M", cert.bound));
  return finish(std::move(cert), budget);
}

GapPair gap_pair(const Sequence& a, Index n, Budget& budget) {
  if (n == 0) throw std::invalid_argument("gap_pair needs a positive distance");
  Sequence beta = Sequence::budgeted_rule("window-sum", [a, n](Index m, Budget& b) {
    Nat total = 0;
    for (Index j = 0; j < n; ++j) total += a.at(checked_add(m, j), b);
    return total;
  });
  Witness w = dl_1_2(beta, budget);
  GapPair out;
  out.i = w.cert.indices.front();
  out.n = n;
  out.bound = w.cert.bound - 1;
  out.beta_i = beta.at(out.i, budget);
  out.beta_next = beta.at(out.i + 1, budget);
  out.value_i = a.at(out.i, budget);
  out.value_gap = a.at(checked_add(out.i, n), budget);
  internal_check(out.value_i <= out.value_gap, "window sums rose without a(i) <= a(i+n)");
  return out;
}

Witness dl_1_l(const Sequence& a, std::size_t l, Budget& budget) {
  if (l < 2) throw std::invalid_argument("witness length must be at least 2");
  if (l == 2) return dl_1_2(a, budget);
  require_length(budget, l);

  std::vector<Block> blocks;
  Nat total = 0;
  auto run_block = [&](Index offset) {
    Witness w = dl_1_l(a.shifted(offset), l - 1, budget);
    total += w.cert.bound;
    blocks.push_back(Block{offset, std::move(w.cert)});
  };

  run_block(0);
  std::vector<Nat> firsts{a.at(blocks.front().first(), budget)};
  const Nat repetitions = firsts.front() + 2;
  const std::size_t n_blocks = to_count(repetitions, budget, "repetition count N");
  for (std::size_t j = 1; j < n_blocks; ++j) {
    run_block(to_index(total));
    firsts.push_back(a.at(blocks.back().first(), budget));
  }

  std::size_t t = first_non_descent(firsts);
  internal_check(t + 1 < n_blocks, "non-descent outside the N runs");

  BoundCertificate cert;
  cert.kind = "dl_1_l";
  cert.k = 1;
  cert.l = l;
  cert.indices.push_back(blocks[t].first());
  for (Index i : blocks[t + 1].absolute()) cert.indices.push_back(i);
  cert.bound = total;

  cert.trace.push_back(value_entry("N", repetitions));
  for (std::size_t j = 0; j < n_blocks; ++j) {
    cert.max_index_probed = std::max(cert.max_index_probed, blocks[j].max_probed());
    cert.trace.push_back(nested_entry("block", j + 1, blocks[j].offset, blocks[j].cert));
    cert.trace.push_back(value_entry("M_j", blocks[j].cert->bound, j + 1));
    cert.trace.push_back(value_entry("alpha(i^(j))", firsts[j], j + 1));
  }
  cert.trace.push_back(value_entry("t", Nat(t)));
  cert.trace.push_back(value_entry("M", cert.bound));
  return finish(std::move(cert), budget);
}

Witness dl_2_2(const Sequence& a, const Sequence& b, Budget& budget) {
  struct Round {
    Block block;
    Nat beta;
  };
  std::vector<Round> rounds;
  Nat total = 0;
  auto run_round = [&](std::size_t len) {
    Index offset = to_index(total);
    Witness w = dl_1_l(a.shifted(offset), len, budget);
    Block block{offset, std::move(w.cert)};
    total += block.cert->bound;
    Nat beta = b.at(block.first(), budget);
    rounds.push_back({std::move(block), std::move(beta)});
  };

  run_round(3);
  const Nat repetitions = a.at(rounds.front().block.first(), budget) + 2;
  const std::size_t max_rounds = to_count(repetitions, budget, "repetition count N");

  bool dropped = rounds.front().beta <= 1;
  while (!dropped && rounds.size() < max_rounds) {
    Nat previous = rounds.back().beta;
    run_round(to_count(previous + 1, budget, "round length"));
    dropped = rounds.back().beta < previous;
  }

  BoundCertificate cert;
  cert.kind = "dl_2_2";
  cert.k = 2;
  cert.l = 2;
  cert.bound = total;

  std::vector<Nat> alpha_firsts;
  std::size_t t = 0;
  if (dropped) {
    // b weakly increases somewhere inside the last round, within its length.
    std::vector<Index> block = rounds.back().block.absolute();
    std::vector<Nat> gamma;
    for (Index i : block) gamma.push_back(b.at(i, budget));
    t = first_non_descent(gamma);
    internal_check(t + 1 < block.size(), "steering drop outside the round");
    cert.indices = {block[t], block[t + 1]};
  } else {
    // b weakly increases along the first indices of all N rounds.
    for (const auto& r : rounds) alpha_firsts.push_back(a.at(r.block.first(), budget));
    t = first_non_descent(alpha_firsts);
    internal_check(t + 1 < rounds.size(), "non-descent outside the N rounds");
    cert.indices = {rounds[t].block.first(), rounds[t + 1].block.first()};
  }

  cert.trace.push_back(value_entry("N", repetitions));
  for (std::size_t j = 0; j < rounds.size(); ++j) {
    auto& r = rounds[j];
    cert.max_index_probed = std::max(cert.max_index_probed, r.block.max_probed());
    cert.trace.push_back(nested_entry("block", j + 1, r.block.offset, r.block.cert));
    cert.trace.push_back(value_entry("M_j", r.block.cert->bound, j + 1));
    cert.trace.push_back(value_entry("beta(i_1^(j))", r.beta, j + 1));
  }
  for (std::size_t j = 0; j < alpha_firsts.size(); ++j) {
    cert.trace.push_back(value_entry("alpha(i_1^(j))", alpha_firsts[j], j + 1));
  }
  cert.trace.push_back(value_entry("K", Nat(rounds.size())));
  cert.trace.push_back(tag_entry("exit", dropped ? "beta_drop" : "alpha_pair"));
  cert.trace.push_back(value_entry("t", Nat(t)));
  cert.trace.push_back(value_entry("M", cert.bound));
  return finish(std::move(cert), budget);
}

Witness vertical_step(const std::vector<Sequence>& seqs, Budget& budget) {
  if (seqs.size() < 2) throw std::invalid_argument("vertical step needs at least two sequences");
  const std::size_t k = seqs.size();
  auto state = std::make_shared<VerticalState>(std::vector<Sequence>(seqs.begin(), seqs.end() - 1), seqs.back());
  std::vector<Sequence> starred;
  for (std::size_t m = 0; m + 1 < k; ++m) {
    starred.push_back(Sequence::budgeted_rule("round-first-values", [state, m](Index n, Budget& b) {
      state->force(static_cast<std::size_t>(n), b);
      return state->base[m].at(state->rounds[n].block.first(), b);
    }));
  }

  BoundCertificate cert;
  cert.kind = "dl_k_2";
  cert.k = k;
  cert.l = 2;

  std::optional<BoundCertificate> inner;
  std::optional<std::size_t> drop_t;
  try {
    state->force(0, budget);
    Witness w = dl_k_l(starred, 2, budget);
    state->force(to_count(w.cert.bound, budget, "round count"), budget);
    cert.indices = {state->rounds[w.cert.indices[0]].block.first(), state->rounds[w.cert.indices[1]].block.first()};
    inner = std::move(w.cert);
  } catch (const SteerDrop& drop) {
    if (drop.owner != state.get()) throw;
    internal_check(drop.round + 1 == state->rounds.size(), "drop before the last round");
    std::vector<Index> block = state->rounds.back().block.absolute();
    std::vector<Nat> gamma;
    for (Index i : block) gamma.push_back(state->steer.at(i, budget));
    std::size_t t = first_non_descent(gamma);
    internal_check(t + 1 < block.size(), "steering drop outside the round");
    cert.indices = {block[t], block[t + 1]};
    drop_t = t;
  }

  for (std::size_t j = 0; j < state->rounds.size(); ++j) {
    const auto& r = state->rounds[j];
    cert.max_index_probed = std::max(cert.max_index_probed, r.block.max_probed());
    cert.trace.push_back(nested_entry("block", j + 1, r.block.offset, r.block.cert));
    cert.trace.push_back(value_entry("M_j", r.block.cert->bound, j + 1));
    cert.trace.push_back(value_entry("gamma(i_1^(j))", r.steer, j + 1));
  }
  cert.trace.push_back(value_entry("K", Nat(state->rounds.size())));
  if (inner) {
    cert.trace.push_back(tag_entry("exit", "inner_pair"));
    cert.trace.push_back(nested_entry("inner", std::nullopt, 0, share(std::move(*inner))));
  } else {
    cert.trace.push_back(tag_entry("exit", "steer_drop"));
    cert.trace.push_back(value_entry("t", Nat(*drop_t)));
  }
  cert.bound = state->total;
  cert.trace.push_back(value_entry("M", cert.bound));
  return finish(std::move(cert), budget);
}

Witness dl_2_l(const Sequence& a, const Sequence& b, std::size_t l, Budget& budget) {
  return dl_k_l({a, b}, l, budget);
}

Witness dl_k_l(const std::vector<Sequence>& seqs, std::size_t l, Budget& budget) {
  if (seqs.empty()) throw std::invalid_argument("at least one sequence is required");
  require_length(budget, l);
  const std::size_t k = seqs.size();
  if (k == 1) return l == 2 ? dl_1_2(seqs[0], budget) : dl_1_l(seqs[0], l, budget);
  if (l == 2) return k == 2 ? dl_2_2(seqs[0], seqs[1], budget) : vertical_step(seqs, budget);
  return horizontal(seqs, l, budget);
}

}  // namespace dickson
