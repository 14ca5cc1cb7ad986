#include "dickson/certificate.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "dickson/engine.hpp"
#include "json_support.hpp"

namespace dickson {

std::string derivation_kind(std::size_t k, std::size_t l) {
  if (k == 0 || l < 2) throw std::invalid_argument("derivation needs k >= 1 and l >= 2");
  if (k == 1) return l == 2 ? "dl_1_2" : "dl_1_l";
  if (l == 2) return k == 2 ? "dl_2_2" : "dl_k_2";
  return "dl_k_l";
}

namespace {

bool kind_fits(const std::string& kind, std::size_t k, std::size_t l) {
  if (kind == "dl_1_2") return k == 1 && l == 2;
  if (kind == "dl_1_l") return k == 1 && l >= 3;
  if (kind == "dl_2_2") return k == 2 && l == 2;
  if (kind == "dl_k_2") return k >= 2 && l == 2;
  if (kind == "dl_k_l") return k >= 2 && l >= 3;
  return false;
}

struct Mismatch {
  std::string message;
};

std::string str(const Nat& n) { return n.str(); }

struct Rederived {
  std::vector<Index> indices;
  Nat bound;
  Index max_probed = 0;
};

// Sequential reader over one trace level; every read names the expected
// symbol so a reordered or truncated trace is reported where it diverges.
class TraceReader {
 public:
  TraceReader(const std::vector<TraceEntry>& trace, std::string path) : trace_(trace), path_(std::move(path)) {}

  bool peek(const std::string& sym) const { return pos_ < trace_.size() && trace_[pos_].sym == sym; }

  const TraceEntry& next(const std::string& sym, std::optional<std::uint64_t> j = std::nullopt) {
    if (pos_ >= trace_.size()) fail("trace ends where '" + sym + "' was expected");
    const TraceEntry& e = trace_[pos_];
    if (e.sym != sym) fail("entry " + std::to_string(pos_) + " is '" + e.sym + "', expected '" + sym + "'");
    if (e.j != j) fail("entry " + std::to_string(pos_) + " ('" + sym + "') has the wrong j");
    ++pos_;
    return e;
  }

  Nat value(const std::string& sym, std::optional<std::uint64_t> j = std::nullopt) {
    const TraceEntry& e = next(sym, j);
    if (!e.val) fail("'" + sym + "' carries no value");
    return *e.val;
  }

  void expect(const std::string& sym, std::optional<std::uint64_t> j, const Nat& expected) {
    Nat found = value(sym, j);
    if (found != expected) {
      fail("'" + sym + (j ? "[" + std::to_string(*j) + "]" : std::string()) + "' records " + str(found) +
           ", rederived " + str(expected));
    }
  }

  std::string tag(const std::string& sym) {
    const TraceEntry& e = next(sym);
    if (!e.tag) fail("'" + sym + "' carries no tag");
    return *e.tag;
  }

  const BoundCertificate& nested(const std::string& sym, std::optional<std::uint64_t> j, const Nat& offset) {
    const TraceEntry& e = next(sym, j);
    if (!e.cert) fail("'" + sym + "' carries no sub-derivation");
    Nat found = e.offset.value_or(Nat(0));
    if (found != offset) fail("'" + sym + "' runs at offset " + str(found) + ", rederived " + str(offset));
    return *e.cert;
  }

  void finish() {
    if (pos_ != trace_.size()) fail("unexpected trailing entry '" + trace_[pos_].sym + "'");
  }

  [[noreturn]] void fail(const std::string& message) const { throw Mismatch{path_ + ": " + message}; }

  const std::string& path() const { return path_; }

 private:
  const std::vector<TraceEntry>& trace_;
  std::string path_;
  std::size_t pos_ = 0;
};

class Checker {
 public:
  explicit Checker(Budget& budget) : budget_(budget) {}

  Rederived rederive(const std::vector<Sequence>& seqs, const BoundCertificate& cert, const std::string& path) {
    TraceReader reader(cert.trace, path);
    if (cert.kind == "dl_1_2") return dl_1_2(seqs[0], reader);
    if (cert.kind == "dl_1_l") return dl_1_l(seqs[0], cert.l, reader);
    if (cert.kind == "dl_2_2") return dl_2_2(seqs[0], seqs[1], reader);
    if (cert.kind == "dl_k_2") return vertical(seqs, reader);
    return horizontal(seqs, cert.l, reader);
  }

 private:
  Nat eval(const Sequence& s, Index n) { return s.at(n, budget_); }

  Rederived child(const std::vector<Sequence>& seqs, const BoundCertificate& cert, std::size_t l,
                  const std::string& path) {
    auto fail = [&](const std::string& m) { throw Mismatch{path + ": " + m}; };
    if (cert.k != seqs.size() || cert.l != l) fail("sub-derivation has the wrong shape");
    if (cert.kind != derivation_kind(seqs.size(), l)) fail("sub-derivation kind '" + cert.kind + "' is not the engine's");
    if (cert.indices.size() != l) fail("sub-derivation lists the wrong number of indices");
    Rederived r = rederive(seqs, cert, path);
    if (r.indices != cert.indices) fail("recorded indices differ from the rederived ones");
    if (r.bound != cert.bound) fail("recorded bound " + str(cert.bound) + ", rederived " + str(r.bound));
    if (r.max_probed != cert.max_index_probed) fail("recorded max_index_probed differs from the rederived one");
    return r;
  }

  // Values of the base sequences at recorded positions; probing past the
  // recorded ones means the trace omitted work the engine must have done.
  static std::vector<Sequence> restricted(const std::vector<Sequence>& base, std::vector<Index> positions,
                                          const std::string& path) {
    auto shared = std::make_shared<const std::vector<Index>>(std::move(positions));
    std::vector<Sequence> out;
    for (const Sequence& s : base) {
      out.push_back(Sequence::budgeted_rule("recorded-values", [s, shared, path](Index n, Budget& b) {
        if (n >= shared->size()) {
          throw Mismatch{path + ": inner derivation reads position " + std::to_string(n) + " beyond the " +
                         std::to_string(shared->size()) + " recorded"};
        }
        return s.at((*shared)[n], b);
      }));
    }
    return out;
  }

  Rederived dl_1_2(const Sequence& a, TraceReader& reader) {
    Nat a0 = eval(a, 0);
    reader.expect("alpha(0)", std::nullopt, a0);
    Index i = 0;
    Nat current = a0;
    for (;;) {
      Nat next = eval(a, checked_add(i, 1));
      if (current <= next) break;
      current = std::move(next);
      ++i;
    }
    reader.expect("i", std::nullopt, Nat(i));
    reader.expect("M", std::nullopt, a0 + 1);
    reader.finish();
    return {{i, i + 1}, a0 + 1, i + 1};
  }

  Rederived dl_1_l(const Sequence& a, std::size_t l, TraceReader& reader) {
    const Nat recorded_n = reader.value("N");
    Nat total = 0;
    Index max_probed = 0;
    std::vector<Nat> firsts;
    std::vector<Index> first_abs;
    std::vector<std::vector<Index>> blocks;
    for (std::uint64_t j = 1; reader.peek("block"); ++j) {
      if (j > 1 && Nat(j) > recorded_n) reader.fail("more runs than N");
      Index offset = to_index(total);
      const BoundCertificate& sub = reader.nested("block", j, total);
      Rederived r = child({a.shifted(offset)}, sub, l - 1, reader.path() + "/block[" + std::to_string(j) + "]");
      reader.expect("M_j", j, r.bound);
      Index first = checked_add(offset, r.indices.front());
      Nat v = eval(a, first);
      reader.expect("alpha(i^(j))", j, v);
      if (j == 1 && recorded_n != v + 2) reader.fail("N records " + str(recorded_n) + ", rederived " + str(v + 2));
      firsts.push_back(v);
      first_abs.push_back(first);
      std::vector<Index> abs;
      for (Index i : r.indices) abs.push_back(checked_add(offset, i));
      blocks.push_back(std::move(abs));
      max_probed = std::max(max_probed, checked_add(offset, r.max_probed));
      total += r.bound;
    }
    if (firsts.empty() || Nat(firsts.size()) != recorded_n) reader.fail("number of runs differs from N");
    std::size_t t = first_non_descent(firsts);
    if (t + 1 >= firsts.size()) reader.fail("no non-descent among the runs' first values");
    reader.expect("t", std::nullopt, Nat(t));
    reader.expect("M", std::nullopt, total);
    reader.finish();
    Rederived out{{first_abs[t]}, total, max_probed};
    out.indices.insert(out.indices.end(), blocks[t + 1].begin(), blocks[t + 1].end());
    return out;
  }

  // Shared shape of dl_2_2 and the vertical scheme: rounds of witnesses for
  // `base` whose lengths follow the steering sequence.
  struct Rounds {
    std::vector<Index> first_abs;
    std::vector<std::vector<Index>> blocks;
    std::vector<Nat> steer;
    bool dropped = false;
    Nat total = 0;
    Index max_probed = 0;
  };

  Rounds read_rounds(const std::vector<Sequence>& base, const Sequence& steer, const std::string& steer_sym,
                     std::optional<Nat> max_rounds, TraceReader& reader) {
    Rounds rounds;
    for (std::uint64_t j = 1; reader.peek("block"); ++j) {
      if (rounds.dropped) reader.fail("rounds continue after the steering value dropped");
      if (max_rounds && Nat(j) > *max_rounds) reader.fail("more rounds than N");
      std::size_t len = j == 1 ? 3 : to_count(rounds.steer.back() + 1, budget_, "round length");
      Index offset = to_index(rounds.total);
      const BoundCertificate& sub = reader.nested("block", j, rounds.total);
      Rederived r = child(shift_all(base, offset), sub, len, reader.path() + "/block[" + std::to_string(j) + "]");
      reader.expect("M_j", j, r.bound);
      Index first = checked_add(offset, r.indices.front());
      Nat mu = eval(steer, first);
      reader.expect(steer_sym, j, mu);
      rounds.dropped = j == 1 ? mu <= 1 : mu < rounds.steer.back();
      rounds.first_abs.push_back(first);
      std::vector<Index> abs;
      for (Index i : r.indices) abs.push_back(checked_add(offset, i));
      rounds.blocks.push_back(std::move(abs));
      rounds.steer.push_back(std::move(mu));
      rounds.max_probed = std::max(rounds.max_probed, checked_add(offset, r.max_probed));
      rounds.total += r.bound;
    }
    if (rounds.blocks.empty()) reader.fail("no rounds recorded");
    return rounds;
  }

  std::pair<Index, Index> drop_pair(const Sequence& steer, const Rounds& rounds, TraceReader& reader) {
    const std::vector<Index>& block = rounds.blocks.back();
    std::vector<Nat> gamma;
    for (Index i : block) gamma.push_back(eval(steer, i));
    std::size_t t = first_non_descent(gamma);
    if (t + 1 >= block.size()) reader.fail("steering drop without a pair inside the last round");
    reader.expect("t", std::nullopt, Nat(t));
    return {block[t], block[t + 1]};
  }

  Rederived dl_2_2(const Sequence& a, const Sequence& b, TraceReader& reader) {
    const Nat recorded_n = reader.value("N");
    Rounds rounds = read_rounds({a}, b, "beta(i_1^(j))", recorded_n, reader);
    Nat n = eval(a, rounds.first_abs.front()) + 2;
    if (n != recorded_n) reader.fail("N records " + str(recorded_n) + ", rederived " + str(n));
    std::pair<Index, Index> pair;
    if (rounds.dropped) {
      reader.expect("K", std::nullopt, Nat(rounds.blocks.size()));
      if (reader.tag("exit") != "beta_drop") reader.fail("exit tag disagrees with the recorded drop");
      pair = drop_pair(b, rounds, reader);
    } else {
      if (Nat(rounds.blocks.size()) != n) reader.fail("rounds stop before N without a drop");
      std::vector<Nat> alphas;
      for (std::size_t j = 0; j < rounds.first_abs.size(); ++j) {
        alphas.push_back(eval(a, rounds.first_abs[j]));
        reader.expect("alpha(i_1^(j))", j + 1, alphas.back());
      }
      reader.expect("K", std::nullopt, Nat(rounds.blocks.size()));
      if (reader.tag("exit") != "alpha_pair") reader.fail("exit tag disagrees with the recorded rounds");
      std::size_t t = first_non_descent(alphas);
      if (t + 1 >= alphas.size()) reader.fail("no non-descent among the rounds' first values");
      reader.expect("t", std::nullopt, Nat(t));
      pair = {rounds.first_abs[t], rounds.first_abs[t + 1]};
    }
    reader.expect("M", std::nullopt, rounds.total);
    reader.finish();
    return {{pair.first, pair.second}, rounds.total, rounds.max_probed};
  }

  Rederived vertical(const std::vector<Sequence>& seqs, TraceReader& reader) {
    std::vector<Sequence> base(seqs.begin(), seqs.end() - 1);
    const Sequence& steer = seqs.back();
    Rounds rounds = read_rounds(base, steer, "gamma(i_1^(j))", std::nullopt, reader);
    reader.expect("K", std::nullopt, Nat(rounds.blocks.size()));
    std::string exit = reader.tag("exit");
    std::pair<Index, Index> pair;
    if (exit == "steer_drop") {
      if (!rounds.dropped) reader.fail("steer_drop exit without a drop");
      pair = drop_pair(steer, rounds, reader);
    } else if (exit == "inner_pair") {
      if (rounds.dropped) reader.fail("inner_pair exit after a drop");
      const BoundCertificate& sub = reader.nested("inner", std::nullopt, 0);
      std::string path = reader.path() + "/inner";
      Rederived r = child(restricted(base, rounds.first_abs, path), sub, 2, path);
      if (Nat(rounds.blocks.size()) != r.bound + 1) reader.fail("round count differs from the inner bound + 1");
      pair = {rounds.first_abs[r.indices[0]], rounds.first_abs[r.indices[1]]};
    } else {
      reader.fail("unknown exit tag '" + exit + "'");
    }
    reader.expect("M", std::nullopt, rounds.total);
    reader.finish();
    return {{pair.first, pair.second}, rounds.total, rounds.max_probed};
  }

  Rederived horizontal(const std::vector<Sequence>& seqs, std::size_t l, TraceReader& reader) {
    Nat total = 0;
    Index max_probed = 0;
    std::vector<Index> firsts, seconds;
    for (std::uint64_t n = 1; reader.peek("harvest"); ++n) {
      Index offset = to_index(total);
      const BoundCertificate& sub = reader.nested("harvest", n, total);
      Rederived r = child(shift_all(seqs, offset), sub, 2, reader.path() + "/harvest[" + std::to_string(n) + "]");
      reader.expect("M_n", n, r.bound);
      firsts.push_back(checked_add(offset, r.indices[0]));
      seconds.push_back(checked_add(offset, r.indices[1]));
      max_probed = std::max(max_probed, checked_add(offset, r.max_probed));
      total += r.bound;
    }
    if (firsts.empty()) reader.fail("no harvested pairs recorded");
    reader.expect("H", std::nullopt, Nat(firsts.size()));
    const BoundCertificate& sub = reader.nested("inner", std::nullopt, 0);
    std::string path = reader.path() + "/inner";
    Rederived r = child(restricted(seqs, firsts, path), sub, l - 1, path);
    if (Nat(firsts.size()) != r.bound + 1) reader.fail("harvest count differs from the inner bound + 1");
    reader.expect("M", std::nullopt, total);
    reader.finish();
    Rederived out{{}, total, max_probed};
    for (Index s : r.indices) out.indices.push_back(firsts[s]);
    out.indices.push_back(seconds[r.indices.back()]);
    return out;
  }

  Budget& budget_;
};

}  // namespace

Verdict check_certificate(const std::vector<Sequence>& seqs, const GoodSet& good, const BoundCertificate& cert,
                          std::uint64_t budget_limit) {
  Verdict verdict;
  auto failure = [&](const std::string& clause, const std::string& message) {
    verdict.pass = false;
    verdict.failures.push_back(clause + ": " + message);
  };
  Budget budget(budget_limit);

  bool shape_ok = true;
  auto shape = [&](const std::string& message) {
    shape_ok = false;
    failure("shape", message);
  };
  if (seqs.empty()) shape("no sequences given");
  if (cert.k != seqs.size() || good.k != seqs.size()) shape("k does not match the number of sequences");
  if (cert.indices.size() != cert.l || cert.l < 2) shape("indices do not form a set of length l >= 2");
  if (good.indices != cert.indices) shape("good set and certificate list different indices");
  if (!kind_fits(cert.kind, cert.k, cert.l)) shape("kind '" + cert.kind + "' does not fit k and l");
  for (std::size_t r = 1; r < good.indices.size(); ++r) {
    if (good.indices[r - 1] >= good.indices[r]) shape("indices are not strictly increasing");
  }

  try {
    for (std::size_t s = 0; s < seqs.size(); ++s) {
      for (std::size_t r = 1; r < good.indices.size(); ++r) {
        Nat lo = seqs[s].at(good.indices[r - 1], budget);
        Nat hi = seqs[s].at(good.indices[r], budget);
        if (lo > hi) {
          failure("goodness", "sequence " + std::to_string(s) + " descends from " + lo.str() + " at " +
                                  std::to_string(good.indices[r - 1]) + " to " + hi.str() + " at " +
                                  std::to_string(good.indices[r]));
        }
      }
    }
  } catch (const BudgetExhausted& e) {
    failure("budget", e.what());
    return verdict;
  }

  for (Index i : good.indices) {
    if (Nat(i) > cert.bound) failure("bound", "index " + std::to_string(i) + " exceeds bound " + cert.bound.str());
  }
  if (Nat(cert.max_index_probed) > cert.bound) failure("bound", "max_index_probed exceeds bound");

  if (!shape_ok) return verdict;
  try {
    Checker checker(budget);
    Rederived r = checker.rederive(seqs, cert, cert.kind);
    if (r.bound != cert.bound) failure("bound", "recorded bound " + cert.bound.str() + ", rederived " + r.bound.str());
    if (r.indices != cert.indices) failure("trace", "recorded indices differ from the rederived ones");
    if (r.max_probed != cert.max_index_probed) failure("trace", "recorded max_index_probed differs from the rederived one");
  } catch (const Mismatch& m) {
    failure("trace", m.message);
  } catch (const BudgetExhausted& e) {
    failure("budget", e.what());
  } catch (const std::exception& e) {
    failure("trace", e.what());
  }
  return verdict;
}

namespace detail {

Json certificate_json(const BoundCertificate& cert) {
  Json trace = Json::array();
  for (const TraceEntry& e : cert.trace) {
    Json entry = Json::object();
    entry["sym"] = e.sym;
    if (e.j) entry["j"] = *e.j;
    if (e.val) entry["val"] = nat_json(*e.val);
    if (e.tag) entry["tag"] = *e.tag;
    if (e.offset) entry["offset"] = nat_json(*e.offset);
    if (e.cert) entry["cert"] = certificate_json(*e.cert);
    trace.push_back(std::move(entry));
  }
  Json out = Json::object();
  out["kind"] = cert.kind;
  out["k"] = cert.k;
  out["l"] = cert.l;
  out["indices"] = cert.indices;
  out["bound"] = nat_json(cert.bound);
  out["trace"] = std::move(trace);
  out["max_index_probed"] = cert.max_index_probed;
  return out;
}

}  // namespace detail

std::string to_canonical_json(const BoundCertificate& cert) { return detail::canonical(detail::certificate_json(cert)); }

namespace {

using detail::Json;

const Json& field(const Json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw FormatError(std::string("missing field '") + name + "'");
  return *it;
}

std::uint64_t json_u64(const Json& j, const char* name) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw FormatError(std::string("field '") + name + "' is not a small natural number");
  }
  return j.get<std::uint64_t>();
}

void only_fields(const Json& obj, std::initializer_list<const char*> allowed, const char* what) {
  if (!obj.is_object()) throw FormatError(std::string(what) + " is not a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; })) {
      throw FormatError(std::string("unknown field '") + it.key() + "' in " + what);
    }
  }
}

BoundCertificate parse_certificate(const Json& j, int depth) {
  if (depth > 64) throw FormatError("certificate nesting is too deep");
  only_fields(j, {"kind", "k", "l", "indices", "bound", "trace", "max_index_probed", "meta"}, "certificate");
  BoundCertificate cert;
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) throw FormatError("field 'kind' is not a string");
  cert.kind = kind.get<std::string>();
  cert.k = json_u64(field(j, "k"), "k");
  cert.l = json_u64(field(j, "l"), "l");
  const Json& indices = field(j, "indices");
  if (!indices.is_array()) throw FormatError("field 'indices' is not an array");
  for (const Json& i : indices) cert.indices.push_back(json_u64(i, "indices"));
  cert.bound = detail::json_nat(field(j, "bound"), "bound");
  cert.max_index_probed = json_u64(field(j, "max_index_probed"), "max_index_probed");
  const Json& trace = field(j, "trace");
  if (!trace.is_array()) throw FormatError("field 'trace' is not an array");
  for (const Json& e : trace) {
    only_fields(e, {"sym", "j", "val", "tag", "offset", "cert"}, "trace entry");
    TraceEntry entry;
    const Json& sym = field(e, "sym");
    if (!sym.is_string()) throw FormatError("field 'sym' is not a string");
    entry.sym = sym.get<std::string>();
    if (e.contains("j")) entry.j = json_u64(e["j"], "j");
    if (e.contains("val")) entry.val = detail::json_nat(e["val"], "val");
    if (e.contains("tag")) {
      if (!e["tag"].is_string()) throw FormatError("field 'tag' is not a string");
      entry.tag = e["tag"].get<std::string>();
    }
    if (e.contains("offset")) entry.offset = detail::json_nat(e["offset"], "offset");
    if (e.contains("cert")) entry.cert = std::make_shared<const BoundCertificate>(parse_certificate(e["cert"], depth + 1));
    cert.trace.push_back(std::move(entry));
  }
  return cert;
}

}  // namespace

BoundCertificate certificate_from_json(std::string_view text) {
  Json j = Json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) throw FormatError("input is not valid JSON");
  return parse_certificate(j, 0);
}

}  // namespace dickson
