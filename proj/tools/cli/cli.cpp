#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "dickson/certificate.hpp"
#include "dickson/engine.hpp"
#include "dickson/multifunction.hpp"
#include "dickson/oracle.hpp"
#include "dickson/pigeonhole.hpp"
#include "dickson/unprovability.hpp"

namespace dickson::cli {

namespace {

using Json = nlohmann::json;

Json nat(const Nat& n) {
  if (n <= Nat(std::numeric_limits<std::uint64_t>::max())) return Json(static_cast<std::uint64_t>(n));
  return Json(n.str());
}

template <class Point>
Json point(const Point& p) {
  Json out = Json::array();
  for (const Nat& c : p) out.push_back(nat(c));
  return out;
}

/// Raised for input problems found after flag parsing (files, ranges).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// DSL text, or the contents of a file for arguments of the form @path.
std::string dsl_text(const std::string& arg) { return arg.rfind('@', 0) == 0 ? read_file(arg.substr(1)) : arg; }

std::vector<Sequence> sequences(const std::vector<std::string>& args) {
  std::vector<Sequence> out;
  for (const auto& a : args) out.push_back(parse_sequence(dsl_text(a)));
  return out;
}

MultiFunction function(const std::string& arg) { return parse_function(dsl_text(arg)); }

Json seq_list(const std::vector<Sequence>& seqs) {
  Json out = Json::array();
  for (const auto& s : seqs) out.push_back(s.to_dsl());
  return out;
}

Json meta(const Budget& budget) { return Json{{"budget", budget.limit()}, {"evals", budget.used()}}; }

Json chain_json(const WitnessChain& c) {
  Json points = Json::array(), values = Json::array();
  for (const auto& p : c.points) points.push_back(point(p));
  for (const auto& v : c.f_values) values.push_back(nat(v));
  return Json{{"floor_m", nat(c.floor_m)}, {"points", points}, {"f_values", values}, {"branches", c.branches}};
}

Json triple_json(const TripleWitness& w, std::size_t floor) {
  return Json{{"lhs", point(w.lhs)},
              {"rhs", point(w.rhs)},
              {"f1", Json::array({nat(w.f1_lhs), nat(w.f1_rhs)})},
              {"f2", Json::array({nat(w.f2_lhs), nat(w.f2_rhs)})},
              {"branch", w.branch},
              {"swapped", w.swapped},
              {"descents", w.descents},
              {"chain_floor", floor}};
}

const char* side_name(Side s) { return s == Side::a ? "a" : "b"; }

struct Options {
  std::uint64_t budget = Budget::kDefaultLimit;
  std::string out_path;
  std::vector<std::string> seqs;
  std::size_t l = 2;
  bool opportunistic = false;
  std::string in_path;
  std::optional<Index> horizon;
  std::string family;
  std::string params;
  std::size_t jobs = 1;
  std::string f, f1, f2;
  std::string m = "0";
  std::optional<std::string> big_m;
  std::size_t trials = 1;
  Index n_max = 0;
};

struct Output {
  std::string text;
  int code = kOk;
};

Output json_output(Json doc, int code = kOk) { return {doc.dump() + "\n", code}; }

Nat parse_nat(const std::string& s, const char* flag) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError(std::string(flag) + " expects a natural number, got '" + s + "'");
  }
  return Nat(s);
}

Output witness(const Options& o, std::ostream& err) {
  auto seqs = sequences(o.seqs);
  Budget budget(o.budget);
  if (o.opportunistic) {
    // Earliest good set found by growing the search window; carries no
    // certificate.
    std::vector<std::vector<Nat>> values(seqs.size());
    for (Index h = 0;; ++h) {
      if (subset_count(h, o.l, kDefaultSubsetCap) > kDefaultSubsetCap) {
        throw BudgetExhausted("opportunistic search exceeded its subset cap at window " + std::to_string(h));
      }
      for (std::size_t s = 0; s < seqs.size(); ++s) values[s].push_back(seqs[s].at(h, budget));
      if (h + 1 < o.l) continue;
      OracleReport r = minimal_good_set(values, o.l);
      if (r.minimal_witness) {
        return json_output(Json{{"kind", "opportunistic"},
                                {"indices", r.minimal_witness->indices},
                                {"k", seqs.size()},
                                {"l", o.l},
                                {"meta", meta(budget)}});
      }
    }
  }
  Witness w = dl_k_l(seqs, o.l, budget);
  Verdict v = check_certificate(seqs, w.good, w.cert, o.budget);
  if (!v.pass) {
    for (const auto& f : v.failures) err << "self-check: " << f << "\n";
    throw std::logic_error("engine output failed its own certificate check");
  }
  Json doc = Json::parse(to_canonical_json(w.cert));
  Json m = meta(budget);
  m["seqs"] = seq_list(seqs);
  doc["meta"] = m;
  return json_output(doc);
}

Output certify(const Options& o) {
  auto seqs = sequences(o.seqs);
  BoundCertificate cert = certificate_from_json(read_file(o.in_path));
  GoodSet good{cert.indices, cert.k};
  Verdict v = check_certificate(seqs, good, cert, o.budget);
  return json_output(Json{{"kind", "verdict"}, {"pass", v.pass}, {"failures", v.failures}}, v.pass ? kOk : kFailure);
}

Output oracle(const Options& o, std::ostream& err) {
  auto seqs = sequences(o.seqs);
  std::optional<Nat> bound;
  try {
    Budget engine_budget(o.budget);
    bound = dl_k_l(seqs, o.l, engine_budget).cert.bound;
  } catch (const BudgetExhausted& e) {
    if (!o.horizon) throw;
    err << "note: no extracted bound (" << e.what() << ")\n";
  }
  Index horizon = o.horizon ? *o.horizon : to_index(*bound);
  Budget budget(o.budget);
  OracleReport r = minimal_good_set(seqs, o.l, horizon, budget, bound);
  Json m = meta(budget);
  m["seqs"] = seq_list(seqs);
  return json_output(Json{{"kind", "oracle"},
                          {"l", o.l},
                          {"horizon", r.horizon},
                          {"minimal_witness", r.minimal_witness ? Json(r.minimal_witness->indices) : Json()},
                          {"minimal_last_index", r.minimal_last_index ? Json(*r.minimal_last_index) : Json()},
                          {"extracted_bound", r.extracted_bound ? nat(*r.extracted_bound) : Json()},
                          {"tight", r.tight},
                          {"candidates", r.candidates},
                          {"meta", m}});
}

Output tightness(const Options& o, std::ostream& err) {
  auto dots = o.params.find("..");
  if (dots == std::string::npos) throw UsageError("--params expects a range a..b");
  Index first = to_index(parse_nat(o.params.substr(0, dots), "--params"));
  Index last = to_index(parse_nat(o.params.substr(dots + 2), "--params"));
  auto rows = tightness_experiment(o.family, first, last, o.l, o.budget, o.jobs);
  std::string text = tightness_csv_header() + "\n";
  for (const auto& row : rows) {
    text += tightness_csv_row(row) + "\n";
    if (row.truncated_horizon) {
      err << "note: " << row.family << " " << row.param << ": oracle horizon truncated to " << *row.truncated_horizon
          << "\n";
    }
  }
  return {text, kOk};
}

const char* kRefutationClaim = "candidate cannot serve as a one-step reduction";

Output refute_2d(const Options& o) {
  MultiFunction f = function(o.f);
  Budget budget(o.budget);
  Refutation2d r = one_step_refute_2d(f, o.l, o.trials, budget, parse_nat(o.m, "--m"));
  Json chains = Json::array();
  for (const auto& c : r.chains) chains.push_back(chain_json(c));
  return json_output(Json{{"kind", "refutation"},
                          {"claim", kRefutationClaim},
                          {"candidate", Json{{"f", r.f}}},
                          {"l", r.l},
                          {"witnesses", chains},
                          {"meta", meta(budget)}},
                     kRefutation);
}

Output refute_3d(const Options& o) {
  MultiFunction f1 = function(o.f1), f2 = function(o.f2);
  Budget budget(o.budget);
  Refutation3d r = one_step_refute_3d(f1, f2, o.trials, budget);
  Json ws = Json::array();
  for (std::size_t t = 0; t < r.witnesses.size(); ++t) ws.push_back(triple_json(r.witnesses[t], t + 1));
  return json_output(Json{{"kind", "refutation"},
                          {"claim", kRefutationClaim},
                          {"candidate", Json{{"f1", r.f1}, {"f2", r.f2}}},
                          {"witnesses", ws},
                          {"meta", meta(budget)}},
                     kRefutation);
}

Output lex_refute(const Options& o) {
  MultiFunction f = function(o.f);
  Budget budget(o.budget);
  LexViolation v = lex_embed_refute(f, budget);
  return json_output(Json{{"kind", "refutation"},
                          {"claim", "candidate is not an order embedding of the lexicographic order"},
                          {"candidate", Json{{"f", f.to_dsl()}}},
                          {"violation", Json{{"t", nat(v.t)},
                                             {"type", v.strict ? "strict" : "order"},
                                             {"f_0_t", nat(v.f_t)},
                                             {"f_0_next", nat(v.f_next)},
                                             {"f_1_0", nat(v.f_one)},
                                             {"ray_probes", v.ray_probes}}},
                          {"meta", meta(budget)}},
                     kRefutation);
}

Output dichotomy(const Options& o) {
  auto seqs = sequences(o.seqs);
  if (seqs.size() != 2) throw UsageError("dichotomy takes exactly two --seq");
  if (!o.big_m) throw UsageError("dichotomy requires --M");
  Budget budget(o.budget);
  DichotomyResult d = dichotomy_lemma(seqs[0], seqs[1], parse_nat(*o.big_m, "--M"), o.l, budget);
  Json doc{{"kind", "dichotomy"}, {"K", d.k}, {"bound_B", nat(d.bound)}, {"blocks", d.blocks}, {"meta", meta(budget)}};
  if (auto* run = std::get_if<EqualRun>(&d.outcome)) {
    doc["variant"] = "equal_run";
    doc["equal_run"] = Json{{"sequence", side_name(run->which)}, {"indices", run->indices}, {"value", nat(run->value)}};
  } else {
    const auto& c = std::get<Crossing>(d.outcome);
    doc["variant"] = "crossing";
    doc["crossing"] = Json{{"first", side_name(c.first_side)},
                           {"n", c.n},
                           {"m", c.m},
                           {"values", Json::array({nat(c.first_value), nat(c.second_value)})}};
  }
  return json_output(doc);
}

Output pigeonhole(const Options& o) {
  auto seqs = sequences(o.seqs);
  if (seqs.size() != 1) throw UsageError("pigeonhole takes exactly one --seq");
  Budget budget(o.budget);
  if (o.big_m) {
    MonoRunResult r = mono_run(seqs[0], parse_nat(*o.big_m, "--M"), o.l, budget);
    if (auto* run = std::get_if<MonoRun>(&r.outcome)) {
      return json_output(
          Json{{"kind", "mono_run"}, {"K", r.k}, {"indices", run->indices}, {"value", nat(run->color)}, {"meta", meta(budget)}});
    }
    const auto& nb = std::get<NotAllBelow>(r.outcome);
    return json_output(
        Json{{"kind", "not_all_below"}, {"K", r.k}, {"n", nb.n}, {"value", nat(nb.value)}, {"meta", meta(budget)}});
  }
  MonoRun run = ph2_from_dl(Coloring(seqs[0]), o.l, budget);
  return json_output(Json{{"kind", "mono_run"}, {"indices", run.indices}, {"color", nat(run.color)}, {"meta", meta(budget)}});
}

Output counterexample(const Options& o) {
  FamilyVerdict v = counterexample_family_check(o.n_max);
  Json doc{{"kind", "family_check"},
           {"n_max", v.n_max},
           {"pairs", v.pairs},
           {"refuted", v.refuted},
           {"verdict", v.all_refuted() ? "refuted all pairs" : "unrefuted pair found"}};
  if (v.first_unrefuted) doc["first_unrefuted"] = Json::array({v.first_unrefuted->first, v.first_unrefuted->second});
  return json_output(doc, v.all_refuted() ? kOk : kFailure);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Constructive witness extraction for finite cases of Dickson's lemma", "dickson"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--budget", o.budget, "Evaluation budget per engine call")->capture_default_str();
  app.add_option("--out", o.out_path, "Write machine output to this file instead of standard out");

  auto l_flag = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--l", o.l, "Witness length")->check(CLI::PositiveNumber);
    if (required) opt->required();
  };

  auto* witness_cmd = app.add_subcommand("witness", "Extract a good set and its bound certificate");
  witness_cmd->add_option("--seq", o.seqs, "Sequence DSL (repeatable; @file reads a file)")->required();
  l_flag(witness_cmd, true);
  witness_cmd->add_flag("--opportunistic", o.opportunistic, "Earliest good set found by direct search; no certificate");

  auto* certify_cmd = app.add_subcommand("certify", "Check a certificate against its sequences");
  certify_cmd->add_option("--in", o.in_path, "Certificate JSON file")->required();
  certify_cmd->add_option("--seq", o.seqs, "Sequence DSL (repeatable)")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive minimal good-set search");
  oracle_cmd->add_option("--seq", o.seqs, "Sequence DSL (repeatable)")->required();
  l_flag(oracle_cmd, true);
  oracle_cmd->add_option("--horizon", o.horizon, "Largest index searched (default: the extracted bound)");

  auto* tight_cmd = app.add_subcommand("tightness", "Extracted bound against the oracle over a family");
  tight_cmd->add_option("--family", o.family, "dec, const or gap")->required();
  tight_cmd->add_option("--params", o.params, "Parameter range a..b")->required();
  l_flag(tight_cmd, false);
  tight_cmd->add_option("--jobs", o.jobs, "Parameter points run in parallel")->check(CLI::PositiveNumber);

  auto* r2_cmd = app.add_subcommand("refute-2d", "Chain on which a candidate f: N^2 -> N fails");
  r2_cmd->add_option("--f", o.f, "Function DSL, f2:<expr>")->required();
  l_flag(r2_cmd, true);
  r2_cmd->add_option("--m", o.m, "Least coordinate of the chain (first trial)");
  r2_cmd->add_option("--trials", o.trials, "Number of floors tried")->check(CLI::PositiveNumber);

  auto* r3_cmd = app.add_subcommand("refute-3d", "Triples on which candidates f1, f2: N^3 -> N fail");
  r3_cmd->add_option("--f1", o.f1, "Function DSL, f3:<expr>")->required();
  r3_cmd->add_option("--f2", o.f2, "Function DSL, f3:<expr>")->required();
  r3_cmd->add_option("--trials", o.trials, "Number of chain floors tried")->check(CLI::PositiveNumber);

  auto* lex_cmd = app.add_subcommand("lex-refute", "Violation of a lexicographic order embedding");
  lex_cmd->add_option("--f", o.f, "Function DSL, f2:<expr>")->required();

  auto* dich_cmd = app.add_subcommand("dichotomy", "Equal run below M or crossing above M for two sequences");
  dich_cmd->add_option("--seq", o.seqs, "The two sequences a, b")->required();
  dich_cmd->add_option("--M", o.big_m, "Threshold")->required();
  l_flag(dich_cmd, true);

  auto* ph_cmd = app.add_subcommand("pigeonhole", "Monochromatic run of a coloring, or finite pigeonhole with --M");
  ph_cmd->add_option("--seq", o.seqs, "Coloring (values 0/1) or sequence")->required();
  l_flag(ph_cmd, true);
  ph_cmd->add_option("--M", o.big_m, "Finite pigeonhole threshold");

  auto* cex_cmd = app.add_subcommand("counterexample", "Verify the family with no common good pair");
  cex_cmd->add_option("--n-max", o.n_max, "Largest index checked")->required()->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  Output result;
  try {
    if (*witness_cmd) result = witness(o, err);
    else if (*certify_cmd) result = certify(o);
    else if (*oracle_cmd) result = oracle(o, err);
    else if (*tight_cmd) result = tightness(o, err);
    else if (*r2_cmd) result = refute_2d(o);
    else if (*r3_cmd) result = refute_3d(o);
    else if (*lex_cmd) result = lex_refute(o);
    else if (*dich_cmd) result = dichotomy(o);
    else if (*ph_cmd) result = pigeonhole(o);
    else result = counterexample(o);
  } catch (const BudgetExhausted& e) {
    err << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const HorizonTooLarge& e) {
    err << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kFailure;
  }

  if (o.out_path.empty()) {
    out << result.text;
  } else {
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file || !(file << result.text)) {
      err << "error: cannot write '" << o.out_path << "'\n";
      return kFailure;
    }
  }
  return result.code;
}

}  // namespace dickson::cli
