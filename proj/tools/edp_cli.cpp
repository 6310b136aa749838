// edp: analyze stabilizer codes, turn them into hashing or breeding
// distillation protocols, and verify, simulate, search and compare them.
//
// Exit codes: 0 success/PASS, 1 validation error or FAIL, 2 usage, 3 refusal
// because an enumeration or search is over its bound.

#include "edp/catalog.hpp"
#include "edp/edp_engine.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::ordered_json;

enum class Format { human, tsv, jsonl };

struct Options {
  Format format = Format::human;
  std::string code;
  std::string name;
  std::string catalog;
  std::string puncture;
  int last = -1;
  std::string rows;
  int p = 2;
  int max_erasures = -1;
  std::uint64_t cap = 50'000'000;
  std::string rates = "0.01,0.05,0.1";
  double erasure = 0.0;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  std::string postselect = "none";
  int workers = 1;
  bool exact = false;
  int n = 0;
  int k = 0;
  int dmin = 1;
  bool pure = false;
  std::uint64_t budget = 20'000'000;
  int compare_n = -1;
  int t = -1;
  int e = -1;
};

struct ExitError : std::runtime_error {
  int code;
  ExitError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string positions_text(const std::vector<int>& zero_based) {
  std::string out;
  for (size_t i = 0; i < zero_based.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(zero_based[i] + 1);
  }
  return out.empty() ? "-" : out;
}

ordered_json positions_json(const std::vector<int>& zero_based) {
  ordered_json a = ordered_json::array();
  for (int v : zero_based) a.push_back(v + 1);
  return a;
}

std::string dist_text(const std::optional<int>& d) { return d ? std::to_string(*d) : "undefined"; }
ordered_json dist_json(const std::optional<int>& d) { return d ? ordered_json(*d) : ordered_json(nullptr); }

void print_tsv(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) std::cout << (i ? "\t" : "") << cells[i];
  std::cout << '\n';
}

std::vector<int> parse_positions(const std::string& text, int n) {
  std::vector<int> out;
  if (text.empty() || text == "-") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    try {
      size_t used = 0;
      v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ExitError(2, "bad position '" + item + "' in --puncture");
    }
    if (v < 1 || v > n) throw ExitError(1, "puncture position " + item + " outside 1.." + std::to_string(n));
    out.push_back(v - 1);
  }
  return out;
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ExitError(2, "bad rate '" + item + "' in --rates");
    }
  }
  if (out.empty()) throw ExitError(2, "--rates needs at least one value");
  return out;
}

edp::CatalogEntry resolve_code(const Options& o) {
  if (o.code.empty()) throw ExitError(2, "--code is required");
  if (std::filesystem::is_regular_file(o.code)) {
    auto entries = edp::load_catalog_file(o.code);
    if (entries.empty()) throw ExitError(1, "catalog file '" + o.code + "' has no entries");
    if (o.name.empty()) return entries.front();
    if (const auto* e = edp::find_entry(entries, o.name)) return *e;
    throw ExitError(1, "no entry '" + o.name + "' in '" + o.code + "'");
  }
  if (const auto* e = edp::find_entry(edp::builtin_catalog(), o.code)) return *e;
  throw ExitError(1, "'" + o.code + "' is neither a catalog file nor a built-in code name");
}

edp::BreedingProtocolSpec resolve_spec(const Options& o) {
  if (!o.rows.empty()) {
    const edp::PrimeField f(o.p);
    std::vector<edp::SympVector> gens;
    std::stringstream ss(o.rows);
    std::string item;
    while (std::getline(ss, item, ';')) gens.push_back(edp::SympVector::parse(f, item));
    if (gens.empty()) throw ExitError(2, "--rows needs at least one vector");
    return edp::build_from_subspace(edp::SympSubspace::span(f, gens.front().num_positions(), gens));
  }
  const edp::CatalogEntry entry = resolve_code(o);
  std::vector<int> punct = parse_positions(o.puncture, entry.n);
  if (o.last >= 0) {
    if (!punct.empty()) throw ExitError(2, "--puncture and --last are mutually exclusive");
    punct = edp::last_positions(entry.n, o.last);
  }
  if (punct.empty()) return edp::hashing_spec(entry.code);
  return edp::convert_pure(entry.code, punct);
}

std::string kind_of(const edp::BreedingProtocolSpec& s) { return s.params.c == 0 ? "hashing" : "breeding"; }

// ---------------------------------------------------------------------------

int cmd_analyze(const Options& o) {
  const edp::CatalogEntry e = resolve_code(o);
  const auto& info = e.code.distance_info();
  const int dual_dim = e.code.dual().dim();
  switch (o.format) {
    case Format::human:
      std::cout << "code " << e.name << " p=" << e.p << '\n';
      std::cout << "n=" << e.code.n() << " k=" << e.code.k() << " d=" << dist_text(info.d)
                << " pure=" << (info.pure ? "yes" : "no") << '\n';
      std::cout << "dual dimension " << dual_dim << '\n';
      std::cout << "generators:\n";
      for (const auto& g : e.code.stabilizer().basis_vectors()) std::cout << "  " << g.to_string() << '\n';
      break;
    case Format::tsv:
      print_tsv({"name", "p", "n", "k", "d", "pure", "dual_dim", "generators"});
      {
        std::string gens;
        for (const auto& g : e.code.stabilizer().basis_vectors()) gens += (gens.empty() ? "" : ";") + g.to_string();
        print_tsv({e.name, std::to_string(e.p), std::to_string(e.code.n()), std::to_string(e.code.k()),
                   dist_text(info.d), info.pure ? "1" : "0", std::to_string(dual_dim), gens});
      }
      break;
    case Format::jsonl: {
      ordered_json j;
      j["record"] = "analyze";
      j["name"] = e.name;
      j["p"] = e.p;
      j["n"] = e.code.n();
      j["k"] = e.code.k();
      j["d"] = dist_json(info.d);
      j["pure"] = info.pure;
      j["dual_dim"] = dual_dim;
      ordered_json gens = ordered_json::array();
      for (const auto& g : e.code.stabilizer().basis_vectors()) gens.push_back(g.to_string());
      j["generators"] = gens;
      std::cout << j.dump() << '\n';
      break;
    }
  }
  return 0;
}

int cmd_convert(const Options& o) {
  const edp::BreedingProtocolSpec s = resolve_spec(o);
  const auto& pr = s.params;
  switch (o.format) {
    case Format::human:
      std::cout << kind_of(s) << " protocol on " << s.extended_code.n() << " positions\n";
      std::cout << "noisy=" << pr.n << " ebits=" << pr.c << " gross=" << pr.gross_k << " net=" << pr.net_yield()
                << " d=" << dist_text(pr.d) << '\n';
      std::cout << "ebit positions " << positions_text(s.ebit_positions) << '\n';
      std::cout << "recomputed d " << dist_text(s.recomputed_d) << (s.distance_mismatch() ? " (MISMATCH)" : "") << '\n';
      std::cout << "extended generators:\n";
      for (const auto& g : s.extended_code.stabilizer().basis_vectors()) std::cout << "  " << g.to_string() << '\n';
      break;
    case Format::tsv:
      print_tsv({"kind", "positions", "noisy", "ebits", "gross", "net", "d", "ebit_positions", "recomputed_d"});
      print_tsv({kind_of(s), std::to_string(s.extended_code.n()), std::to_string(pr.n), std::to_string(pr.c),
                 std::to_string(pr.gross_k), std::to_string(pr.net_yield()), dist_text(pr.d),
                 positions_text(s.ebit_positions), dist_text(s.recomputed_d)});
      break;
    case Format::jsonl: {
      ordered_json j;
      j["record"] = "convert";
      j["kind"] = kind_of(s);
      j["positions"] = s.extended_code.n();
      j["noisy"] = pr.n;
      j["ebits"] = pr.c;
      j["gross"] = pr.gross_k;
      j["net"] = pr.net_yield();
      j["d"] = dist_json(pr.d);
      j["ebit_positions"] = positions_json(s.ebit_positions);
      j["recomputed_d"] = dist_json(s.recomputed_d);
      ordered_json gens = ordered_json::array();
      for (const auto& g : s.extended_code.stabilizer().basis_vectors()) gens.push_back(g.to_string());
      j["generators"] = gens;
      std::cout << j.dump() << '\n';
      break;
    }
  }
  return 0;
}

int cmd_verify(const Options& o) {
  const edp::BreedingProtocolSpec s = resolve_spec(o);
  edp::GuaranteeOptions opts;
  opts.pattern_cap = o.cap;
  if (o.max_erasures >= 0) opts.max_erasures = o.max_erasures;
  const edp::GuaranteeCertificate cert = edp::verify_guarantee(s, opts);
  const std::string verdict = cert.passed ? "PASS" : "FAIL";
  switch (o.format) {
    case Format::human:
      std::cout << verdict << " " << cert.patterns << " patterns, 2t+e<" << cert.d << ", " << kind_of(s)
                << " noisy=" << s.params.n << " ebits=" << s.params.c << '\n';
      for (const auto& b : cert.buckets) {
        std::cout << "  t=" << b.t << " e=" << b.e << " patterns=" << b.patterns << " failures=" << b.failures << '\n';
      }
      if (cert.counterexample) {
        std::cout << "counterexample error=" << cert.counterexample->error.to_string() << " erased=";
        std::vector<int> er;
        for (int i = 0; i < 64; ++i) {
          if ((cert.counterexample->erased >> i) & 1U) er.push_back(i);
        }
        std::cout << positions_text(er) << '\n';
      }
      break;
    case Format::tsv:
      print_tsv({"verdict", "patterns", "d", "t", "e", "bucket_patterns", "failures"});
      for (const auto& b : cert.buckets) {
        print_tsv({verdict, std::to_string(cert.patterns), std::to_string(cert.d), std::to_string(b.t),
                   std::to_string(b.e), std::to_string(b.patterns), std::to_string(b.failures)});
      }
      break;
    case Format::jsonl: {
      ordered_json j;
      j["record"] = "verify";
      j["verdict"] = verdict;
      j["patterns"] = cert.patterns;
      j["d"] = cert.d;
      ordered_json buckets = ordered_json::array();
      for (const auto& b : cert.buckets) {
        buckets.push_back({{"t", b.t}, {"e", b.e}, {"patterns", b.patterns}, {"failures", b.failures}});
      }
      j["buckets"] = buckets;
      j["counterexample"] = cert.counterexample ? ordered_json(cert.counterexample->error.to_string()) : ordered_json(nullptr);
      std::cout << j.dump() << '\n';
      break;
    }
  }
  return cert.passed ? 0 : 1;
}

int cmd_simulate(const Options& o) {
  const edp::BreedingProtocolSpec s = resolve_spec(o);
  const std::vector<double> rates = parse_rates(o.rates);
  if (o.trials < 1) throw ExitError(1, "--trials must be at least 1");
  const edp::PostselectPolicy policy = edp::PostselectPolicy::parse(o.postselect);
  const edp::ProtocolRunner runner(s);

  if (o.format == Format::tsv) {
    std::vector<std::string> head{"rate", "erasure", "trials", "fidelity", "ci95", "discards", "gross", "net", "seed"};
    if (o.exact) head.push_back("exact");
    print_tsv(head);
  }
  for (double rate : rates) {
    edp::ChannelModel ch{rate, o.erasure, std::nullopt};
    ch.validate();
    const edp::SimulationReport r = edp::simulate(runner, ch, o.trials, o.seed, policy, o.workers);
    std::optional<edp::ExactFidelity> ex;
    if (o.exact) ex = edp::exact_fidelity(runner, ch, policy);
    switch (o.format) {
      case Format::human:
        std::cout << "rate=" << fixed(rate, 6) << " erasure=" << fixed(o.erasure, 6) << " trials=" << r.trials
                  << " fidelity=" << fixed(r.fidelity(), 6) << " ci95=" << fixed(r.ci_halfwidth(), 6)
                  << " discards=" << r.discards << " gross=" << r.gross_k << " net=" << r.net_yield;
        if (ex) std::cout << " exact=" << fixed(ex->fidelity, 6);
        std::cout << '\n';
        break;
      case Format::tsv: {
        std::vector<std::string> row{fixed(rate, 6), fixed(o.erasure, 6), std::to_string(r.trials),
                                     fixed(r.fidelity(), 6), fixed(r.ci_halfwidth(), 6), std::to_string(r.discards),
                                     std::to_string(r.gross_k), std::to_string(r.net_yield), std::to_string(r.seed)};
        if (ex) row.push_back(fixed(ex->fidelity, 6));
        print_tsv(row);
        break;
      }
      case Format::jsonl: {
        ordered_json j;
        j["record"] = "simulate";
        j["rate"] = rate;
        j["erasure"] = o.erasure;
        j["trials"] = r.trials;
        j["successes"] = r.successes;
        j["discards"] = r.discards;
        j["fidelity"] = r.fidelity();
        j["ci95"] = r.ci_halfwidth();
        j["gross"] = r.gross_k;
        j["net"] = r.net_yield;
        j["seed"] = r.seed;
        j["postselect"] = policy.to_string();
        if (ex) {
          j["exact"] = ex->fidelity;
          j["acceptance"] = ex->acceptance;
        }
        std::cout << j.dump() << '\n';
        break;
      }
    }
  }
  return 0;
}

int cmd_search(const Options& o) {
  edp::SearchQuery q;
  q.p = o.p;
  q.n = o.n;
  q.k = o.k;
  q.d_min = o.dmin;
  q.purity_required = o.pure;
  q.budget = o.budget;
  const edp::SearchResult r = edp::search_codes(q);
  const std::string label = r.verdict == edp::SearchResult::Verdict::exists       ? "EXISTS"
                            : r.verdict == edp::SearchResult::Verdict::not_exists ? "NOT EXISTS (exhaustive)"
                                                                                  : "INCONCLUSIVE (budget exhausted)";
  const std::string params = "[[" + std::to_string(q.n) + "," + std::to_string(q.k) + "," + std::to_string(q.d_min) +
                             "]]_" + std::to_string(q.p) + (q.purity_required ? " pure" : "");
  switch (o.format) {
    case Format::human:
      std::cout << label << " " << params << " nodes=" << r.nodes << " leaves=" << r.leaves;
      if (r.verdict == edp::SearchResult::Verdict::not_exists) std::cout << " replay_nodes=" << r.replay_nodes;
      std::cout << '\n';
      for (const auto& g : r.witness) std::cout << "  " << g.to_string() << '\n';
      break;
    case Format::tsv: {
      print_tsv({"verdict", "p", "n", "k", "dmin", "pure", "nodes", "leaves", "replay_nodes", "witness"});
      std::string w;
      for (const auto& g : r.witness) w += (w.empty() ? "" : ";") + g.to_string();
      print_tsv({edp::to_string(r.verdict), std::to_string(q.p), std::to_string(q.n), std::to_string(q.k),
                 std::to_string(q.d_min), q.purity_required ? "1" : "0", std::to_string(r.nodes),
                 std::to_string(r.leaves), std::to_string(r.replay_nodes), w.empty() ? "-" : w});
      break;
    }
    case Format::jsonl: {
      ordered_json j;
      j["record"] = "search";
      j["verdict"] = edp::to_string(r.verdict);
      j["p"] = q.p;
      j["n"] = q.n;
      j["k"] = q.k;
      j["dmin"] = q.d_min;
      j["pure"] = q.purity_required;
      j["nodes"] = r.nodes;
      j["leaves"] = r.leaves;
      j["replay_nodes"] = r.replay_nodes;
      ordered_json w = ordered_json::array();
      for (const auto& g : r.witness) w.push_back(g.to_string());
      j["witness"] = w;
      std::cout << j.dump() << '\n';
      break;
    }
  }
  return 0;
}

int cmd_compare(const Options& o) {
  const std::vector<edp::CatalogEntry> catalog =
      o.catalog.empty() ? edp::builtin_catalog() : edp::load_catalog_file(o.catalog);
  edp::CompareOptions opts;
  opts.search_budget = o.budget;
  if (o.compare_n >= 0) opts.noisy_pairs = o.compare_n;
  if ((o.t >= 0) != (o.e >= 0)) throw ExitError(2, "--t and --e must be given together");
  if (o.t >= 0) opts.correction = std::make_pair(o.t, o.e);
  const auto rows = edp::compare_report(catalog, opts);

  if (o.format == Format::tsv) {
    print_tsv({"kind", "code", "code_params", "noisy", "ebits", "gross", "net", "d", "punctured", "hashing_search", "dominant"});
  } else if (o.format == Format::human) {
    std::cout << "kind      code              params       noisy ebits gross  net   d  punctured  hashing-search  dominant\n";
  }
  for (const auto& r : rows) {
    const std::string params = "[[" + std::to_string(r.code_n) + "," + std::to_string(r.code_k) + "," +
                               std::to_string(r.code_d) + "]]";
    switch (o.format) {
      case Format::human: {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-9s %-17s %-12s %5d %5d %5d %4d %3d  %-9s  %-14s  %s\n",
                      edp::to_string(r.kind).c_str(), r.code_name.c_str(), params.c_str(), r.noisy, r.c,
                      r.gross, r.net, r.d, positions_text(r.punctured).c_str(), r.hashing_search.c_str(),
                      r.dominant ? "YES" : "-");
        std::cout << buf;
        break;
      }
      case Format::tsv:
        print_tsv({edp::to_string(r.kind), r.code_name, params, std::to_string(r.noisy), std::to_string(r.c),
                   std::to_string(r.gross), std::to_string(r.net), std::to_string(r.d), positions_text(r.punctured),
                   r.hashing_search, r.dominant ? "1" : "0"});
        break;
      case Format::jsonl: {
        ordered_json j;
        j["record"] = "compare";
        j["kind"] = edp::to_string(r.kind);
        j["code"] = r.code_name;
        j["code_params"] = params;
        j["noisy"] = r.noisy;
        j["ebits"] = r.c;
        j["gross"] = r.gross;
        j["net"] = r.net;
        j["d"] = r.d;
        j["punctured"] = positions_json(r.punctured);
        j["hashing_search"] = r.hashing_search;
        j["dominant"] = r.dominant;
        std::cout << j.dump() << '\n';
        break;
      }
    }
  }
  return 0;
}

int cmd_catalog() {
  std::cout << edp::builtin_catalog_text();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Breeding and hashing entanglement distillation from stabilizer codes"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  std::string format = "human";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"human", "tsv", "jsonl"}))
      ->capture_default_str();

  auto add_code = [&](CLI::App* sub) {
    sub->add_option("--code", o.code, "Catalog file or built-in code name (e.g. six_qubit_x6z6, 6,4,2)");
    sub->add_option("--name", o.name, "Entry name when --code is a file with several entries");
  };
  auto add_protocol = [&](CLI::App* sub) {
    add_code(sub);
    sub->add_option("--puncture", o.puncture, "1-based positions carrying preshared pairs, comma separated");
    sub->add_option("--last", o.last, "Puncture the last C positions")->check(CLI::NonNegativeNumber);
    sub->add_option("--rows", o.rows, "Arbitrary subspace D as ';'-separated a|b rows (extended automatically)");
    sub->add_option("--p", o.p, "Field size for --rows")->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "Recompute n, k, d and purity of a code");
  add_code(analyze);
  auto* convert = app.add_subcommand("convert", "Build a hashing or breeding protocol");
  add_protocol(convert);
  auto* verify = app.add_subcommand("verify", "Exhaustively check the 2t+e<d correction guarantee");
  add_protocol(verify);
  verify->add_option("--max-erasures", o.max_erasures, "Only check patterns with at most E erasures");
  verify->add_option("--cap", o.cap, "Refuse above this many patterns")->capture_default_str();
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo fidelity over a depolarizing/erasure channel");
  add_protocol(simulate);
  simulate->add_option("--rates", o.rates, "Comma-separated depolarizing rates")->capture_default_str();
  simulate->add_option("--erasure", o.erasure, "Erasure rate per noisy pair")->capture_default_str();
  simulate->add_option("--trials", o.trials, "Trials per rate")->capture_default_str();
  simulate->add_option("--seed", o.seed, "Seed")->capture_default_str();
  simulate->add_option("--postselect", o.postselect, "none | nonzero | weight:<t>")->capture_default_str();
  simulate->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_flag("--exact", o.exact, "Also print the exact fidelity");
  auto* search = app.add_subcommand("search", "Exhaustive existence search for [[n,k,>=d]]_p");
  search->add_option("--p", o.p, "Field size")->capture_default_str();
  search->add_option("--n", o.n, "Positions")->required();
  search->add_option("--k", o.k, "Logical qudits")->required();
  search->add_option("--dmin", o.dmin, "Minimum distance")->capture_default_str();
  search->add_flag("--pure", o.pure, "Require a pure code");
  search->add_option("--budget", o.budget, "Node cap")->capture_default_str();
  auto* compare = app.add_subcommand("compare", "Breeding versus hashing rows for a catalog");
  compare->add_option("--catalog", o.catalog, "Catalog file (built-in catalog by default)");
  compare->add_option("--n", o.compare_n, "Only rows with this many noisy pairs");
  compare->add_option("--t", o.t, "Required correctable errors");
  compare->add_option("--e", o.e, "Required correctable erasures");
  compare->add_option("--budget", o.budget, "Node cap for each hashing search")->capture_default_str();
  auto* catalog = app.add_subcommand("catalog", "Print the built-in catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  o.format = format == "tsv" ? Format::tsv : format == "jsonl" ? Format::jsonl : Format::human;

  try {
    if (*analyze) return cmd_analyze(o);
    if (*convert) return cmd_convert(o);
    if (*verify) return cmd_verify(o);
    if (*simulate) return cmd_simulate(o);
    if (*search) return cmd_search(o);
    if (*compare) return cmd_compare(o);
    if (*catalog) return cmd_catalog();
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code;
  } catch (const edp::InfeasibleError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 3;
  } catch (const std::length_error& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
