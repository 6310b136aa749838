// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include "edp/catalog.hpp"
#include "edp/edp_engine.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace edp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      ok = false;
      detail << what;
    }
  }
};

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun cli(const std::string& args) {
  const std::string cmd = std::string(EDP_CLI_PATH) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

const StabilizerCode& catalog_code(const char* name) { return find_entry(builtin_catalog(), name)->code; }

SympVector random_vector(std::mt19937_64& rng, const PrimeField& f, int n) {
  std::uniform_int_distribution<int> dist(0, f.modulus() - 1);
  FpVector v(2 * n);
  for (int i = 0; i < 2 * n; ++i) v(i) = dist(rng);
  return {f, v};
}

SympSubspace random_subspace(std::mt19937_64& rng, const PrimeField& f, int n, int rows) {
  std::vector<SympVector> gens;
  for (int i = 0; i < rows; ++i) gens.push_back(random_vector(rng, f, n));
  return SympSubspace::span(f, n, gens);
}

// 1. [[6,4,2]] punctured at its last position: 5 noisy + 1 preshared, net 3, 16 patterns.
void worked_breeding_example(Check& c) {
  const auto t0 = Clock::now();
  const BreedingProtocolSpec spec = convert_pure(catalog_code("six_qubit_x6z6"), {5});
  const GuaranteeCertificate cert = verify_guarantee(spec);
  const double secs = seconds_since(t0);
  c.require(spec.params.n == 5 && spec.params.c == 1, "expected 5 noisy + 1 preshared");
  c.require(spec.params.gross_k == 4 && spec.params.net_yield() == 3, "expected gross 4, net 3");
  c.require(spec.params.d == 2, "expected d = 2");
  c.require(cert.passed, "guarantee failed");
  c.require(cert.patterns == 16, "expected 16 patterns, got " + std::to_string(cert.patterns));
  c.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  c.detail << (c.ok ? "" : " | ") << "noisy=" << spec.params.n << " ebits=" << spec.params.c
           << " gross=" << spec.params.gross_k << " net=" << spec.params.net_yield() << " patterns=" << cert.patterns
           << " time=" << secs << "s";
}

// 2. No [[5,3,2]] binary stabilizer code, by exhaustive search through the CLI.
void nonexistence_532(Check& c) {
  const auto t0 = Clock::now();
  const CliRun r = cli("search --p 2 --n 5 --k 3 --dmin 2");
  const double secs = seconds_since(t0);
  c.require(r.status == 0, "exit status " + std::to_string(r.status));
  c.require(r.out.rfind("NOT EXISTS (exhaustive)", 0) == 0, "unexpected output: " + r.out);
  c.require(secs < 60.0, "took " + std::to_string(secs) + " s");

  SearchQuery q;
  q.p = 2;
  q.n = 5;
  q.k = 3;
  q.d_min = 2;
  const SearchResult res = search_codes(q);
  c.require(res.verdict == SearchResult::Verdict::not_exists, "library verdict " + to_string(res.verdict));
  c.require(res.replay_nodes > 0, "no replay certificate");
  c.detail << (c.ok ? "" : " | ") << "nodes=" << res.nodes << " replay_nodes=" << res.replay_nodes
           << " time=" << secs << "s";
}

// 3. Hashing with the five-qubit code corrects every single-position error.
void hashing_baseline(Check& c) {
  const auto t0 = Clock::now();
  const BreedingProtocolSpec spec = hashing_spec(catalog_code("five_qubit"));
  GuaranteeOptions opts;
  opts.max_erasures = 0;
  const GuaranteeCertificate cert = verify_guarantee(spec, opts);
  const double secs = seconds_since(t0);
  std::uint64_t singles = 0, single_failures = 0;
  for (const GuaranteeBucket& b : cert.buckets) {
    if (b.t == 1 && b.e == 0) {
      singles = b.patterns;
      single_failures = b.failures;
    }
  }
  c.require(spec.params.c == 0 && spec.params.d == 3, "expected c = 0, d = 3");
  c.require(singles == 15, "expected 15 single-position errors, got " + std::to_string(singles));
  c.require(single_failures == 0 && cert.passed, "uncorrected single errors");
  c.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  c.detail << (c.ok ? "" : " | ") << "single errors=" << singles << " failures=" << single_failures
           << " time=" << secs << "s";
}

// 4. Star map: involution, weight, product negation, closure of self-orthogonality.
void star_properties(Check& c) {
  constexpr int kChecks = 10000;
  std::uint64_t failures = 0, total = 0;
  for (int p : {2, 3, 5}) {
    const PrimeField f(p);
    std::mt19937_64 rng(static_cast<std::uint64_t>(p) * 7919);
    for (int i = 0; i < kChecks; ++i) {
      const int n = 1 + i % 6;
      const SympVector u = random_vector(rng, f, n), v = random_vector(rng, f, n);
      bool ok = star(star(u)) == u;
      ok = ok && symp_weight(star(u)) == symp_weight(u);
      ok = ok && symp_product(star(u), star(v)) == f.neg(symp_product(u, v));
      // Self-orthogonal input from extending a random subspace.
      const SympSubspace so = symp_extend(random_subspace(rng, f, 1 + i % 4, 1 + i % 3)).extended;
      const SympSubspace so_star = star(so);
      ok = ok && is_self_orthogonal(so) && is_self_orthogonal(so_star) && symp_dual(so_star).contains(so_star);
      ++total;
      if (!ok) ++failures;
    }
  }
  c.require(failures == 0, std::to_string(failures) + " failures");
  c.detail << (c.ok ? "" : " | ") << "checks=" << total << " (" << kChecks << " per p in {2,3,5}) failures=" << failures;
}

// 5. ebit count equals the extension's added positions; extension punctures back.
void ebit_consistency(Check& c) {
  std::uint64_t failures = 0, total = 0;
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const PrimeField f(i % 2 == 0 ? 2 : 3);
    const int n = 1 + (i / 2) % 5;
    const SympSubspace d = random_subspace(rng, f, n, static_cast<int>(rng() % static_cast<unsigned>(2 * n + 1)));
    const SymplecticExtension ext = symp_extend(d);
    std::vector<int> added;
    for (int j = 0; j < ext.added; ++j) added.push_back(n + j);
    const bool ok = ebit_count(d) == ext.added && is_self_orthogonal(ext.extended) &&
                    puncture(ext.extended, added) == d;
    ++total;
    if (!ok) ++failures;
  }
  c.require(failures == 0, std::to_string(failures) + " failures");
  c.detail << (c.ok ? "" : " | ") << "subspaces=" << total << " failures=" << failures;
}

// 6. Monte Carlo against the exact 4^5-term sum.
void simulator_agreement(Check& c) {
  const auto t0 = Clock::now();
  const ProtocolRunner runner(convert_pure(catalog_code("six_qubit_x6z6"), {5}));
  const SimulationReport zero = simulate(runner, ChannelModel::depolarizing_channel(0.0), 100000, 0, {}, 4);
  c.require(zero.fidelity() == 1.0, "rate 0 fidelity " + std::to_string(zero.fidelity()));
  std::ostringstream rows;
  for (double rate : {0.01, 0.05, 0.1, 0.3}) {
    const ChannelModel ch = ChannelModel::depolarizing_channel(rate);
    const double exact = exact_fidelity(runner, ch).fidelity;
    const SimulationReport r = simulate(runner, ch, 100000, 0, {}, 4);
    const double z = std::abs(r.fidelity() - exact) / r.sigma(exact);
    c.require(z <= 3.0, "rate " + std::to_string(rate) + " off by " + std::to_string(z) + " sigma");
    rows << " r=" << rate << ":" << r.fidelity() << "/" << exact << "(" << std::round(z * 100) / 100 << "σ)";
  }
  const double secs = seconds_since(t0);
  c.require(secs < 30.0, "took " + std::to_string(secs) + " s");
  c.detail << (c.ok ? "" : " | ") << "rate 0 fidelity=" << zero.fidelity() << "; sim/exact" << rows.str() << " time=" << secs << "s";
}

// 7. Every CLI command is byte-identical across repeats and worker counts.
void cli_determinism(Check& c) {
  const std::vector<std::string> commands = {
      "analyze --code six_qubit_x6z6",
      "convert --code six_qubit_x6z6 --puncture 6",
      "verify --code six_qubit_x6z6 --puncture 6",
      "verify --code five_qubit",
      "search --p 2 --n 5 --k 3 --dmin 2",
      "search --p 2 --n 6 --k 4 --dmin 2",
      "compare",
      "catalog",
  };
  const std::string sim = "simulate --code six_qubit_x6z6 --puncture 6 --rates 0.01,0.1 --erasure 0.05 "
                          "--trials 20000 --seed 0 --postselect weight:1";
  int runs = 0;
  for (const char* format : {"human", "tsv", "jsonl"}) {
    const std::string pre = std::string("--format ") + format + " ";
    for (const std::string& cmd : commands) {
      const CliRun a = cli(pre + cmd), b = cli(pre + cmd);
      runs += 2;
      c.require(a.status == 0, "'" + cmd + "' exited " + std::to_string(a.status));
      c.require(a.out == b.out, "'" + pre + cmd + "' differs between runs");
    }
    const CliRun base = cli(pre + sim + " --workers 1");
    c.require(base.status == 0, "simulate exited " + std::to_string(base.status));
    ++runs;
    for (int w : {1, 2, 4, 8}) {
      c.require(cli(pre + sim + " --workers " + std::to_string(w)).out == base.out,
                std::string(format) + " simulate differs at --workers " + std::to_string(w));
      ++runs;
    }
  }
  c.detail << (c.ok ? "" : " | ") << "cli runs=" << runs;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"1 breeding [[6,4,2]] -> 5 noisy, net 3, 16 patterns", worked_breeding_example},
      {"2 no [[5,3,2]]_2 code (exhaustive)", nonexistence_532},
      {"3 [[5,1,3]] hashing corrects 15 single errors", hashing_baseline},
      {"4 star-map properties", star_properties},
      {"5 ebit count = extension size", ebit_consistency},
      {"6 simulate within 3 sigma of exact", simulator_agreement},
      {"7 CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << "exception: " << e.what();
    }
    std::cout << (c.ok ? "PASS" : "FAIL") << "  " << name << "  [" << c.detail.str() << "]" << std::endl;
    failed += !c.ok;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
