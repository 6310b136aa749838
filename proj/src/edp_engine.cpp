#include "edp/edp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace edp {

namespace {

constexpr double kMaxExactTerms = 16777216.0;  // 2^24

void for_each_subset(const std::vector<int>& items, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> chosen;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (static_cast<int>(chosen.size()) == k) {
      fn(chosen);
      return;
    }
    const size_t need = static_cast<size_t>(k) - chosen.size();
    for (size_t i = start; i + need <= items.size(); ++i) {
      chosen.push_back(items[i]);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::pair<int, int>> admissible_te(int d, const GuaranteeOptions& opts) {
  std::vector<std::pair<int, int>> out;
  for (int t = 0; 2 * t < d; ++t) {
    for (int e = 0; 2 * t + e < d; ++e) {
      if (opts.max_erasures && e > *opts.max_erasures) continue;
      out.emplace_back(t, e);
    }
  }
  return out;
}

}  // namespace

PostselectPolicy PostselectPolicy::parse(const std::string& text) {
  if (text == "none") return {};
  if (text == "nonzero") return {Kind::nonzero_syndrome, 0};
  if (text.rfind("weight:", 0) == 0) {
    const std::string num = text.substr(7);
    if (num.empty() || !std::all_of(num.begin(), num.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw std::invalid_argument("bad post-selection threshold in '" + text + "'");
    }
    return {Kind::decoded_weight, std::stoi(num)};
  }
  throw std::invalid_argument("unknown post-selection policy '" + text + "' (none|nonzero|weight:<t>)");
}

std::string PostselectPolicy::to_string() const {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::nonzero_syndrome: return "nonzero";
    case Kind::decoded_weight: return "weight:" + std::to_string(threshold);
  }
  return "none";
}

void ChannelModel::validate() const {
  auto check = [](double r, const char* what) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument(std::string(what) + " rate must lie in [0, 1]");
  };
  check(depolarizing, "depolarizing");
  check(erasure, "erasure");
}

ProtocolRunner::ProtocolRunner(BreedingProtocolSpec spec)
    : spec_(std::move(spec)),
      decoder_(std::make_shared<SyndromeDecoder>(spec_.extended_code, spec_.ebit_mask())) {}

ProtocolOutcome ProtocolRunner::run(const ErrorPattern& err, const PostselectPolicy& policy) const {
  const StabilizerCode& code = spec_.extended_code;
  if (err.error.num_positions() != code.n()) {
    throw std::invalid_argument("error pattern has " + std::to_string(err.error.num_positions()) +
                                " positions, protocol has " + std::to_string(code.n()));
  }
  for (int pos : spec_.ebit_positions) {
    if (err.error.x(pos) != 0 || err.error.z(pos) != 0) {
      throw std::invalid_argument("preshared pair at position " + std::to_string(pos + 1) + " carries an error");
    }
  }
  if ((err.erased & ~spec_.noisy_mask()) != 0) {
    throw std::invalid_argument("erasures must lie on noisy positions");
  }

  Syndrome s = syndrome(code, err.error);
  SympVector decoded = decoder_->decode(s, err.erased);
  LogicalClass logical = logical_class(code, err.error - decoded);
  const bool success = logical.is_identity();
  bool discarded = false;
  switch (policy.kind) {
    case PostselectPolicy::Kind::none: break;
    case PostselectPolicy::Kind::nonzero_syndrome: discarded = !s.values.isZero(); break;
    case PostselectPolicy::Kind::decoded_weight: discarded = symp_weight(decoded) > policy.threshold; break;
  }
  return {std::move(s), std::move(decoded), std::move(logical), success, discarded};
}

ProtocolOutcome run_protocol(const BreedingProtocolSpec& spec, const ErrorPattern& err,
                             const PostselectPolicy& policy) {
  return ProtocolRunner(spec).run(err, policy);
}

std::uint64_t guarantee_pattern_count(const BreedingProtocolSpec& spec, const GuaranteeOptions& opts) {
  if (!spec.params.d) return 0;
  const int n = static_cast<int>(spec.noisy_positions.size());
  const auto nontrivial = static_cast<std::uint64_t>(spec.params.p * spec.params.p - 1);
  std::uint64_t total = 0;
  for (auto [t, e] : admissible_te(*spec.params.d, opts)) {
    std::uint64_t count = binomial(n, e) * binomial(n - e, t);
    for (int i = 0; i < t + e; ++i) count *= nontrivial;
    total += count;
  }
  return total;
}

GuaranteeCertificate verify_guarantee(const BreedingProtocolSpec& spec, const GuaranteeOptions& opts) {
  if (!spec.params.d) throw InfeasibleError("protocol distance is undefined; nothing to verify");
  const std::uint64_t projected = guarantee_pattern_count(spec, opts);
  if (projected > opts.pattern_cap) {
    throw InfeasibleError("guarantee check needs " + std::to_string(projected) + " patterns, cap is " +
                          std::to_string(opts.pattern_cap));
  }

  const ProtocolRunner runner(spec);
  const PrimeField f = spec.extended_code.field();
  const int p = f.modulus();
  const int big_n = spec.extended_code.n();

  GuaranteeCertificate cert;
  cert.d = *spec.params.d;
  for (auto [t, e] : admissible_te(cert.d, opts)) {
    GuaranteeBucket bucket{t, e, 0, 0};
    for_each_subset(spec.noisy_positions, e, [&](const std::vector<int>& erased) {
      std::vector<int> rest;
      for (int pos : spec.noisy_positions) {
        if (!std::binary_search(erased.begin(), erased.end(), pos)) rest.push_back(pos);
      }
      const PositionMask erased_mask = mask_of(erased);
      for_each_subset(rest, t, [&](const std::vector<int>& support) {
        std::vector<int> all = erased;
        all.insert(all.end(), support.begin(), support.end());
        std::vector<int> digit(all.size(), 1);
        for (;;) {
          FpVector coords = FpVector::Zero(2 * big_n);
          for (size_t i = 0; i < all.size(); ++i) {
            coords(all[i]) = digit[i] / p;
            coords(big_n + all[i]) = digit[i] % p;
          }
          ErrorPattern pattern{SympVector(f, coords), erased_mask};
          ++bucket.patterns;
          if (!runner.run(pattern).success) {
            ++bucket.failures;
            if (!cert.counterexample) cert.counterexample = pattern;
          }
          size_t j = 0;
          for (; j < digit.size(); ++j) {
            if (++digit[j] < p * p) break;
            digit[j] = 1;
          }
          if (j == digit.size()) break;
        }
      });
    });
    cert.patterns += bucket.patterns;
    cert.passed = cert.passed && bucket.failures == 0;
    cert.buckets.push_back(bucket);
  }
  return cert;
}

double SimulationReport::fidelity() const {
  return accepted() == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(accepted());
}

double SimulationReport::ci_halfwidth() const {
  if (accepted() == 0) return 0.0;
  const double f = fidelity();
  return 1.96 * std::sqrt(f * (1.0 - f) / static_cast<double>(accepted()));
}

double SimulationReport::sigma(double truth) const {
  if (accepted() == 0) return 0.0;
  return std::sqrt(truth * (1.0 - truth) / static_cast<double>(accepted()));
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix(s);
  state_ = a ^ (trial * 0xD1B54A32D192ED03ULL);
  splitmix(state_);
}

std::uint64_t TrialRng::next() { return splitmix(state_); }

double TrialRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t TrialRng::below(std::uint64_t bound) {
  return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
}

ErrorPattern sample_pattern(const BreedingProtocolSpec& spec, const ChannelModel& ch, TrialRng& rng) {
  const PrimeField f = spec.extended_code.field();
  if (ch.fixed) return *ch.fixed;
  const int p = f.modulus();
  const int big_n = spec.extended_code.n();
  const auto pairs = static_cast<std::uint64_t>(p * p);
  FpVector coords = FpVector::Zero(2 * big_n);
  PositionMask erased = 0;
  for (int pos : spec.noisy_positions) {
    std::uint64_t idx = 0;
    if (ch.erasure > 0.0 && rng.uniform() < ch.erasure) {
      erased |= PositionMask{1} << pos;
      idx = rng.below(pairs);
    } else if (ch.depolarizing > 0.0 && rng.uniform() < ch.depolarizing) {
      idx = 1 + rng.below(pairs - 1);
    }
    coords(pos) = static_cast<Scalar>(idx / static_cast<std::uint64_t>(p));
    coords(big_n + pos) = static_cast<Scalar>(idx % static_cast<std::uint64_t>(p));
  }
  return {SympVector(f, std::move(coords)), erased};
}

SimulationReport simulate(const ProtocolRunner& runner, const ChannelModel& ch, std::uint64_t trials,
                          std::uint64_t seed, const PostselectPolicy& policy, int workers) {
  ch.validate();
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  const BreedingProtocolSpec& spec = runner.spec();

  struct Counts {
    std::uint64_t successes = 0;
    std::uint64_t discards = 0;
  };
  auto run_range = [&](std::uint64_t begin, std::uint64_t end, Counts& out) {
    for (std::uint64_t i = begin; i < end; ++i) {
      TrialRng rng(seed, i);
      const ProtocolOutcome o = runner.run(sample_pattern(spec, ch, rng), policy);
      if (o.discarded) ++out.discards;
      else if (o.success) ++out.successes;
    }
  };

  const auto w = static_cast<std::uint64_t>(std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), trials));
  std::vector<Counts> partial(w);
  if (w == 1) {
    run_range(0, trials, partial[0]);
  } else {
    // Build the shared decoder tables up front, then fan out.
    runner.run(ErrorPattern{SympVector::zero(spec.extended_code.field(), spec.extended_code.n()), 0}, policy);
    std::vector<std::thread> threads;
    for (std::uint64_t k = 0; k < w; ++k) {
      threads.emplace_back(run_range, trials * k / w, trials * (k + 1) / w, std::ref(partial[k]));
    }
    for (auto& t : threads) t.join();
  }

  SimulationReport r;
  r.trials = trials;
  for (const Counts& c : partial) {
    r.successes += c.successes;
    r.discards += c.discards;
  }
  r.gross_k = spec.params.gross_k;
  r.net_yield = spec.params.net_yield();
  r.seed = seed;
  r.channel = ch;
  return r;
}

SimulationReport simulate(const BreedingProtocolSpec& spec, const ChannelModel& ch, std::uint64_t trials,
                          std::uint64_t seed, const PostselectPolicy& policy, int workers) {
  return simulate(ProtocolRunner(spec), ch, trials, seed, policy, workers);
}

ExactFidelity exact_fidelity(const ProtocolRunner& runner, const ChannelModel& ch, const PostselectPolicy& policy) {
  ch.validate();
  const BreedingProtocolSpec& spec = runner.spec();
  if (ch.fixed) {
    const ProtocolOutcome o = runner.run(*ch.fixed, policy);
    return {o.discarded ? 0.0 : (o.success ? 1.0 : 0.0), o.discarded ? 0.0 : 1.0};
  }

  const PrimeField f = spec.extended_code.field();
  const int p = f.modulus();
  const int pairs = p * p;
  const int big_n = spec.extended_code.n();
  const auto& noisy = spec.noisy_positions;
  const int n = static_cast<int>(noisy.size());
  const bool with_erasure = ch.erasure > 0.0;

  double terms = std::pow(static_cast<double>(pairs), n) * (with_erasure ? std::pow(2.0, n) : 1.0);
  if (terms > kMaxExactTerms) {
    throw InfeasibleError("exact fidelity needs " + std::to_string(static_cast<long long>(terms)) +
                          " terms, limit is 2^24");
  }

  const double keep = 1.0 - ch.erasure;
  const double p_identity = keep * (1.0 - ch.depolarizing);
  const double p_nontrivial = keep * ch.depolarizing / (pairs - 1);
  const double p_erased_each = ch.erasure / pairs;

  double accepted = 0.0;
  double good = 0.0;
  const std::uint64_t masks = with_erasure ? (std::uint64_t{1} << n) : 1;
  for (std::uint64_t m = 0; m < masks; ++m) {
    PositionMask erased = 0;
    for (int i = 0; i < n; ++i) {
      if ((m >> i) & 1U) erased |= PositionMask{1} << noisy[static_cast<size_t>(i)];
    }
    std::vector<int> digit(static_cast<size_t>(n), 0);
    for (;;) {
      double prob = 1.0;
      FpVector coords = FpVector::Zero(2 * big_n);
      for (int i = 0; i < n; ++i) {
        const int pos = noisy[static_cast<size_t>(i)];
        const int idx = digit[static_cast<size_t>(i)];
        coords(pos) = idx / p;
        coords(big_n + pos) = idx % p;
        if ((m >> i) & 1U) prob *= p_erased_each;
        else prob *= (idx == 0) ? p_identity : p_nontrivial;
      }
      if (prob > 0.0) {
        const ProtocolOutcome o = runner.run(ErrorPattern{SympVector(f, std::move(coords)), erased}, policy);
        if (!o.discarded) {
          accepted += prob;
          if (o.success) good += prob;
        }
      }
      int j = 0;
      for (; j < n; ++j) {
        if (++digit[static_cast<size_t>(j)] < pairs) break;
        digit[static_cast<size_t>(j)] = 0;
      }
      if (j == n) break;
    }
  }
  return {accepted > 0.0 ? good / accepted : 0.0, accepted};
}

ExactFidelity exact_fidelity(const BreedingProtocolSpec& spec, const ChannelModel& ch, const PostselectPolicy& policy) {
  return exact_fidelity(ProtocolRunner(spec), ch, policy);
}

}  // namespace edp
