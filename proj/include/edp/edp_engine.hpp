#pragma once

// Distillation protocols in the Pauli-frame model. Alice's and Bob's syndromes
// only matter through their sum, which equals the ordinary syndrome of the
// relative error, so that sum is what the engine computes and decodes.

#include "edp/eaqecc.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace edp {

/// Refusal to enumerate or search beyond a configured bound.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Step 7 rule for discarding a low-fidelity result.
struct PostselectPolicy {
  enum class Kind { none, nonzero_syndrome, decoded_weight };
  Kind kind = Kind::none;
  int threshold = 0;  // decoded_weight: discard when weight > threshold

  /// "none", "nonzero", or "weight:<t>".
  static PostselectPolicy parse(const std::string& text);
  std::string to_string() const;
};

struct ChannelModel {
  double depolarizing = 0.0;  // per noisy pair; p^2-1 nontrivial errors equally likely
  double erasure = 0.0;       // sampled first; erased pairs get a uniform error, identity included
  std::optional<ErrorPattern> fixed;

  static ChannelModel depolarizing_channel(double rate) { return {rate, 0.0, std::nullopt}; }
  void validate() const;
};

struct ProtocolOutcome {
  Syndrome combined_syndrome;
  SympVector decoded;
  LogicalClass logical;
  bool success = false;
  bool discarded = false;
};

/// Holds a spec together with its decoder; safe to share across threads.
class ProtocolRunner {
 public:
  explicit ProtocolRunner(BreedingProtocolSpec spec);

  const BreedingProtocolSpec& spec() const { return spec_; }
  const SyndromeDecoder& decoder() const { return *decoder_; }

  ProtocolOutcome run(const ErrorPattern& err, const PostselectPolicy& policy = {}) const;

 private:
  BreedingProtocolSpec spec_;
  std::shared_ptr<const SyndromeDecoder> decoder_;
};

ProtocolOutcome run_protocol(const BreedingProtocolSpec& spec, const ErrorPattern& err,
                             const PostselectPolicy& policy = {});

struct GuaranteeOptions {
  std::optional<int> max_erasures;      // restrict e (all e by default)
  std::uint64_t pattern_cap = 50'000'000;
};

struct GuaranteeBucket {
  int t = 0;
  int e = 0;
  std::uint64_t patterns = 0;
  std::uint64_t failures = 0;
};

struct GuaranteeCertificate {
  int d = 0;
  bool passed = true;
  std::uint64_t patterns = 0;
  std::vector<GuaranteeBucket> buckets;  // ordered by (t, e)
  std::optional<ErrorPattern> counterexample;
};

/// Projected number of patterns verify_guarantee would run.
std::uint64_t guarantee_pattern_count(const BreedingProtocolSpec& spec, const GuaranteeOptions& opts = {});

/// Runs every error/erasure pattern on the noisy positions with 2t + e < d:
/// e erased positions with nonzero errors and t further nonzero positions.
GuaranteeCertificate verify_guarantee(const BreedingProtocolSpec& spec, const GuaranteeOptions& opts = {});

struct SimulationReport {
  std::uint64_t trials = 0;
  std::uint64_t discards = 0;
  std::uint64_t successes = 0;
  int gross_k = 0;
  int net_yield = 0;
  std::uint64_t seed = 0;
  ChannelModel channel;

  std::uint64_t accepted() const { return trials - discards; }
  double fidelity() const;
  /// 95% normal-approximation half-width.
  double ci_halfwidth() const;
  /// Binomial standard deviation of the estimate for a true value `truth`.
  double sigma(double truth) const;

  friend bool operator==(const SimulationReport& x, const SimulationReport& y) {
    return x.trials == y.trials && x.discards == y.discards && x.successes == y.successes &&
           x.gross_k == y.gross_k && x.net_yield == y.net_yield && x.seed == y.seed;
  }
};

/// Counter-based stream: trial i of seed s always sees the same numbers.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial);
  std::uint64_t next();
  double uniform();                       // [0, 1)
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

/// Samples one error pattern on the noisy positions (ebit positions clean).
ErrorPattern sample_pattern(const BreedingProtocolSpec& spec, const ChannelModel& ch, TrialRng& rng);

SimulationReport simulate(const BreedingProtocolSpec& spec, const ChannelModel& ch, std::uint64_t trials,
                          std::uint64_t seed, const PostselectPolicy& policy = {}, int workers = 1);
SimulationReport simulate(const ProtocolRunner& runner, const ChannelModel& ch, std::uint64_t trials,
                          std::uint64_t seed, const PostselectPolicy& policy = {}, int workers = 1);

struct ExactFidelity {
  double fidelity = 0.0;    // conditioned on acceptance
  double acceptance = 1.0;  // probability the result is kept
};

ExactFidelity exact_fidelity(const BreedingProtocolSpec& spec, const ChannelModel& ch,
                             const PostselectPolicy& policy = {});
ExactFidelity exact_fidelity(const ProtocolRunner& runner, const ChannelModel& ch,
                             const PostselectPolicy& policy = {});

}  // namespace edp
