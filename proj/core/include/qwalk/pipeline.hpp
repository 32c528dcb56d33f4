#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qwalk/exact_enum.hpp"
#include "qwalk/grammar.hpp"
#include "qwalk/projection.hpp"
#include "qwalk/slope.hpp"
#include "qwalk/word_counts.hpp"

namespace qwalk {

struct SamplerConfig {
  DeltaPolicy delta_policy{};  // exact by default
  std::optional<RationalSlope> slope_override;
  Endpoint endpoint = Endpoint::any;
  long long trial_cap = 10'000'000;
  ExponentVariant exponent_variant = kDefaultExponentVariant;
  // Trials are searched in batches of this width; each trial has its own
  // derived random stream and acceptance takes the smallest accepting trial
  // index, so the walk returned is the same for every width and thread
  // interleaving.
  int parallel = 1;
  CountMode count_mode = CountMode::automatic;
};

struct TrialStats {
  long long trials = 0;  // proposals consumed (accepted trial index + 1)
  double elapsed_seconds = 0.0;
  std::optional<double> predicted_trial_exponent;  // r - 3/2 when defined
};

// Everything derived from (step set, length, config) that sampling reuses:
// the tilted half-plane direction, the projected model, its grammar, and the
// exact word counts. Building a plan is the expensive part; drawing walks
// from it is comparatively cheap.
class SamplerPlan {
 public:
  static SamplerPlan make(const StepSet& s, long long n, const SamplerConfig& cfg);

  const StepSet& steps() const { return steps_; }
  long long n() const { return n_; }
  const SamplerConfig& config() const { return cfg_; }
  const SlopeInfo& slope_info() const { return info_; }
  const RationalSlope& slope() const { return slope_; }
  const OneDModel& model() const { return model_; }
  const Grammar& grammar() const { return counts_.grammar(); }
  const WordCounts& counts() const { return counts_; }

  // Number of half-plane proposal words of length n (the rejection
  // denominator: acceptance probability is q_n divided by this). Proposals
  // come from P, or from the weight-0 class D when the endpoint is origin.
  const BigInt& proposal_count() const;

  std::optional<double> predicted_trial_exponent() const { return predicted_exp_; }

  // One accepted quadrant walk. Trial t draws from the stream
  // derive_stream(seed, sample_index, t); a proposal is abandoned at the
  // first prefix that already leaves the quadrant (or provably cannot meet
  // the endpoint constraint any more), which cannot bias the accepted law.
  // Throws errc::no_sample when no proposal of this length exists and
  // errc::trial_cap when the cap is exhausted.
  Walk sample_one(std::uint64_t seed, long long sample_index,
                  TrialStats* stats = nullptr) const;

  // k independent walks, sample_index = 0..k-1.
  std::vector<Walk> sample_many(std::uint64_t seed, long long k,
                                TrialStats* stats = nullptr) const;

 private:
  explicit SamplerPlan(StepSet s) : steps_(std::move(s)) {}

  // Nonterminal proposals are drawn from (depends on the endpoint mode).
  int proposal_nt() const;

  // Runs one proposal; returns true on acceptance with the step indices in
  // out (indices into steps()).
  bool run_trial(Rng& rng, std::vector<int>& out) const;

  StepSet steps_;
  long long n_ = 0;
  SamplerConfig cfg_;
  SlopeInfo info_;
  RationalSlope slope_;
  OneDModel model_;
  WordCounts counts_;
  std::optional<double> predicted_exp_;
  // Per-coordinate extreme decrements, for endpoint feasibility pruning.
  long long max_dx_down_ = 0, max_dy_down_ = 0;
  long long diag_up_ = 0, diag_down_ = 0;  // extremes of (dx - dy)
};

// Whether the table-based exact sampler is the better default for this size:
// true iff n is small enough and the projected table fits the budget. Used by
// the command-line front end to resolve method "auto".
bool recursive_feasible(const StepSet& s, long long n, std::size_t memory_budget);

}  // namespace qwalk
