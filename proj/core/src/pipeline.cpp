#include "qwalk/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <numeric>
#include <thread>

#include "qwalk/errors.hpp"
#include "qwalk/word_sampler.hpp"

namespace qwalk {

SamplerPlan SamplerPlan::make(const StepSet& s, long long n, const SamplerConfig& cfg) {
  if (n < 0) fail(errc::argument, "walk length must be nonnegative");
  if (cfg.trial_cap < 1) fail(errc::argument, "trial cap must be positive");
  if (cfg.parallel < 1) fail(errc::argument, "parallel width must be positive");

  SamplerPlan plan(s);
  plan.n_ = n;
  plan.cfg_ = cfg;
  plan.info_ = optimal_slope(s);

  if (cfg.slope_override) {
    RationalSlope ov = *cfg.slope_override;
    if (ov.p < 0 || ov.q < 0 || (ov.p == 0 && ov.q == 0))
      fail(errc::argument, "slope override must be a nonnegative pair, not both zero");
    const long long g = std::gcd(ov.p, ov.q);
    if (g > 1) {
      ov.p /= g;
      ov.q /= g;
    }
    ov.delta_used = 0.0;
    plan.slope_ = ov;
  } else {
    switch (plan.info_.kind) {
      case SlopeKind::rational:
      case SlopeKind::boundary:
        plan.slope_ = RationalSlope{plan.info_.p, plan.info_.q, 0.0};
        break;
      case SlopeKind::irrational: {
        const double delta = n == 0 ? 1.0 : choose_delta(n, cfg.delta_policy);
        plan.slope_ = rational_approx(plan.info_.slope_m, delta);
        break;
      }
    }
  }

  plan.model_ = normalize(project(s, plan.slope_));
  Grammar g = Grammar::build(plan.model_);
  {
    auto issues = g.validate();
    if (!issues.empty())
      fail(errc::validation, "proposal grammar failed validation: " + issues.front());
  }
  plan.counts_ = WordCounts::compute(g, n, cfg.count_mode);

  const auto r = cfg.exponent_variant == ExponentVariant::A ? plan.info_.r_variant_a
                                                            : plan.info_.r_variant_b;
  if (r) plan.predicted_exp_ = *r - 1.5;

  for (int i = 0; i < s.size(); ++i) {
    plan.max_dx_down_ = std::max<long long>(plan.max_dx_down_, -s[i].dx);
    plan.max_dy_down_ = std::max<long long>(plan.max_dy_down_, -s[i].dy);
    plan.diag_up_ = std::max<long long>(plan.diag_up_, s[i].dx - s[i].dy);
    plan.diag_down_ = std::max<long long>(plan.diag_down_, s[i].dy - s[i].dx);
  }
  return plan;
}

// Excursions project to weight-0 words, so endpoint=origin proposes from the
// smaller class D instead of all of P; any/diagonal need the full language.
int SamplerPlan::proposal_nt() const {
  return cfg_.endpoint == Endpoint::origin ? counts_.grammar().dyck()
                                           : counts_.grammar().start();
}

const BigInt& SamplerPlan::proposal_count() const {
  return counts_.count(proposal_nt(), n_);
}

bool SamplerPlan::run_trial(Rng& rng, std::vector<int>& out) const {
  out.clear();
  long long x = 0, y = 0, emitted = 0;
  const auto& terminals = model_.terminals;
  auto sink = [&](int tid) {
    const int origin = terminals[static_cast<size_t>(tid)].origin_index;
    const Step st = steps_[origin];
    x += st.dx;
    y += st.dy;
    ++emitted;
    if (x < 0 || y < 0) return false;
    const long long rem = n_ - emitted;
    if (cfg_.endpoint == Endpoint::origin) {
      // Cannot descend back to the axes fast enough: the finished word would
      // certainly be rejected, so cut it off now.
      if (x > rem * max_dx_down_ || y > rem * max_dy_down_) return false;
    } else if (cfg_.endpoint == Endpoint::diagonal) {
      const long long d = x - y;
      if (d > 0 && d > rem * diag_down_) return false;
      if (d < 0 && -d > rem * diag_up_) return false;
    }
    out.push_back(origin);
    return true;
  };
  if (!sample_word(counts_, proposal_nt(), n_, rng, sink)) return false;
  switch (cfg_.endpoint) {
    case Endpoint::origin: return x == 0 && y == 0;
    case Endpoint::diagonal: return x == y;
    case Endpoint::any: return true;
  }
  return false;
}

Walk SamplerPlan::sample_one(std::uint64_t seed, long long sample_index,
                             TrialStats* stats) const {
  const auto t0 = std::chrono::steady_clock::now();
  if (stats) stats->predicted_trial_exponent = predicted_exp_;
  if (mpz_sgn(proposal_count().get_mpz_t()) == 0)
    fail(errc::no_sample,
         "no proposal word of length " + std::to_string(n_) + " exists");

  std::vector<int> accepted;
  long long accepted_trial = -1;
  const int width = cfg_.parallel;

  for (long long base = 0; base < cfg_.trial_cap && accepted_trial < 0;
       base += width) {
    const long long hi = std::min<long long>(base + width, cfg_.trial_cap);
    if (width == 1 || hi - base == 1) {
      Rng rng(derive_stream(seed, static_cast<std::uint64_t>(sample_index),
                            static_cast<std::uint64_t>(base)));
      if (run_trial(rng, accepted)) accepted_trial = base;
    } else {
      // One worker per trial in the batch; the smallest accepting index wins,
      // so scheduling cannot change the answer.
      const long long count = hi - base;
      std::vector<std::vector<int>> bufs(static_cast<size_t>(count));
      std::vector<char> ok(static_cast<size_t>(count), 0);
      std::vector<std::exception_ptr> errs(static_cast<size_t>(count));
      std::vector<std::thread> workers;
      workers.reserve(static_cast<size_t>(count));
      for (long long i = 0; i < count; ++i) {
        workers.emplace_back([&, i] {
          try {
            Rng rng(derive_stream(seed, static_cast<std::uint64_t>(sample_index),
                                  static_cast<std::uint64_t>(base + i)));
            ok[static_cast<size_t>(i)] =
                run_trial(rng, bufs[static_cast<size_t>(i)]) ? 1 : 0;
          } catch (...) {
            errs[static_cast<size_t>(i)] = std::current_exception();
          }
        });
      }
      for (auto& w : workers) w.join();
      for (long long i = 0; i < count; ++i)
        if (errs[static_cast<size_t>(i)]) std::rethrow_exception(errs[static_cast<size_t>(i)]);
      for (long long i = 0; i < count; ++i) {
        if (ok[static_cast<size_t>(i)]) {
          accepted_trial = base + i;
          accepted = std::move(bufs[static_cast<size_t>(i)]);
          break;
        }
      }
    }
  }

  if (stats)
    stats->elapsed_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (accepted_trial < 0)
    fail(errc::trial_cap, "gave up after " + std::to_string(cfg_.trial_cap) +
                              " proposals without an accepted walk");
  if (stats) stats->trials += accepted_trial + 1;
  return Walk(&steps_, std::move(accepted));
}

std::vector<Walk> SamplerPlan::sample_many(std::uint64_t seed, long long k,
                                           TrialStats* stats) const {
  if (k < 0) fail(errc::argument, "sample count must be nonnegative");
  std::vector<Walk> out;
  out.reserve(static_cast<size_t>(k));
  for (long long i = 0; i < k; ++i) out.push_back(sample_one(seed, i, stats));
  return out;
}

bool recursive_feasible(const StepSet& s, long long n, std::size_t memory_budget) {
  if (n > 500) return false;
  return estimate_table_bytes(s, static_cast<int>(n)) <= memory_budget;
}

}  // namespace qwalk
