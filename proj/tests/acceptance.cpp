// Acceptance gate: every stated deliverable criterion, one line of verdict
// each, at the stated tolerances. Usage: acceptance <path-to-cli-binary>.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "json.hpp"

#include "qwalk/exact_enum.hpp"
#include "qwalk/grammar.hpp"
#include "qwalk/pipeline.hpp"
#include "qwalk/projection.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/slope.hpp"
#include "qwalk/step_set.hpp"
#include "qwalk/word_counts.hpp"

using namespace qwalk;
using json = nlohmann::json;

namespace {

const char* kFig = "(1,0);(0,1);(-1,0);(1,-1);(-1,-1);(-2,-1)";
const char* kNESW = "(1,0);(0,1);(-1,0);(0,-1)";
const char* kSym = "(1,1);(-1,0);(0,-1);(-1,-1)";

std::string g_cli_path;
int g_failures = 0;

void verdict(int criterion, bool ok, const std::string& detail) {
  std::printf("%s  criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  double seconds = 0;
};

RunResult run_cli(const std::string& args) {
  RunResult r;
  const std::string cmd = g_cli_path + " " + args;
  const auto t0 = std::chrono::steady_clock::now();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 65536> buf{};
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.seconds = seconds_since(t0);
  return r;
}

OneDModel make_model(const std::vector<long long>& weights) {
  OneDModel m;
  for (size_t i = 0; i < weights.size(); ++i) {
    m.terminals.push_back(OneDTerminal{static_cast<int>(i), weights[i], static_cast<int>(i)});
    if (weights[i] > 0) m.a_bar = std::max(m.a_bar, weights[i]);
    if (weights[i] < 0) m.b_bar = std::max(m.b_bar, -weights[i]);
  }
  return m;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------

void criterion_1_and_7() {
  // 1: growth constant, both analytically and from counts at n = 2000.
  const auto t0 = std::chrono::steady_clock::now();
  const StepSet s = StepSet::parse(kFig);
  const auto cp = critical_point(s);
  bool ok = cp.has_value() && std::abs(cp->s_value - 5.3299) < 0.001;

  const auto series = quadrant_counts(s, 2000);
  const double est = estimate_growth(series);
  ok = ok && std::abs(est / cp->s_value - 1.0) < 0.005;
  const double secs = seconds_since(t0);
  ok = ok && secs < 120.0;
  verdict(1, ok,
          "growth " + fmt(cp ? cp->s_value : 0.0) + " analytic vs " + fmt(est) +
              " from counts at n=2000 (" + fmt(secs) + " s)");

  if (!cp) {
    verdict(7, false, "no critical point, cannot calibrate exponent variants");
    return;
  }
  // 7: exponent calibration on the same series.
  const double r_fit = fit_subexp_exponent(series, cp->s_value, 1000, 2000);
  const double r_a = exponent_r(s, ExponentVariant::A);
  const double r_b = exponent_r(s, ExponentVariant::B);
  const bool a_in = std::abs(r_fit - r_a) < 0.3;
  const bool b_in = std::abs(r_fit - r_b) < 0.3;
  const bool one = a_in != b_in;
  const ExponentVariant selected = a_in ? ExponentVariant::A : ExponentVariant::B;
  const bool is_default = one && selected == kDefaultExponentVariant;
  verdict(7, one && is_default,
          "fitted r=" + fmt(r_fit) + ", variant A=" + fmt(r_a) + " B=" + fmt(r_b) +
              "; exactly one within 0.3 and it is the pipeline default"
              " (reported band: 3.3 < r < 7.5, not asserted)");
}

void criterion_2() {
  bool ok = true;
  std::string bad;
  for (const char* text : {kFig, kNESW, kSym}) {
    const StepSet s = StepSet::parse(text);
    const auto series = quadrant_counts(s, 6);
    for (int n = 0; n <= 6; ++n) {
      const auto walks = brute_force_walks(s, n);
      if (series.values[static_cast<size_t>(n)] != static_cast<long>(walks.size())) {
        ok = false;
        bad = std::string(text) + " at n=" + std::to_string(n);
      }
    }
  }
  verdict(2, ok, ok ? "DP counts equal brute-force enumeration, n <= 6, three step sets"
                    : "mismatch for " + bad);
}

void criterion_3() {
  const std::vector<std::pair<std::string, OneDModel>> models = {
      {"unit letters", make_model({1, -1})},
      {"multiset", make_model({2, -1, -1})},
      {"zero letter", make_model({1, 0, -2})},
      {"projected reference", normalize(project(StepSet::parse(kFig), RationalSlope{1, 2, 0}))},
      {"projected symmetric", normalize(project(StepSet::parse(kSym), RationalSlope{1, 1, 0}))},
  };
  bool ok = true;
  std::string bad;
  for (const auto& [name, m] : models) {
    const Grammar g = Grammar::build(m);
    if (!g.validate().empty()) {
      ok = false;
      bad = name + " failed validation";
      continue;
    }
    const auto counts = WordCounts::compute(g, 200);
    const auto any = oned_counts(m, 200, false);
    const auto zero = oned_counts(m, 200, true);
    for (long long n = 0; n <= 200; ++n) {
      if (counts.count(g.start(), n) != any[static_cast<size_t>(n)] ||
          counts.count(g.dyck(), n) != zero[static_cast<size_t>(n)]) {
        ok = false;
        bad = name + " at n=" + std::to_string(n);
        break;
      }
    }
  }
  verdict(3, ok,
          ok ? "grammar word counts equal height-DP oracle, n <= 200, 5 models"
             : "mismatch: " + bad);
}

void criterion_4() {
  const Grammar g = Grammar::build(make_model({1, -1}));
  const auto counts = WordCounts::compute(g, 20);
  bool ok = true;
  for (int n = 0; n <= 20 && ok; ++n) {
    BigInt binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>((n + 1) / 2));
    ok = counts.count(g.start(), n) == binom;
  }
  for (int k = 0; k <= 8 && ok; ++k) {
    BigInt catalan;
    mpz_bin_uiui(catalan.get_mpz_t(), static_cast<unsigned long>(2 * k),
                 static_cast<unsigned long>(k));
    catalan /= (k + 1);
    ok = counts.count(g.dyck(), 2 * k) == catalan;
  }
  verdict(4, ok, "ballot words match central binomials (n <= 20) and Catalan numbers (2n <= 16)");
}

void criterion_5() {
  const StepSet s = StepSet::parse(kFig);
  const int n = 8;
  const long long draws = 200000;
  const auto table = suffix_counts(s, n);
  const long long cells = table.q_n().get_si();  // 23748
  const double threshold =
      boost::math::quantile(boost::math::chi_squared(static_cast<double>(cells - 1)), 0.999);

  auto chi_square = [&](const std::map<std::vector<int>, long long>& seen) {
    const double expect = static_cast<double>(draws) / static_cast<double>(cells);
    double stat = 0;
    long long covered = 0;
    for (const auto& [w, c] : seen) {
      const double d = static_cast<double>(c) - expect;
      stat += d * d / expect;
      ++covered;
    }
    stat += static_cast<double>(cells - covered) * expect;
    return stat;
  };

  std::map<std::vector<int>, long long> seen;
  Rng rng(20260814);
  const BigRat expected_prob(1, table.q_n());
  bool products_exact = true;
  for (long long i = 0; i < draws; ++i) {
    BigRat prob;
    const Walk w = sample_recursive(table, rng, &prob);
    products_exact = products_exact && prob == expected_prob;
    ++seen[w.step_indices()];
  }
  const double stat_rec = chi_square(seen);

  SamplerConfig cfg;
  const auto plan = SamplerPlan::make(s, n, cfg);
  seen.clear();
  for (long long i = 0; i < draws; ++i) ++seen[plan.sample_one(777, i).step_indices()];
  const double stat_rej = chi_square(seen);

  const bool ok = products_exact && stat_rec < threshold && stat_rej < threshold;
  verdict(5, ok,
          "chi-square: recursive " + fmt(stat_rec) + ", rejection " + fmt(stat_rej) +
              ", threshold(0.999, df=" + std::to_string(cells - 1) + ") " + fmt(threshold) +
              "; per-walk probabilities all exactly 1/q_8: " +
              (products_exact ? "yes" : "NO"));
}

void criterion_6() {
  const StepSet s = StepSet::parse(kFig);
  const auto q_series = quadrant_counts(s, 10);
  SamplerConfig cfg;
  const auto plan = SamplerPlan::make(s, 10, cfg);
  const double exact = BigRat(q_series.values[10], plan.proposal_count()).get_d();

  TrialStats stats;
  long long accepted = 0;
  while (stats.trials < 100000) {
    (void)plan.sample_one(5150, accepted, &stats);
    ++accepted;
  }
  const double rate = static_cast<double>(accepted) / static_cast<double>(stats.trials);
  const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(stats.trials));
  const bool ok = std::abs(rate - exact) < 3.0 * se;
  verdict(6, ok,
          "acceptance " + fmt(rate) + " vs exact q_10/h_10 " + fmt(exact) + " over " +
              std::to_string(stats.trials) + " proposals (|diff| " + fmt(std::abs(rate - exact)) +
              " < 3 se = " + fmt(3 * se) + ")");
}

void criterion_8() {
  const StepSet s = StepSet::parse(kSym);
  const double r = exponent_r(s, kDefaultExponentVariant);
  const double predicted = r - 1.5;
  std::vector<double> log_n, log_trials;
  std::string detail;
  for (long long n : {100, 200, 400, 800}) {
    SamplerConfig cfg;
    const auto plan = SamplerPlan::make(s, n, cfg);
    TrialStats stats;
    const long long accepted = 100;
    for (long long i = 0; i < accepted; ++i) (void)plan.sample_one(31337, i, &stats);
    const double mean_trials =
        static_cast<double>(stats.trials) / static_cast<double>(accepted);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_trials.push_back(std::log(mean_trials));
    detail += " n=" + std::to_string(n) + ":" + fmt(mean_trials);
  }
  // Least-squares slope of log mean-trials against log n.
  const size_t k = log_n.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < k; ++i) {
    sx += log_n[i];
    sy += log_trials[i];
    sxx += log_n[i] * log_n[i];
    sxy += log_n[i] * log_trials[i];
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  const bool ok = std::abs(slope - predicted) < 0.5;
  verdict(8, ok,
          "mean trials" + detail + "; log-log slope " + fmt(slope) + " vs predicted r-3/2 = " +
              fmt(predicted) + " (+-0.5)");
}

void criterion_9() {
  struct Case {
    const char* steps;
    double rho_inv;
    double want;
    const char* name;
  };
  const Case cases[] = {
      // Positive drift keeps a constant fraction of walks nonnegative, so the
      // reference growth is the full step count 3; the reluctant case tilts
      // down to 2*sqrt(2).
      {"(1,0);(1,0);(-1,0)", 3.0, 0.0, "positive drift"},
      {"(1,0);(-1,0)", 2.0, 0.5, "zero drift"},
      {"(1,0);(-1,0);(-1,0)", 2.0 * std::sqrt(2.0), 1.5, "negative drift"},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto series = quadrant_counts(StepSet::parse(c.steps), 2000);
    const double got = fit_subexp_exponent(series, c.rho_inv, 1000, 2000);
    ok = ok && std::abs(got - c.want) < 0.1;
    detail += std::string(" ") + c.name + ":" + fmt(got);
  }
  verdict(9, ok, "half-line exponents" + detail + " vs {0, 0.5, 1.5} (+-0.1)");
}

void criterion_10() {
  const RationalSlope r = rational_approx(0.6309298, 0.01);
  bool ok = r.p == 5 && r.q == 8;
  // Exhaustive minimality scan for the pinned case.
  for (long long q = 1; q < 8 && ok; ++q)
    for (long long p = 0; p <= q && ok; ++p)
      ok = std::abs(static_cast<double>(p) / static_cast<double>(q) - 0.6309298) > 0.01;
  ok = ok && choose_delta(99, DeltaPolicy{}) == 0.01;
  verdict(10, ok,
          "rational_approx(0.6309298, 0.01) = " + std::to_string(r.p) + "/" +
              std::to_string(r.q) + ", minimal by scan; choose_delta(99, exact) = 1/100");
}

void criterion_11() {
  // Headline run through the CLI, documented small-denominator direction.
  const RunResult r = run_cli("sample --steps \"" + std::string(kFig) +
                              "\" -n 10000 --seed 1 --slope-override 1/2 --format json"
                              " 2>/dev/null");
  bool ok = r.exit_code == 0 && r.seconds < 600.0;
  std::string note;
  long long trials = 0;
  if (ok) {
    try {
      const json j = json::parse(r.out);
      trials = j["trial_stats"]["trials"].get<long long>();
      const auto& w = j["walks"][0];
      ok = w["steps"].size() == 10000 && w["positions"].size() == 10001;
      long long x = 0, y = 0;
      for (const auto& p : j["walks"][0]["positions"]) {
        const long long px = p[0].get<long long>(), py = p[1].get<long long>();
        ok = ok && px >= 0 && py >= 0;
        x = px;
        y = py;
      }
      (void)x;
      (void)y;
      ok = ok && trials >= 1;
    } catch (const std::exception& e) {
      ok = false;
      note = std::string("; bad JSON: ") + e.what();
    }
  } else {
    note = "; exit=" + std::to_string(r.exit_code);
  }
  verdict(11, ok,
          "uniform n=10000 walk via rejection in " + fmt(r.seconds) + " s (< 600), " +
              std::to_string(trials) + " proposals recorded" + note);
}

void criterion_12() {
  const std::string base = "sample --steps \"" + std::string(kFig) + "\" --seed 7 -n 64 -k 4 ";
  const RunResult a = run_cli(base + "--method rejection 2>/dev/null");
  const RunResult b = run_cli(base + "--method rejection 2>/dev/null");
  const RunResult c = run_cli(base + "--method rejection --parallel 4 2>/dev/null");
  const RunResult d = run_cli(base + "--method recursive 2>/dev/null");
  const RunResult e = run_cli(base + "--method recursive 2>/dev/null");
  const bool ok = a.exit_code == 0 && a.out == b.out && a.out == c.out &&
                  d.exit_code == 0 && d.out == e.out && !a.out.empty();
  verdict(12, ok,
          "seed 7 runs byte-identical: rejection repeat, rejection --parallel 4, "
          "recursive repeat");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli-binary>\n");
    return 2;
  }
  g_cli_path = argv[1];

  criterion_1_and_7();  // prints verdicts for 1 and 7
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();

  if (g_failures == 0) {
    std::printf("acceptance: all 12 criteria satisfied\n");
    return 0;
  }
  std::printf("acceptance: %d criterion/criteria FAILED\n", g_failures);
  return 1;
}
