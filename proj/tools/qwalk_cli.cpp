// Command-line front end: analysis, exact counting, uniform sampling,
// grammar inspection, SVG rendering, and a statistical self-test suite.
//
// Exit codes (stable contract):
//   0  success
//   1  self-test failure or internal inconsistency
//   2  usage, parse, or domain errors
//   3  resource limits (memory budget, trial cap)

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "CLI11.hpp"
#include "json.hpp"

#include "qwalk/errors.hpp"
#include "qwalk/exact_enum.hpp"
#include "qwalk/grammar.hpp"
#include "qwalk/pipeline.hpp"
#include "qwalk/projection.hpp"
#include "qwalk/series_io.hpp"
#include "qwalk/slope.hpp"
#include "qwalk/step_set.hpp"
#include "qwalk/word_counts.hpp"
#include "qwalk/word_sampler.hpp"

using json = nlohmann::ordered_json;

namespace {

int exit_code_for(qwalk::errc kind) {
  switch (kind) {
    case qwalk::errc::resource:
    case qwalk::errc::trial_cap:
      return 3;
    case qwalk::errc::numeric:
      return 1;
    default:
      return 2;  // parse, argument, domain, triviality, validation, io, no_sample
  }
}

std::string fmt_double(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared option bundle

struct Options {
  std::string steps_text;
  long long n = 0;
  long long k = 1;
  std::uint64_t seed = 0;
  std::string method = "auto";
  std::string endpoint = "any";
  std::string delta_policy = "exact";
  std::string slope_override;
  std::string format = "text";
  std::string variant = "A";
  std::size_t mem_budget = qwalk::kDefaultMemoryBudget;
  long long trial_cap = 10'000'000;
  int parallel = 1;
  bool timing = false;
  std::string cache;
  std::string output;
  std::string input;
  std::string inject = "none";
};

qwalk::Endpoint endpoint_of(const Options& o) { return qwalk::parse_endpoint(o.endpoint); }

qwalk::ExponentVariant variant_of(const Options& o) {
  if (o.variant == "A" || o.variant == "a") return qwalk::ExponentVariant::A;
  if (o.variant == "B" || o.variant == "b") return qwalk::ExponentVariant::B;
  qwalk::fail(qwalk::errc::argument, "exponent variant must be A or B");
}

std::optional<qwalk::RationalSlope> slope_override_of(const Options& o) {
  if (o.slope_override.empty()) return std::nullopt;
  const auto slash = o.slope_override.find('/');
  if (slash == std::string::npos)
    qwalk::fail(qwalk::errc::parse, "slope override must look like p/q");
  try {
    size_t p1 = 0, p2 = 0;
    const long long p = std::stoll(o.slope_override.substr(0, slash), &p1);
    const long long q = std::stoll(o.slope_override.substr(slash + 1), &p2);
    if (p1 != slash || p2 != o.slope_override.size() - slash - 1 || p < 0 || q < 0 ||
        (p == 0 && q == 0))
      throw std::invalid_argument("bad");
    return qwalk::RationalSlope{p, q, 0.0};
  } catch (const std::exception&) {
    qwalk::fail(qwalk::errc::parse,
                "slope override must be two nonnegative integers p/q, not both zero");
  }
}

qwalk::SamplerConfig sampler_config_of(const Options& o) {
  qwalk::SamplerConfig cfg;
  cfg.delta_policy = qwalk::DeltaPolicy::parse(o.delta_policy);
  cfg.slope_override = slope_override_of(o);
  cfg.endpoint = endpoint_of(o);
  cfg.trial_cap = o.trial_cap;
  cfg.exponent_variant = variant_of(o);
  cfg.parallel = o.parallel;
  return cfg;
}

// Writes to the -o file when given, else stdout.
void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) qwalk::fail(qwalk::errc::io, "cannot open output file '" + o.output + "'");
  f << text;
  if (!f) qwalk::fail(qwalk::errc::io, "short write to '" + o.output + "'");
}

// ---------------------------------------------------------------------------
// Walk text format: "dx,dy;dx,dy;..." (empty line = empty walk)

std::string format_walk(const qwalk::Walk& w) {
  std::string out;
  const auto& s = w.step_set();
  bool first = true;
  for (int idx : w.step_indices()) {
    if (!first) out += ';';
    first = false;
    out += std::to_string(s[idx].dx) + "," + std::to_string(s[idx].dy);
  }
  return out;
}

std::vector<std::pair<long long, long long>> parse_walk_positions(const std::string& line) {
  std::vector<std::pair<long long, long long>> pos{{0, 0}};
  std::string trimmed;
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
  if (trimmed.empty()) return pos;
  long long x = 0, y = 0;
  std::stringstream ss(trimmed);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto comma = item.find(',');
    if (comma == std::string::npos)
      qwalk::fail(qwalk::errc::parse, "bad walk step '" + item + "' (want dx,dy)");
    try {
      size_t c1 = 0, c2 = 0;
      const long long dx = std::stoll(item.substr(0, comma), &c1);
      const long long dy = std::stoll(item.substr(comma + 1), &c2);
      if (c1 != comma || c2 != item.size() - comma - 1) throw std::invalid_argument("bad");
      x += dx;
      y += dy;
    } catch (const std::exception&) {
      qwalk::fail(qwalk::errc::parse, "bad walk step '" + item + "' (want dx,dy)");
    }
    pos.emplace_back(x, y);
  }
  return pos;
}

// ---------------------------------------------------------------------------
// SVG rendering

std::string render_svg(const std::vector<std::pair<long long, long long>>& pos) {
  long long minx = 0, maxx = 0, miny = 0, maxy = 0;
  for (const auto& p : pos) {
    minx = std::min(minx, p.first);
    maxx = std::max(maxx, p.first);
    miny = std::min(miny, p.second);
    maxy = std::max(maxy, p.second);
  }
  const long long w = maxx - minx, h = maxy - miny;
  const long long span = std::max({w, h, 1LL});
  const double pad = 0.05 * static_cast<double>(span) + 0.5;
  const long long steps = static_cast<long long>(pos.size()) - 1;
  // Stroke thins as the walk grows, so long walks render as a hairline
  // instead of a blob; clamped relative to the drawing span.
  const double sw =
      std::clamp(static_cast<double>(span) / static_cast<double>(std::max(steps, 20LL)),
                 static_cast<double>(span) / 1500.0, static_cast<double>(span) / 30.0);

  const double vb_x = static_cast<double>(minx) - pad;
  const double vb_y = -pad;
  const double vb_w = static_cast<double>(w) + 2 * pad;
  const double vb_h = static_cast<double>(h) + 2 * pad;
  const int px_w = 900;
  const int px_h = std::max(1, static_cast<int>(std::lround(px_w * vb_h / vb_w)));

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px_w << "\" height=\""
      << px_h << "\" viewBox=\"" << fmt_double(vb_x, 6) << " " << fmt_double(vb_y, 6) << " "
      << fmt_double(vb_w, 6) << " " << fmt_double(vb_h, 6) << "\">\n";
  // All geometry is in lattice coordinates; this group flips the y axis so
  // that mathematical "up" is up on screen.
  out << "  <g transform=\"translate(0 " << maxy << ") scale(1 -1)\">\n";
  // Axes: the two quadrant walls, as rays from the origin to the box edge.
  out << "    <g stroke=\"#888888\" stroke-width=\"" << fmt_double(sw * 0.6, 6) << "\">\n";
  out << "      <line x1=\"0\" y1=\"0\" x2=\"" << fmt_double(vb_x + vb_w, 6)
      << "\" y2=\"0\"/>\n";
  out << "      <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\""
      << fmt_double(static_cast<double>(maxy) + pad, 6) << "\"/>\n";
  out << "    </g>\n";
  if (pos.size() >= 2) {
    out << "    <polyline fill=\"none\" stroke=\"#1f6feb\" stroke-width=\""
        << fmt_double(sw, 6) << "\" points=\"";
    for (size_t i = 0; i < pos.size(); ++i) {
      if (i) out << ' ';
      out << pos[i].first << ',' << pos[i].second;
    }
    out << "\"/>\n";
    out << "    <circle cx=\"" << pos.front().first << "\" cy=\"" << pos.front().second
        << "\" r=\"" << fmt_double(sw * 1.8, 6) << "\" fill=\"#2da44e\"/>\n";
    out << "    <circle cx=\"" << pos.back().first << "\" cy=\"" << pos.back().second
        << "\" r=\"" << fmt_double(sw * 1.8, 6) << "\" fill=\"#cf222e\"/>\n";
  }
  out << "  </g>\n";
  out << "</svg>\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Cache helpers: use the file when it exists and matches, else compute and
// (when a path was given) save for next time.

qwalk::CountSeries load_or_build_series(const Options& o, const qwalk::StepSet& s,
                                        qwalk::Endpoint endpoint) {
  if (!o.cache.empty()) {
    std::ifstream f(o.cache);
    if (f) {
      qwalk::CountSeries series = qwalk::read_series(f, s);
      if (series.endpoint != endpoint)
        qwalk::fail(qwalk::errc::io, "cache file '" + o.cache + "' holds endpoint=" +
                                         qwalk::endpoint_name(series.endpoint) +
                                         ", requested " + qwalk::endpoint_name(endpoint));
      if (series.n_max() < o.n)
        qwalk::fail(qwalk::errc::io,
                    "cache file '" + o.cache + "' stops at n=" +
                        std::to_string(series.n_max()) + ", requested " + std::to_string(o.n));
      series.values.resize(static_cast<size_t>(o.n) + 1);
      return series;
    }
  }
  qwalk::CountSeries series = qwalk::quadrant_counts(s, static_cast<int>(o.n), endpoint);
  if (!o.cache.empty()) {
    std::ofstream f(o.cache, std::ios::binary);
    if (!f) qwalk::fail(qwalk::errc::io, "cannot open cache file '" + o.cache + "'");
    qwalk::write_series(f, series, s);
  }
  return series;
}

qwalk::CountTable load_or_build_table(const Options& o, const qwalk::StepSet& s) {
  if (!o.cache.empty()) {
    std::ifstream f(o.cache);
    if (f) {
      qwalk::CountTable table = qwalk::read_table(f, s, o.mem_budget);
      if (table.n() != o.n)
        qwalk::fail(qwalk::errc::io, "cache file '" + o.cache + "' is for n=" +
                                         std::to_string(table.n()) + ", requested " +
                                         std::to_string(o.n));
      return table;
    }
  }
  qwalk::CountTable table = qwalk::suffix_counts(s, static_cast<int>(o.n), o.mem_budget);
  if (!o.cache.empty()) {
    std::ofstream f(o.cache, std::ios::binary);
    if (!f) qwalk::fail(qwalk::errc::io, "cannot open cache file '" + o.cache + "'");
    qwalk::write_table(f, table);
  }
  return table;
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const Options& o) {
  const qwalk::StepSet s = qwalk::StepSet::parse(o.steps_text);
  const qwalk::Classification cls = qwalk::classify(s);
  const qwalk::SlopeInfo info = qwalk::optimal_slope(s);
  const auto r_sel = variant_of(o) == qwalk::ExponentVariant::A ? info.r_variant_a
                                                                : info.r_variant_b;

  if (o.format == "json") {
    json j;
    j["steps"] = s.format();
    j["classification"] = {{"drift", {cls.drift.first, cls.drift.second}},
                           {"reluctant", cls.reluctant},
                           {"singular", cls.singular},
                           {"trivial", cls.trivial}};
    if (info.critical) {
      j["alpha"] = info.critical->alpha;
      j["beta"] = info.critical->beta;
      j["rho_inv"] = info.critical->s_value;
    } else {
      j["alpha"] = nullptr;
      j["beta"] = nullptr;
      j["rho_inv"] = nullptr;
    }
    j["theta_star"] = info.theta_star;
    if (std::isfinite(info.slope_m))
      j["m"] = info.slope_m;
    else
      j["m"] = nullptr;
    j["slope_kind"] = info.kind == qwalk::SlopeKind::rational     ? "rational"
                      : info.kind == qwalk::SlopeKind::irrational ? "irrational"
                                                                  : "boundary";
    if (info.kind != qwalk::SlopeKind::irrational) {
      j["p"] = info.p;
      j["q"] = info.q;
    } else {
      j["p"] = nullptr;
      j["q"] = nullptr;
    }
    j["r_variant_A"] = info.r_variant_a ? json(*info.r_variant_a) : json(nullptr);
    j["r_variant_B"] = info.r_variant_b ? json(*info.r_variant_b) : json(nullptr);
    j["exponent_variant"] = o.variant;
    j["predicted_trial_exponent"] = r_sel ? json(*r_sel - 1.5) : json(nullptr);
    emit(o, j.dump(2) + "\n");
    return 0;
  }

  std::ostringstream out;
  out << "steps: " << s.format() << "\n";
  out << "drift: (" << cls.drift.first << "," << cls.drift.second << ")\n";
  out << "reluctant: " << (cls.reluctant ? "yes" : "no") << "\n";
  out << "singular: " << (cls.singular ? "yes" : "no") << "\n";
  out << "trivial: " << (cls.trivial ? "yes" : "no") << "\n";
  if (info.critical) {
    out << "critical point: alpha=" << fmt_double(info.critical->alpha)
        << " beta=" << fmt_double(info.critical->beta) << "\n";
    out << "growth factor: " << fmt_double(info.critical->s_value) << "\n";
  } else {
    out << "critical point: none (singular model)\n";
  }
  out << "theta_star: " << fmt_double(info.theta_star) << "\n";
  out << "slope m: " << (std::isfinite(info.slope_m) ? fmt_double(info.slope_m) : "inf")
      << "\n";
  out << "slope kind: "
      << (info.kind == qwalk::SlopeKind::rational     ? "rational"
          : info.kind == qwalk::SlopeKind::irrational ? "irrational"
                                                      : "boundary");
  if (info.kind != qwalk::SlopeKind::irrational)
    out << " (" << info.p << "/" << info.q << ")";
  out << "\n";
  if (info.r_variant_a) out << "r (variant A): " << fmt_double(*info.r_variant_a) << "\n";
  if (info.r_variant_b) out << "r (variant B): " << fmt_double(*info.r_variant_b) << "\n";
  if (r_sel)
    out << "predicted trial exponent (r - 3/2, variant " << o.variant
        << "): " << fmt_double(*r_sel - 1.5) << "\n";
  emit(o, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// count

int cmd_count(const Options& o) {
  const qwalk::StepSet s = qwalk::StepSet::parse(o.steps_text);
  if (o.n < 0) qwalk::fail(qwalk::errc::argument, "-n must be nonnegative");
  const qwalk::Endpoint endpoint = endpoint_of(o);
  const qwalk::CountSeries series = load_or_build_series(o, s, endpoint);

  if (o.format == "json") {
    json j;
    j["steps"] = s.format();
    j["endpoint"] = qwalk::endpoint_name(endpoint);
    json vals = json::array();
    for (const auto& v : series.values) vals.push_back(qwalk::to_decimal(v));
    j["counts"] = vals;
    emit(o, j.dump(2) + "\n");
    return 0;
  }
  std::ostringstream out;
  qwalk::write_series(out, series, s);
  emit(o, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// sample

json walk_json(const qwalk::Walk& w) {
  json jw;
  json steps = json::array();
  const auto& s = w.step_set();
  for (int idx : w.step_indices()) steps.push_back({s[idx].dx, s[idx].dy});
  json positions = json::array();
  for (const auto& p : w.positions()) positions.push_back({p.first, p.second});
  jw["steps"] = steps;
  jw["positions"] = positions;
  return jw;
}

// Exact sampling from the table, with plain re-draws when an endpoint other
// than "any" is requested (still exactly uniform on the constrained set).
qwalk::Walk table_sample(const qwalk::CountTable& table, qwalk::Endpoint endpoint,
                         std::uint64_t seed, long long sample_index, long long trial_cap,
                         qwalk::TrialStats* stats) {
  for (long long t = 0; t < trial_cap; ++t) {
    qwalk::Rng rng(qwalk::derive_stream(seed, static_cast<std::uint64_t>(sample_index),
                                        static_cast<std::uint64_t>(t)));
    qwalk::Walk w = qwalk::sample_recursive(table, rng);
    const auto end = w.positions().back();
    const bool ok = endpoint == qwalk::Endpoint::any ||
                    (endpoint == qwalk::Endpoint::origin && end.first == 0 && end.second == 0) ||
                    (endpoint == qwalk::Endpoint::diagonal && end.first == end.second);
    if (ok) {
      if (stats) stats->trials += t + 1;
      return w;
    }
  }
  qwalk::fail(qwalk::errc::trial_cap,
              "gave up after " + std::to_string(trial_cap) +
                  " exact draws without hitting the requested endpoint");
}

int cmd_sample(const Options& o) {
  const qwalk::StepSet s = qwalk::StepSet::parse(o.steps_text);
  if (o.n < 0) qwalk::fail(qwalk::errc::argument, "-n must be nonnegative");
  if (o.k < 1) qwalk::fail(qwalk::errc::argument, "-k must be positive");
  if (o.method != "auto" && o.method != "recursive" && o.method != "rejection")
    qwalk::fail(qwalk::errc::argument, "method must be auto, recursive, or rejection");
  const qwalk::Endpoint endpoint = endpoint_of(o);
  // Malformed flag values are usage errors even when the resolved method
  // never consumes them.
  (void)sampler_config_of(o);

  std::string method = o.method;
  if (method == "auto")
    method = qwalk::recursive_feasible(s, o.n, o.mem_budget) ? "recursive" : "rejection";

  qwalk::TrialStats stats;
  std::vector<qwalk::Walk> walks;
  std::optional<qwalk::RationalSlope> used_slope;
  const auto t0 = std::chrono::steady_clock::now();

  // The plan (or table) must outlive the walks, which reference the step set.
  std::optional<qwalk::SamplerPlan> plan;
  std::optional<qwalk::CountTable> table;

  if (method == "recursive") {
    try {
      table.emplace(load_or_build_table(o, s));
    } catch (const qwalk::Error& e) {
      if (e.kind() == qwalk::errc::resource && o.method == "auto") {
        std::cerr << "note: table exceeds the memory budget, falling back to rejection\n";
        method = "rejection";
      } else {
        throw;
      }
    }
  }
  if (method == "recursive") {
    for (long long i = 0; i < o.k; ++i)
      walks.push_back(table_sample(*table, endpoint, o.seed, i, o.trial_cap, &stats));
  } else {
    plan.emplace(qwalk::SamplerPlan::make(s, o.n, sampler_config_of(o)));
    used_slope = plan->slope();
    walks = plan->sample_many(o.seed, o.k, &stats);
  }
  stats.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (o.format == "svg") {
    emit(o, render_svg(walks.front().positions()));
    return 0;
  }
  if (o.format == "json") {
    json j;
    j["steps"] = s.format();
    j["n"] = o.n;
    j["k"] = o.k;
    j["seed"] = o.seed;
    j["method"] = method;
    j["endpoint"] = qwalk::endpoint_name(endpoint);
    if (used_slope) {
      j["slope"] = {{"p", used_slope->p},
                    {"q", used_slope->q},
                    {"delta_used", used_slope->delta_used}};
    }
    j["trial_stats"] = json::object();
    j["trial_stats"]["trials"] = stats.trials;
    j["trial_stats"]["predicted_trial_exponent"] =
        stats.predicted_trial_exponent ? json(*stats.predicted_trial_exponent)
                                       : json(nullptr);
    if (o.timing) j["trial_stats"]["elapsed_seconds"] = stats.elapsed_seconds;
    json jwalks = json::array();
    for (const auto& w : walks) jwalks.push_back(walk_json(w));
    j["walks"] = jwalks;
    emit(o, j.dump(2) + "\n");
    return 0;
  }

  std::ostringstream out;
  for (const auto& w : walks) out << format_walk(w) << "\n";
  if (o.timing)
    std::cerr << "trials=" << stats.trials
              << " elapsed_seconds=" << fmt_double(stats.elapsed_seconds, 6) << "\n";
  emit(o, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// grammar

int cmd_grammar(const Options& o) {
  const qwalk::StepSet s = qwalk::StepSet::parse(o.steps_text);
  const long long n = o.n > 0 ? o.n : 100;  // length only feeds delta selection
  qwalk::SamplerConfig cfg = sampler_config_of(o);

  const qwalk::SlopeInfo info = qwalk::optimal_slope(s);
  qwalk::RationalSlope slope;
  if (cfg.slope_override) {
    slope = *cfg.slope_override;
  } else if (info.kind != qwalk::SlopeKind::irrational) {
    slope = qwalk::RationalSlope{info.p, info.q, 0.0};
  } else {
    slope = qwalk::rational_approx(info.slope_m, qwalk::choose_delta(n, cfg.delta_policy));
  }
  const qwalk::OneDModel model = qwalk::normalize(qwalk::project(s, slope));
  const qwalk::Grammar g = qwalk::Grammar::build(model);
  const auto issues = g.validate();

  if (o.format == "json") {
    json j;
    j["steps"] = s.format();
    j["slope"] = {{"p", slope.p}, {"q", slope.q}, {"delta_used", slope.delta_used}};
    json terms = json::array();
    for (const auto& t : model.terminals) {
      const qwalk::Step st = s[t.origin_index];
      terms.push_back({{"id", t.id}, {"weight", t.weight}, {"step", {st.dx, st.dy}}});
    }
    j["terminals"] = terms;
    j["a_bar"] = model.a_bar;
    j["b_bar"] = model.b_bar;
    json rules = json::array();
    for (const auto& nt : g.nonterminals()) {
      json alts = json::array();
      for (const auto& alt : nt.alts) {
        json syms = json::array();
        for (const auto& sym : alt.symbols)
          syms.push_back(sym.kind == qwalk::Symbol::Kind::terminal
                             ? "t" + std::to_string(sym.index)
                             : g.nonterminals()[static_cast<size_t>(sym.index)].name);
        alts.push_back(syms);
      }
      rules.push_back({{"name", nt.name}, {"alternatives", alts}});
    }
    j["rules"] = rules;
    j["validation_issues"] = issues;
    emit(o, j.dump(2) + "\n");
    return 0;
  }

  std::ostringstream out;
  out << "steps: " << s.format() << "\n";
  out << "slope: " << slope.p << "/" << slope.q;
  if (slope.delta_used > 0) out << " (delta=" << fmt_double(slope.delta_used, 6) << ")";
  out << "\n";
  out << "a_bar: " << model.a_bar << "  b_bar: " << model.b_bar << "\n";
  out << g.to_text();
  out << "validation: " << (issues.empty() ? "ok" : "FAILED") << "\n";
  for (const auto& msg : issues) out << "  " << msg << "\n";
  emit(o, out.str());
  return issues.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// render

int cmd_render(const Options& o) {
  std::string line;
  if (!o.input.empty()) {
    std::ifstream f(o.input);
    if (!f) qwalk::fail(qwalk::errc::io, "cannot open input file '" + o.input + "'");
    std::getline(f, line);
  } else {
    std::getline(std::cin, line);
  }
  emit(o, render_svg(parse_walk_positions(line)));
  return 0;
}

// ---------------------------------------------------------------------------
// selftest

double chi_square_stat(const std::map<std::vector<int>, long long>& observed,
                       long long cells, long long draws) {
  const double expected = static_cast<double>(draws) / static_cast<double>(cells);
  double stat = 0.0;
  long long seen = 0;
  for (const auto& [_, count] : observed) {
    const double d = static_cast<double>(count) - expected;
    stat += d * d / expected;
    ++seen;
  }
  // Walks never drawn still contribute (0 - e)^2 / e.
  stat += static_cast<double>(cells - seen) * expected;
  return stat;
}

struct SelfTest {
  int failures = 0;
  std::ostringstream out;

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    out << (ok ? "PASS" : "FAIL") << "  " << name;
    if (!detail.empty()) out << "  (" << detail << ")";
    out << "\n";
    if (!ok) ++failures;
  }
};

int cmd_selftest(const Options& o) {
  SelfTest t;
  const qwalk::StepSet fig = qwalk::StepSet::parse("(1,0);(0,1);(-1,0);(1,-1);(-1,-1);(-2,-1)");
  const qwalk::StepSet nesw = qwalk::StepSet::parse("(1,0);(0,1);(-1,0);(0,-1)");

  // 1. DP counts vs exhaustive enumeration.
  for (const auto* sp : {&fig, &nesw}) {
    const auto series = qwalk::quadrant_counts(*sp, 5);
    bool ok = true;
    for (int n = 0; n <= 5 && ok; ++n)
      ok = series.values[static_cast<size_t>(n)] ==
           static_cast<long>(qwalk::brute_force_walks(*sp, n).size());
    t.check("dp counts match exhaustive enumeration (" + sp->format() + ")", ok);
  }

  // 2. Grammar word counts vs direct height DP, with optional fault injection.
  {
    const qwalk::OneDModel model =
        qwalk::normalize(qwalk::project(fig, qwalk::RationalSlope{1, 2, 0.0}));
    qwalk::Grammar g = qwalk::Grammar::build(model);
    if (o.inject == "grammar-drop") {
      // Silently lose one alternative: structurally fine, numerically wrong.
      auto& nt = g.mutable_nonterminal(g.nt_r(1));
      if (!nt.alts.empty()) nt.alts.pop_back();
    }
    if (o.inject == "grammar-weight") {
      // Point one terminal alternative at a wrong-weight terminal. The normal
      // validation check below must then fail, proving it has teeth.
      auto& nt = g.mutable_nonterminal(g.nt_l(1));
      nt.alts.front().symbols.front() = qwalk::Symbol::term(1);  // weight +2 under L1
    }
    const auto issues = g.validate();
    t.check("grammar validates", issues.empty(), issues.empty() ? "" : issues.front());
    if (issues.empty()) {
      const auto words = qwalk::count_words(g, 60);
      const auto oracle = qwalk::oned_counts(model, 60, false);
      bool counts_ok = true;
      for (int n = 0; n <= 60; ++n)
        if (words[static_cast<size_t>(n)] != oracle[static_cast<size_t>(n)]) {
          counts_ok = false;
          break;
        }
      t.check("grammar counts match height-DP oracle", counts_ok);
    }
  }

  // 3. Recursive sampler: per-walk probability telescopes to exactly 1/q_n.
  {
    const auto table = qwalk::suffix_counts(fig, 6);
    qwalk::Rng rng(qwalk::derive_stream(o.seed, 0, 0));
    bool ok = true;
    const qwalk::BigRat expect(1, table.q_n());
    for (int i = 0; i < 50 && ok; ++i) {
      qwalk::BigRat prob;
      qwalk::sample_recursive(table, rng, &prob);
      ok = prob == expect;
    }
    t.check("recursive per-walk probability equals 1/q_n exactly", ok);
  }

  // 4. Chi-square uniformity of both samplers at n=5.
  {
    const int n = 5;
    const auto table = qwalk::suffix_counts(fig, n);
    const long long cells = table.q_n().get_si();
    const long long draws = 40 * cells;
    const double threshold = boost::math::quantile(
        boost::math::chi_squared(static_cast<double>(cells - 1)), 0.999);

    std::map<std::vector<int>, long long> seen;
    qwalk::Rng rng(qwalk::derive_stream(o.seed, 1, 0));
    for (long long i = 0; i < draws; ++i)
      ++seen[qwalk::sample_recursive(table, rng).step_indices()];
    const double stat_rec = chi_square_stat(seen, cells, draws);
    t.check("recursive sampler uniform (chi-square)", stat_rec < threshold,
            "stat=" + fmt_double(stat_rec, 6) + " < " + fmt_double(threshold, 6));

    qwalk::SamplerConfig cfg;
    const auto plan = qwalk::SamplerPlan::make(fig, n, cfg);
    seen.clear();
    for (long long i = 0; i < draws; ++i)
      ++seen[plan.sample_one(o.seed, i).step_indices()];
    const double stat_rej = chi_square_stat(seen, cells, draws);
    t.check("rejection sampler uniform (chi-square)", stat_rej < threshold,
            "stat=" + fmt_double(stat_rej, 6) + " < " + fmt_double(threshold, 6));
  }

  // 5. Counts file round trip, and version gating.
  {
    const auto series = qwalk::quadrant_counts(fig, 12);
    std::stringstream buf;
    qwalk::write_series(buf, series, fig);
    const auto back = qwalk::read_series(buf, fig);
    t.check("counts file round-trips", back.values == series.values &&
                                           back.endpoint == series.endpoint);
    std::stringstream bad("# qwalk-counts v999 steps=" + fig.format() + " endpoint=any\n1\n");
    bool rejected = false;
    try {
      qwalk::read_series(bad, fig);
    } catch (const qwalk::Error& e) {
      rejected = e.kind() == qwalk::errc::io;
    }
    t.check("unknown counts version is rejected", rejected);
  }

  // 6. Determinism: same seed, same bytes, rejection and recursive.
  {
    qwalk::SamplerConfig cfg;
    const auto plan = qwalk::SamplerPlan::make(fig, 40, cfg);
    const auto a = plan.sample_many(7, 3);
    const auto b = plan.sample_many(7, 3);
    bool same = a.size() == b.size();
    for (size_t i = 0; same && i < a.size(); ++i) same = a[i] == b[i];
    cfg.parallel = 3;
    const auto plan_p = qwalk::SamplerPlan::make(fig, 40, cfg);
    const auto c = plan_p.sample_many(7, 3);
    for (size_t i = 0; same && i < a.size(); ++i) same = a[i] == c[i];
    t.check("sampling is reproducible (and independent of the batch width)", same);
  }

  // 7. Rational approximation basics.
  {
    const auto r = qwalk::rational_approx(0.6309298, 0.01);
    bool ok = r.p == 5 && r.q == 8;
    const double d = qwalk::choose_delta(99, qwalk::DeltaPolicy{});
    ok = ok && d == 1.0 / 100.0;
    t.check("rational approximation and exact delta policy", ok,
            "got " + std::to_string(r.p) + "/" + std::to_string(r.q));
  }

  t.out << (t.failures == 0 ? "self-test: all checks passed\n"
                            : "self-test: " + std::to_string(t.failures) + " check(s) FAILED\n");
  emit(o, t.out.str());
  return t.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform random generation of quarter-plane lattice walks"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd, bool needs_steps) {
    if (needs_steps)
      cmd->add_option("--steps", o.steps_text, "Step multiset, e.g. \"(1,0);(0,1);(-1,-1)\"")
          ->required();
    cmd->add_option("-o,--output", o.output, "Write output to this file instead of stdout");
  };

  auto* analyze = app.add_subcommand("analyze", "Classify a step set and report its tilt");
  add_common(analyze, true);
  analyze->add_option("--format", o.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--variant", o.variant, "Exponent variant (A or B)")
      ->check(CLI::IsMember({"A", "B", "a", "b"}));

  auto* count = app.add_subcommand("count", "Exact quadrant walk counts q_0..q_n");
  add_common(count, true);
  count->add_option("-n", o.n, "Walk length")->required();
  count->add_option("--endpoint", o.endpoint, "any, origin, or diagonal")
      ->check(CLI::IsMember({"any", "origin", "diagonal"}));
  count->add_option("--format", o.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  count->add_option("--cache", o.cache, "Counts file to reuse or create");

  auto* sample = app.add_subcommand("sample", "Draw uniformly random quadrant walks");
  add_common(sample, true);
  sample->add_option("-n", o.n, "Walk length")->required();
  sample->add_option("-k", o.k, "Number of walks");
  sample->add_option("--seed", o.seed, "Random seed (results are reproducible)");
  sample->add_option("--method", o.method, "auto, recursive, or rejection")
      ->check(CLI::IsMember({"auto", "recursive", "rejection"}));
  sample->add_option("--endpoint", o.endpoint, "any, origin, or diagonal")
      ->check(CLI::IsMember({"any", "origin", "diagonal"}));
  sample->add_option("--delta-policy", o.delta_policy,
                     "Slope approximation radius: exact, sqrt, or fixed:<delta>");
  sample->add_option("--slope-override", o.slope_override,
                     "Use this half-plane direction p/q instead of the optimum");
  sample->add_option("--format", o.format, "text, json, or svg")
      ->check(CLI::IsMember({"text", "json", "svg"}));
  sample->add_option("--variant", o.variant, "Exponent variant for predictions (A or B)")
      ->check(CLI::IsMember({"A", "B", "a", "b"}));
  sample->add_option("--mem-budget", o.mem_budget, "Table memory budget in bytes");
  sample->add_option("--trial-cap", o.trial_cap, "Give up after this many proposals");
  sample->add_option("--parallel", o.parallel, "Trial batch width (does not change results)");
  sample->add_option("--cache", o.cache, "Count-table file to reuse or create (recursive)");
  sample->add_flag("--timing", o.timing, "Report wall-clock time (off by default: timings vary)");

  auto* grammar = app.add_subcommand("grammar", "Show the proposal grammar for a step set");
  add_common(grammar, true);
  grammar->add_option("-n", o.n, "Length used to pick the approximation radius");
  grammar->add_option("--delta-policy", o.delta_policy,
                      "Slope approximation radius: exact, sqrt, or fixed:<delta>");
  grammar->add_option("--slope-override", o.slope_override, "Half-plane direction p/q");
  grammar->add_option("--format", o.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* render = app.add_subcommand("render", "Render a walk (dx,dy;dx,dy;...) as SVG");
  add_common(render, false);
  render->add_option("--input", o.input, "Read the walk from this file instead of stdin");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in statistical checks");
  add_common(selftest, false);
  selftest->add_option("--seed", o.seed, "Seed for the statistical checks");
  selftest->add_option("--inject", o.inject, "Fault injection (for testing the tests)")
      ->check(CLI::IsMember({"none", "grammar-drop", "grammar-weight"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(o);
    if (count->parsed()) return cmd_count(o);
    if (sample->parsed()) return cmd_sample(o);
    if (grammar->parsed()) return cmd_grammar(o);
    if (render->parsed()) return cmd_render(o);
    if (selftest->parsed()) return cmd_selftest(o);
    std::cerr << "no command\n";
    return 2;
  } catch (const qwalk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
