#include "qwalk/exact_enum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwalk/errors.hpp"
#include "suffix_engine.hpp"

namespace qwalk {

std::vector<std::pair<long long, long long>> Walk::positions() const {
  std::vector<std::pair<long long, long long>> pos;
  pos.reserve(idx_.size() + 1);
  long long x = 0, y = 0;
  pos.emplace_back(x, y);
  for (int k : idx_) {
    x += (*set_)[k].dx;
    y += (*set_)[k].dy;
    pos.emplace_back(x, y);
  }
  return pos;
}

std::size_t CountTable::Layer::bytes() const {
  return limbs.size() * sizeof(mp_limb_t) + off.size() * sizeof(std::uint64_t) +
         sz.size() * sizeof(std::uint32_t);
}

CountTable::CountTable(StepSet set, std::vector<Layer> layers)
    : set_(std::move(set)), layers_(std::move(layers)) {
  if (layers_.empty()) fail(errc::argument, "CountTable: needs at least the base layer");
}

namespace {

BigInt cell_value(const CountTable::Layer& l, long long x, long long y) {
  if (x >= l.wx) x = l.wx - 1;
  if (y >= l.wy) y = l.wy - 1;
  std::size_t idx = static_cast<std::size_t>(y * l.wx + x);
  std::uint32_t sz = l.sz[idx];
  BigInt v;
  if (sz)
    mpz_import(v.get_mpz_t(), sz, -1 /*LSW first*/, sizeof(mp_limb_t), 0, 0,
               l.limbs.data() + l.off[idx]);
  return v;
}

}  // namespace

BigInt CountTable::suffix_count(int n_rem, long long x, long long y) const {
  if (n_rem < 0 || n_rem > n())
    fail(errc::argument, "suffix_count: layer index out of range");
  if (x < 0 || y < 0) fail(errc::argument, "suffix_count: position must be in the quadrant");
  return cell_value(layers_[static_cast<std::size_t>(n_rem)], x, y);
}

std::size_t CountTable::memory_bytes() const {
  std::size_t total = 0;
  for (const Layer& l : layers_) total += l.bytes();
  return total;
}

CountTable suffix_counts(const StepSet& s, int n, std::size_t memory_budget) {
  if (n < 0) fail(errc::argument, "suffix_counts: n must be >= 0");
  std::vector<CountTable::Layer> layers;
  layers.reserve(static_cast<std::size_t>(n) + 1);
  layers.push_back(detail::base_layer());
  std::size_t used = layers.back().bytes();
  for (int t = 1; t <= n; ++t) {
    std::size_t left = memory_budget > used ? memory_budget - used : 0;
    layers.push_back(detail::build_next_layer(s, layers.back(), t, n, CountTable::Layer{}, left));
    used += layers.back().bytes();
  }
  return CountTable(s, std::move(layers));
}

std::size_t estimate_table_bytes(const StepSet& s, int n) {
  double log2_step = std::log2(static_cast<double>(std::max(2, s.size())));
  double total = 0;
  for (int t = 0; t <= n; ++t) {
    detail::LayerBounds b = detail::layer_bounds(s, t, n);
    // 0.45: measured mean cell size relative to the layer maximum.
    double cell_limbs = std::max(1.0, 1.0 + 0.45 * t * log2_step / 64.0);
    total += static_cast<double>(b.wx) * static_cast<double>(b.wy) * (12.0 + 8.0 * cell_limbs);
  }
  if (total > 9e18) return ~std::size_t{0};
  return static_cast<std::size_t>(total);
}

namespace {

CountSeries forward_counts(const StepSet& s, int n_max, Endpoint endpoint) {
  // Forward DP on walk endpoints: counts[t](x,y) = walks of length t from the
  // origin ending at (x,y). For endpoint=origin, positions that cannot return
  // to the origin in the remaining steps are pruned.
  CountSeries out;
  out.endpoint = endpoint;
  out.values.reserve(static_cast<std::size_t>(n_max) + 1);

  auto widths = [&](int t) {
    long long wx = static_cast<long long>(t) * s.max_dx_up();
    long long wy = static_cast<long long>(t) * s.max_dy_up();
    if (endpoint == Endpoint::origin) {
      wx = std::min(wx, static_cast<long long>(n_max - t) * s.max_dx_down());
      wy = std::min(wy, static_cast<long long>(n_max - t) * s.max_dy_down());
    }
    return std::pair<long long, long long>(wx + 1, wy + 1);
  };

  std::vector<BigInt> prev(1, BigInt(1)), cur;
  long long pwx = 1, pwy = 1;
  auto read_value = [&](long long wx, long long wy, const std::vector<BigInt>& layer) {
    if (endpoint == Endpoint::origin) return layer[0];
    BigInt sum = 0;
    if (endpoint == Endpoint::diagonal) {
      for (long long d = 0; d < std::min(wx, wy); ++d) sum += layer[static_cast<std::size_t>(d * wx + d)];
    } else {
      for (const BigInt& v : layer) sum += v;
    }
    return sum;
  };

  out.values.push_back(read_value(pwx, pwy, prev));
  for (int t = 1; t <= n_max; ++t) {
    auto [wx, wy] = widths(t);
    cur.assign(static_cast<std::size_t>(wx) * static_cast<std::size_t>(wy), BigInt(0));
    for (long long y = 0; y < wy; ++y) {
      for (long long x = 0; x < wx; ++x) {
        BigInt& acc = cur[static_cast<std::size_t>(y * wx + x)];
        for (int k = 0; k < s.size(); ++k) {
          long long sx = x - s[k].dx, sy = y - s[k].dy;
          if (sx < 0 || sy < 0 || sx >= pwx || sy >= pwy) continue;
          acc += prev[static_cast<std::size_t>(sy * pwx + sx)];
        }
      }
    }
    prev.swap(cur);
    pwx = wx;
    pwy = wy;
    out.values.push_back(read_value(pwx, pwy, prev));
  }
  return out;
}

}  // namespace

CountSeries quadrant_counts(const StepSet& s, int n_max, Endpoint endpoint) {
  if (n_max < 0) fail(errc::argument, "quadrant_counts: n_max must be >= 0");
  if (endpoint != Endpoint::any) return forward_counts(s, n_max, endpoint);

  // Meander counts come from the suffix recurrence: q_t = g_t(0,0), streamed
  // with two layers so only Theta(n^2) numbers are alive at a time.
  CountSeries out;
  out.endpoint = Endpoint::any;
  out.values.reserve(static_cast<std::size_t>(n_max) + 1);
  CountTable::Layer prev = detail::base_layer(), spare;
  out.values.push_back(cell_value(prev, 0, 0));
  for (int t = 1; t <= n_max; ++t) {
    CountTable::Layer cur =
        detail::build_next_layer(s, prev, t, n_max, std::move(spare), ~std::size_t{0});
    out.values.push_back(cell_value(cur, 0, 0));
    spare = std::move(prev);
    prev = std::move(cur);
  }
  return out;
}

std::vector<Walk> brute_force_walks(const StepSet& s, int n, Region region) {
  if (n < 0) fail(errc::argument, "brute_force_walks: n must be >= 0");
  if (n > 12) fail(errc::argument, "brute_force_walks: n > 12 refused (exponential cost)");

  auto inside = [&](long long x, long long y) {
    if (region.kind == Region::Kind::quadrant) return x >= 0 && y >= 0;
    return region.p * x + region.q * y >= 0;
  };

  std::vector<Walk> out;
  std::vector<int> idx;
  long long x = 0, y = 0;
  // Depth-first in step-index order emits walks in lexicographic order.
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == n) {
      out.emplace_back(&s, idx);
      return;
    }
    for (int k = 0; k < s.size(); ++k) {
      long long nx = x + s[k].dx, ny = y + s[k].dy;
      if (!inside(nx, ny)) continue;
      idx.push_back(k);
      x = nx;
      y = ny;
      self(self, depth + 1);
      x = nx - s[k].dx;
      y = ny - s[k].dy;
      idx.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

Walk sample_recursive(const CountTable& table, Rng& rng, BigRat* chosen_probability) {
  const StepSet& s = table.step_set();
  const int n = table.n();
  if (table.suffix_count(n, 0, 0) == 0)
    fail(errc::no_sample, "sample_recursive: no walk of length " + std::to_string(n) + " exists");

  if (chosen_probability) *chosen_probability = 1;
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(n));
  long long x = 0, y = 0;
  for (int nr = n; nr >= 1; --nr) {
    const BigInt total = table.suffix_count(nr, x, y);
    BigInt u = uniform_below(total, rng);
    bool chosen = false;
    for (int k = 0; k < s.size() && !chosen; ++k) {
      long long sx = x + s[k].dx, sy = y + s[k].dy;
      if (sx < 0 || sy < 0) continue;
      BigInt w = table.suffix_count(nr - 1, sx, sy);
      if (u < w) {
        idx.push_back(k);
        x = sx;
        y = sy;
        chosen = true;
        if (chosen_probability) {
          *chosen_probability *= BigRat(w, total);
          chosen_probability->canonicalize();
        }
      } else {
        u -= w;
      }
    }
    if (!chosen)
      fail(errc::numeric, "sample_recursive: suffix counts inconsistent with recurrence");
  }
  return Walk(&table.step_set(), std::move(idx));
}

double estimate_growth(const CountSeries& series) {
  int nmax = series.n_max();
  if (nmax < 10) fail(errc::argument, "estimate_growth: need at least 10 trailing terms");
  for (int i = nmax - 9; i <= nmax; ++i)
    if (series.values[static_cast<std::size_t>(i)] == 0)
      fail(errc::triviality, "estimate_growth: zero count in the series tail");
  return std::exp(log_of(series.values[static_cast<std::size_t>(nmax)]) -
                  log_of(series.values[static_cast<std::size_t>(nmax) - 1]));
}

double fit_subexp_exponent(const CountSeries& series, double rho_inv, int n_lo, int n_hi) {
  if (!(rho_inv > 0)) fail(errc::argument, "fit_subexp_exponent: rho_inv must be positive");
  if (n_lo < 1 || n_hi > series.n_max() || n_hi - n_lo + 1 < 5)
    fail(errc::argument, "fit_subexp_exponent: window must lie in the series and span >= 5 points");
  double log_rho = std::log(rho_inv);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int t = n_lo; t <= n_hi; ++t) {
    const BigInt& v = series.values[static_cast<std::size_t>(t)];
    if (v == 0) fail(errc::argument, "fit_subexp_exponent: zero count inside the fit window");
    double lx = std::log(static_cast<double>(t));
    double ly = log_of(v) - t * log_rho;
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  double denom = count * sxx - sx * sx;
  if (!(std::abs(denom) > 0)) fail(errc::argument, "fit_subexp_exponent: degenerate window");
  double slope = (count * sxy - sx * sy) / denom;
  return -slope;
}

}  // namespace qwalk
