#include "suffix_engine.hpp"

#include <algorithm>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk::detail {

LayerBounds layer_bounds(const StepSet& s, int t, int n) {
  // Reachability: in n-t steps from the origin, x <= (n-t)*a_up.
  // Saturation: with t steps remaining, a wall more than t*c_x away is
  // unreachable, so the count is constant in x beyond t*c_x.
  long long tt = t, rem = n - t;
  LayerBounds b;
  b.wx = std::min(rem * s.max_dx_up(), tt * s.max_dx_down()) + 1;
  b.wy = std::min(rem * s.max_dy_up(), tt * s.max_dy_down()) + 1;
  return b;
}

CountTable::Layer base_layer() {
  CountTable::Layer l;
  l.wx = l.wy = 1;
  l.limbs.assign(1, 1);
  l.off.assign(1, 0);
  l.sz.assign(1, 1);
  return l;
}

CountTable::Layer build_next_layer(const StepSet& s, const CountTable::Layer& prev, int t, int n,
                                   CountTable::Layer&& recycle, std::size_t budget_remaining) {
  const int nsteps = s.size();
  const LayerBounds nb = layer_bounds(s, t, n);
  const std::size_t ncells = static_cast<std::size_t>(nb.wx) * static_cast<std::size_t>(nb.wy);

  CountTable::Layer out = std::move(recycle);
  out.wx = nb.wx;
  out.wy = nb.wy;
  out.off.resize(ncells);
  out.sz.resize(ncells);

  // Per-step source displacement, evaluated in suffix orientation: the count
  // at (x,y) sums the previous layer at (x+dx, y+dy), clamped into storage.
  std::vector<int> sdx(nsteps), sdy(nsteps);
  for (int k = 0; k < nsteps; ++k) {
    sdx[static_cast<std::size_t>(k)] = s[k].dx;
    sdy[static_cast<std::size_t>(k)] = s[k].dy;
  }

  const std::uint32_t* psz = prev.sz.data();
  const std::uint64_t* poff = prev.off.data();
  const mp_limb_t* plimb = prev.limbs.data();
  const long long pwx = prev.wx, pwy = prev.wy;

  // Pass 1: capacity = 1 + max source size, accumulated into offsets.
  std::uint64_t total = 0;
  {
    std::size_t c = 0;
    for (long long y = 0; y < nb.wy; ++y) {
      for (long long x = 0; x < nb.wx; ++x, ++c) {
        std::uint32_t cap = 0;
        for (int k = 0; k < nsteps; ++k) {
          long long sx = x + sdx[static_cast<std::size_t>(k)];
          long long sy = y + sdy[static_cast<std::size_t>(k)];
          if (sx < 0 || sy < 0) continue;
          if (sx >= pwx) sx = pwx - 1;
          if (sy >= pwy) sy = pwy - 1;
          cap = std::max(cap, psz[static_cast<std::size_t>(sy * pwx + sx)]);
        }
        out.off[c] = total;
        out.sz[c] = cap;  // provisional: holds capacity-1 source size
        total += cap ? cap + 1u : 0u;
      }
    }
  }

  std::size_t layer_bytes = total * sizeof(mp_limb_t) + ncells * 12;
  if (layer_bytes > budget_remaining)
    fail(errc::resource, "suffix-count table exceeds memory budget (layer " + std::to_string(t) +
                             " needs " + std::to_string(layer_bytes) + " bytes beyond budget)");

  out.limbs.resize(total);
  mp_limb_t* olimb = out.limbs.data();

  // Pass 2: accumulate sources with raw limb adds. Values stay normalized
  // (no high zero limb), so sizes read back exactly.
  std::size_t c = 0;
  for (long long y = 0; y < nb.wy; ++y) {
    for (long long x = 0; x < nb.wx; ++x, ++c) {
      if (out.sz[c] == 0) continue;
      mp_limb_t* acc = olimb + out.off[c];
      std::uint32_t cur = 0;
      for (int k = 0; k < nsteps; ++k) {
        long long sx = x + sdx[static_cast<std::size_t>(k)];
        long long sy = y + sdy[static_cast<std::size_t>(k)];
        if (sx < 0 || sy < 0) continue;
        if (sx >= pwx) sx = pwx - 1;
        if (sy >= pwy) sy = pwy - 1;
        std::size_t sidx = static_cast<std::size_t>(sy * pwx + sx);
        std::uint32_t ssz = psz[sidx];
        if (ssz == 0) continue;
        const mp_limb_t* src = plimb + poff[sidx];
        if (cur == 0) {
          mpn_copyi(acc, src, ssz);
          cur = ssz;
        } else if (ssz <= cur) {
          mp_limb_t carry = mpn_add(acc, acc, cur, src, ssz);
          if (carry) acc[cur++] = carry;
        } else {
          mp_limb_t carry = mpn_add(acc, src, ssz, acc, cur);
          cur = ssz;
          if (carry) acc[cur++] = carry;
        }
      }
      out.sz[c] = cur;
    }
  }
  return out;
}

}  // namespace qwalk::detail
