#pragma once

// Internal engine for the suffix-count dynamic program. One routine builds
// layer t from layer t-1; quadrant_counts streams two layers through it while
// suffix_counts retains every layer for sampling. Cells are raw GMP limb
// spans inside a per-layer arena: at n = 2000 the program touches ~10^9 cells,
// so per-cell heap boxes would dominate the runtime.

#include <cstdint>

#include "qwalk/exact_enum.hpp"
#include "qwalk/step_set.hpp"

namespace qwalk::detail {

struct LayerBounds {
  long long wx = 1, wy = 1;
};

// Stored widths for suffix layer t of a length-n run (see CountTable docs).
LayerBounds layer_bounds(const StepSet& s, int t, int n);

// Builds suffix layer t from `prev` (= layer t-1). `recycle` donates its
// buffers. Throws errc::resource if the new layer would push the cumulative
// total over `budget_remaining`.
CountTable::Layer build_next_layer(const StepSet& s, const CountTable::Layer& prev, int t, int n,
                                   CountTable::Layer&& recycle, std::size_t budget_remaining);

// Layer 0: a single cell holding 1 (every position admits one empty walk).
CountTable::Layer base_layer();

}  // namespace qwalk::detail
