#pragma once

#include <iosfwd>
#include <string>

#include "qwalk/exact_enum.hpp"

namespace qwalk {

// Text formats (stable external contracts):
//   counts:  "# qwalk-counts v1 steps=<canonical> endpoint=<any|origin|diagonal>"
//            followed by one decimal integer per line, q_0 first.
//   table:   "# qwalk-table v1", then "<n> <a_up> <b_up> steps=<canonical>",
//            then every layer n_rem = 0..n in storage order (rows by y, cells
//            by x), one decimal integer per line.
// Loading re-derives the layer geometry from the step set and validates the
// version line, the declared dimensions, and the all-ones base layer.

std::string endpoint_name(Endpoint e);
Endpoint parse_endpoint(const std::string& name);

void write_series(std::ostream& out, const CountSeries& series, const StepSet& s);
CountSeries read_series(std::istream& in, const StepSet& expected_steps);

void write_table(std::ostream& out, const CountTable& table);
CountTable read_table(std::istream& in, const StepSet& expected_steps,
                      std::size_t memory_budget = kDefaultMemoryBudget);

}  // namespace qwalk
