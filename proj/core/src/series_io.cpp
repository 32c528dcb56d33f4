#include "qwalk/series_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "qwalk/errors.hpp"
#include "suffix_engine.hpp"

namespace qwalk {
namespace {

constexpr const char* kCountsMagic = "# qwalk-counts v1";
constexpr const char* kTableMagic = "# qwalk-table v1";

std::string read_line_or_fail(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) fail(errc::io, std::string("truncated file: expected ") + what);
  return line;
}

BigInt parse_count_line(const std::string& line, const char* what) {
  BigInt v;
  if (line.empty() || mpz_set_str(v.get_mpz_t(), line.c_str(), 10) != 0 || v < 0)
    fail(errc::io, std::string(what) + ": bad count line '" + line + "'");
  return v;
}

}  // namespace

std::string endpoint_name(Endpoint e) {
  switch (e) {
    case Endpoint::any: return "any";
    case Endpoint::origin: return "origin";
    case Endpoint::diagonal: return "diagonal";
  }
  return "any";
}

Endpoint parse_endpoint(const std::string& name) {
  if (name == "any") return Endpoint::any;
  if (name == "origin") return Endpoint::origin;
  if (name == "diagonal") return Endpoint::diagonal;
  fail(errc::parse, "unknown endpoint '" + name + "' (expected any|origin|diagonal)");
}

void write_series(std::ostream& out, const CountSeries& series, const StepSet& s) {
  out << kCountsMagic << " steps=" << s.format() << " endpoint=" << endpoint_name(series.endpoint)
      << '\n';
  for (const BigInt& v : series.values) out << v.get_str(10) << '\n';
}

CountSeries read_series(std::istream& in, const StepSet& expected_steps) {
  std::string header = read_line_or_fail(in, "counts header");
  std::istringstream hs(header);
  std::string h1, h2, h3, steps_field, endpoint_field;
  hs >> h1 >> h2 >> h3 >> steps_field >> endpoint_field;
  if (h1 + " " + h2 + " " + h3 != kCountsMagic)
    fail(errc::io, "counts file: version header mismatch ('" + header + "')");
  if (steps_field.rfind("steps=", 0) != 0 || endpoint_field.rfind("endpoint=", 0) != 0)
    fail(errc::io, "counts file: malformed header fields");
  if (steps_field.substr(6) != expected_steps.format())
    fail(errc::io, "counts file: step set mismatch (file has " + steps_field.substr(6) + ")");

  CountSeries series;
  series.endpoint = parse_endpoint(endpoint_field.substr(9));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    series.values.push_back(parse_count_line(line, "counts file"));
  }
  if (series.values.empty()) fail(errc::io, "counts file: no values");
  return series;
}

void write_table(std::ostream& out, const CountTable& table) {
  const StepSet& s = table.step_set();
  out << kTableMagic << '\n';
  out << table.n() << ' ' << s.max_dx_up() << ' ' << s.max_dy_up() << " steps=" << s.format()
      << '\n';
  for (int nr = 0; nr <= table.n(); ++nr) {
    const CountTable::Layer& l = table.layer(nr);
    for (long long y = 0; y < l.wy; ++y)
      for (long long x = 0; x < l.wx; ++x)
        out << table.suffix_count(nr, x, y).get_str(10) << '\n';
  }
}

CountTable read_table(std::istream& in, const StepSet& expected_steps,
                      std::size_t memory_budget) {
  std::string magic = read_line_or_fail(in, "table header");
  if (magic != kTableMagic) fail(errc::io, "table file: version header mismatch ('" + magic + "')");
  std::string meta = read_line_or_fail(in, "table dimensions");
  std::istringstream ms(meta);
  int n = -1, a = -1, b = -1;
  std::string steps_field;
  ms >> n >> a >> b >> steps_field;
  if (n < 0 || a < 0 || b < 0) fail(errc::io, "table file: bad dimension line '" + meta + "'");
  if (a != expected_steps.max_dx_up() || b != expected_steps.max_dy_up())
    fail(errc::io, "table file: step bounds do not match the requested step set");
  if (steps_field.rfind("steps=", 0) == 0 && steps_field.substr(6) != expected_steps.format())
    fail(errc::io, "table file: step set mismatch (file has " + steps_field.substr(6) + ")");

  std::vector<CountTable::Layer> layers;
  std::size_t used = 0;
  for (int nr = 0; nr <= n; ++nr) {
    detail::LayerBounds bd = detail::layer_bounds(expected_steps, nr, n);
    CountTable::Layer l;
    l.wx = bd.wx;
    l.wy = bd.wy;
    std::size_t ncells = static_cast<std::size_t>(l.wx) * static_cast<std::size_t>(l.wy);
    l.off.resize(ncells);
    l.sz.resize(ncells);
    for (std::size_t c = 0; c < ncells; ++c) {
      BigInt v = parse_count_line(read_line_or_fail(in, "table cell"), "table file");
      if (nr == 0 && v != 1) fail(errc::io, "table file: base layer must be all ones");
      std::size_t vs = mpz_size(v.get_mpz_t());
      l.off[c] = l.limbs.size();
      l.sz[c] = static_cast<std::uint32_t>(vs);
      for (std::size_t i = 0; i < vs; ++i)
        l.limbs.push_back(mpz_getlimbn(v.get_mpz_t(), static_cast<mp_size_t>(i)));
    }
    used += l.bytes();
    if (used > memory_budget)
      fail(errc::resource, "table file exceeds memory budget while loading layer " +
                               std::to_string(nr));
    layers.push_back(std::move(l));
  }
  return CountTable(expected_steps, std::move(layers));
}

}  // namespace qwalk
