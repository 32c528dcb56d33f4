#include "qwalk/step_set.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk {
namespace {

std::string_view strip(std::string_view v) {
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
  return v;
}

int parse_coord(std::string_view tok, std::string_view whole_pair) {
  tok = strip(tok);
  if (tok.empty())
    fail(errc::parse, "step pair '" + std::string(whole_pair) + "': missing coordinate");
  std::size_t pos = 0;
  int value = 0;
  try {
    value = std::stoi(std::string(tok), &pos);
  } catch (const std::exception&) {
    fail(errc::parse, "step pair '" + std::string(whole_pair) + "': bad integer '" +
                          std::string(tok) + "'");
  }
  if (pos != tok.size())
    fail(errc::parse, "step pair '" + std::string(whole_pair) + "': trailing characters in '" +
                          std::string(tok) + "'");
  return value;
}

}  // namespace

StepSet StepSet::parse(std::string_view text, int coord_bound) {
  if (strip(text).empty()) fail(errc::parse, "empty step-set text");
  std::vector<Step> steps;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t semi = text.find(';', start);
    std::string_view item = text.substr(start, semi == std::string_view::npos ? std::string_view::npos
                                                                              : semi - start);
    std::string_view pair = strip(item);
    if (pair.empty()) fail(errc::parse, "empty step entry in step-set text");
    std::string_view inner = pair;
    if (inner.front() == '(') {
      if (inner.back() != ')')
        fail(errc::parse, "step pair '" + std::string(pair) + "': unbalanced parentheses");
      inner = strip(inner.substr(1, inner.size() - 2));
    }
    std::size_t comma = inner.find(',');
    if (comma == std::string_view::npos)
      fail(errc::parse, "step pair '" + std::string(pair) + "': expected 'dx,dy'");
    Step st{parse_coord(inner.substr(0, comma), pair), parse_coord(inner.substr(comma + 1), pair)};
    if (std::abs(st.dx) > coord_bound || std::abs(st.dy) > coord_bound)
      fail(errc::parse, "step pair '" + std::string(pair) + "': coordinate exceeds bound " +
                            std::to_string(coord_bound));
    steps.push_back(st);
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return StepSet(std::move(steps), coord_bound);
}

StepSet::StepSet(std::vector<Step> steps, int coord_bound) : steps_(std::move(steps)) {
  if (steps_.empty()) fail(errc::parse, "step set must be nonempty");
  for (const Step& st : steps_) {
    if (std::abs(st.dx) > coord_bound || std::abs(st.dy) > coord_bound)
      fail(errc::parse, "step (" + std::to_string(st.dx) + "," + std::to_string(st.dy) +
                            ") exceeds coordinate bound " + std::to_string(coord_bound));
    max_dx_up_ = std::max(max_dx_up_, st.dx);
    max_dy_up_ = std::max(max_dy_up_, st.dy);
    max_dx_down_ = std::max(max_dx_down_, -st.dx);
    max_dy_down_ = std::max(max_dy_down_, -st.dy);
  }
}

std::string StepSet::format() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (i) out << ';';
    out << '(' << steps_[i].dx << ',' << steps_[i].dy << ')';
  }
  return out.str();
}

StepSet StepSet::transposed() const {
  std::vector<Step> t;
  t.reserve(steps_.size());
  for (const Step& st : steps_) t.push_back({st.dy, st.dx});
  return StepSet(std::move(t));
}

bool StepSet::is_transpose_symmetric() const {
  auto key = [](const Step& s) { return std::pair<int, int>(s.dx, s.dy); };
  std::vector<std::pair<int, int>> a, b;
  for (const Step& st : steps_) {
    a.emplace_back(key(st));
    b.emplace_back(st.dy, st.dx);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::pair<long long, long long> StepSet::drift() const {
  long long dx = 0, dy = 0;
  for (const Step& st : steps_) {
    dx += st.dx;
    dy += st.dy;
  }
  return {dx, dy};
}

InventoryEval inventory_eval(const StepSet& s, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0))
    fail(errc::domain, "inventory_eval: requires x > 0 and y > 0");
  InventoryEval e;
  for (const Step& st : s.steps()) {
    double i = st.dx, j = st.dy;
    double term = std::pow(x, i) * std::pow(y, j);
    e.value += term;
    e.gx += i * term / x;
    e.gy += j * term / y;
    e.gxx += i * (i - 1) * term / (x * x);
    e.gyy += j * (j - 1) * term / (y * y);
    e.gxy += i * j * term / (x * y);
  }
  return e;
}

}  // namespace qwalk
