#include <vector>

#include "qwalk/errors.hpp"
#include "qwalk/slope.hpp"
#include "qwalk/step_set.hpp"

namespace qwalk {

Classification classify(const StepSet& s, int horizon) {
  if (horizon < 1) fail(errc::argument, "classify: horizon must be >= 1");
  Classification c;
  c.drift = s.drift();
  c.reluctant = c.drift.first < 0 && c.drift.second < 0;
  c.singular = !critical_point(s).has_value();

  // Triviality scan: walks exist at length n iff some position is reachable
  // in exactly n quadrant-confined steps. Counts are monotone-absorbing at
  // zero (a prefix of a walk is a walk), so scanning up to `horizon` suffices.
  int wx = horizon * s.max_dx_up() + 1;
  int wy = horizon * s.max_dy_up() + 1;
  std::vector<char> cur(static_cast<std::size_t>(wx) * wy, 0), nxt;
  cur[0] = 1;  // position (0,0) at n = 0
  bool any = true;
  for (int n = 1; n <= horizon && any; ++n) {
    nxt.assign(cur.size(), 0);
    any = false;
    for (int y = 0; y < wy; ++y) {
      for (int x = 0; x < wx; ++x) {
        if (!cur[static_cast<std::size_t>(y) * wx + x]) continue;
        for (const Step& st : s.steps()) {
          int nx = x + st.dx, ny = y + st.dy;
          if (nx < 0 || ny < 0 || nx >= wx || ny >= wy) continue;
          nxt[static_cast<std::size_t>(ny) * wx + nx] = 1;
          any = true;
        }
      }
    }
    cur.swap(nxt);
  }
  c.trivial = !any;
  return c;
}

}  // namespace qwalk
