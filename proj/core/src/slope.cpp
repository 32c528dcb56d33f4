#include "qwalk/slope.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "qwalk/errors.hpp"

namespace qwalk {
namespace {

struct Eval2 {
  double f, gu, gv, huu, huv, hvv;
};

// S(e^u, e^v) and derivatives in (u,v). A positive sum of exponentials of
// affine forms, hence smooth and convex; Newton with damping is globally safe.
Eval2 eval_log_coords(const StepSet& s, double u, double v) {
  Eval2 e{0, 0, 0, 0, 0, 0};
  for (const Step& st : s.steps()) {
    double i = st.dx, j = st.dy;
    double t = std::exp(i * u + j * v);
    e.f += t;
    e.gu += i * t;
    e.gv += j * t;
    e.huu += i * i * t;
    e.huv += i * j * t;
    e.hvv += j * j * t;
  }
  return e;
}

constexpr double kDivergenceRadius = 60.0;  // e^60 overflows any sane model scale
constexpr int kMaxIterations = 200;

}  // namespace

std::optional<CriticalPoint> critical_point(const StepSet& s) {
  double u = 0.0, v = 0.0;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    Eval2 e = eval_log_coords(s, u, v);
    double gnorm = std::hypot(e.gu, e.gv);
    if (gnorm <= 1e-13 * e.f) {
      double alpha = std::exp(u), beta = std::exp(v);
      InventoryEval inv = inventory_eval(s, alpha, beta);
      return CriticalPoint{alpha, beta, inv.value, std::hypot(inv.gx, inv.gy)};
    }
    if (std::max(std::abs(u), std::abs(v)) > kDivergenceRadius) return std::nullopt;

    // Solve H d = -g; regularize if the Hessian is (near-)rank-deficient,
    // which happens for degenerate models living on a line of directions.
    double det = e.huu * e.hvv - e.huv * e.huv;
    double du, dv;
    if (det > 1e-12 * e.huu * e.hvv || det > 1e-300) {
      du = (-e.gu * e.hvv + e.gv * e.huv) / det;
      dv = (-e.gv * e.huu + e.gu * e.huv) / det;
    } else {
      double lambda = 1e-9 * (e.huu + e.hvv) + 1e-300;
      double huu = e.huu + lambda, hvv = e.hvv + lambda;
      double rdet = huu * hvv - e.huv * e.huv;
      du = (-e.gu * hvv + e.gv * e.huv) / rdet;
      dv = (-e.gv * huu + e.gu * e.huv) / rdet;
    }
    // Armijo backtracking keeps the damped iteration monotone.
    double slope = e.gu * du + e.gv * dv;
    double step = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      Eval2 trial = eval_log_coords(s, u + step * du, v + step * dv);
      if (trial.f <= e.f + 0.25 * step * slope || !(trial.f > 0)) break;
      step *= 0.5;
    }
    u += step * du;
    v += step * dv;
  }
  fail(errc::numeric, "critical_point: no convergence or divergence verdict after " +
                          std::to_string(kMaxIterations) + " iterations");
}

namespace {

// Exact-enough rationality probe: m is declared rational when some p/q with
// q <= 64 sits within 1e-9 (relative). A false "irrational" only costs a
// detour through the approximation path, never correctness.
bool detect_rational(double m, long long& p_out, long long& q_out) {
  double tol = 1e-9 * std::max(1.0, std::abs(m));
  for (long long q = 1; q <= 64; ++q) {
    long long p = std::llround(m * static_cast<double>(q));
    if (p < 0) p = 0;
    if (std::abs(m - static_cast<double>(p) / static_cast<double>(q)) < tol) {
      long long g = std::gcd(p, q);
      p_out = p / g;
      q_out = q / g;
      return true;
    }
  }
  return false;
}

}  // namespace

SlopeInfo optimal_slope(const StepSet& s) {
  SlopeInfo info;
  info.critical = critical_point(s);
  if (!info.critical) {
    // Singular model: no positive critical point; fall back to slope 0, i.e.
    // the half-plane y >= 0.
    info.kind = SlopeKind::boundary;
    info.slope_m = 0.0;
    info.theta_star = 0.0;
    info.p = 0;
    info.q = 1;
    info.rho_inv = std::numeric_limits<double>::quiet_NaN();
    return info;
  }

  const CriticalPoint& cp = *info.critical;
  info.rho_inv = cp.s_value;

  double ln_a = std::log(cp.alpha), ln_b = std::log(cp.beta);
  if (s.is_transpose_symmetric() || (std::abs(ln_a) < 1e-12 && std::abs(ln_b) < 1e-12)) {
    // Transpose symmetry forces the diagonal exactly. A driftless model
    // (alpha = beta = 1, so ln/ln is 0/0) needs no tilt at all and every
    // direction is equally optimal; the diagonal is the canonical pick.
    info.kind = SlopeKind::rational;
    info.slope_m = 1.0;
    info.theta_star = std::atan(1.0);
    info.p = 1;
    info.q = 1;
  } else if (std::abs(ln_b) < 1e-12) {
    // beta = 1: the optimal direction is the x-axis (m = infinity).
    info.kind = SlopeKind::boundary;
    info.slope_m = std::numeric_limits<double>::infinity();
    info.theta_star = std::asin(1.0);  // pi/2
    info.p = 1;
    info.q = 0;
  } else {
    double m = ln_a / ln_b;
    if (m < 0.0) {
      // The optimum over [0, pi/2] sits on the boundary; clamp to slope 0.
      info.kind = SlopeKind::boundary;
      info.slope_m = 0.0;
      info.theta_star = 0.0;
      info.p = 0;
      info.q = 1;
    } else {
      info.slope_m = m;
      info.theta_star = std::atan(m);
      long long p = 0, q = 1;
      if (detect_rational(m, p, q)) {
        info.kind = SlopeKind::rational;
        info.p = p;
        info.q = q;
      } else {
        info.kind = SlopeKind::irrational;
        info.p = 0;
        info.q = 0;
      }
    }
  }

  auto drift = s.drift();
  if (drift.first < 0 && drift.second < 0) {
    info.r_variant_a = exponent_r(s, ExponentVariant::A);
    info.r_variant_b = exponent_r(s, ExponentVariant::B);
  }
  return info;
}

double exponent_r(const StepSet& s, ExponentVariant variant) {
  auto drift = s.drift();
  if (!(drift.first < 0 && drift.second < 0))
    fail(errc::argument, "exponent_r: defined for reluctant step sets only");
  std::optional<CriticalPoint> cp = critical_point(s);
  if (!cp) fail(errc::domain, "exponent_r: model is singular (no positive critical point)");

  InventoryEval e = inventory_eval(s, cp->alpha, cp->beta);
  if (!(e.gxx > 0.0) || !(e.gyy > 0.0))
    fail(errc::domain, "exponent_r: degenerate second derivatives at the critical point");
  double c = e.gxy / std::sqrt(e.gxx * e.gyy);
  if (!(std::abs(c) < 1.0))
    fail(errc::domain, "exponent_r: correlation |c| >= 1 at the critical point");
  double a = (variant == ExponentVariant::A) ? std::acos(-c) : std::acos(c);
  return 1.0 + std::acos(-1.0) / a;
}

}  // namespace qwalk
