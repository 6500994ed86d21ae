#pragma once

// Globally adaptive 21-point Gauss-Kronrod quadrature. Nodes are interior to every panel, so
// integrands are never sampled at the end points; this is what lets us integrate k^{-1/2}-type
// singularities and stay strictly above an infrared cutoff.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "udw/common.hpp"

namespace udw::quad {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

/// Thrown when the panel budget runs out before the tolerance is met. Carries the best estimate.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadratureResult best)
      : std::runtime_error(what), best_(best) {}
  const QuadratureResult& best() const noexcept { return best_; }

 private:
  QuadratureResult best_;
};

inline constexpr double kDefaultRelTol = 1e-9;
inline constexpr int kMaxPanels = 1 << 15;

/// Process-wide default, overridable with UDW_DEFAULT_TOL.
inline double default_rel_tol() {
  static const double tol = [] {
    if (const char* env = std::getenv("UDW_DEFAULT_TOL")) {
      char* end = nullptr;
      double v = std::strtod(env, &end);
      if (end != env && v > 0.0 && v < 1.0) return v;
    }
    return kDefaultRelTol;
  }();
  return tol;
}

namespace detail {

// Kronrod abscissae (descending), Kronrod weights, and the weights of the embedded 10-point
// Gauss rule at xgk[1], xgk[3], ..., xgk[9].
inline constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452815, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk21(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * wgk[10], resg = 0.0, resabs = std::abs(resk);
  std::array<double, 21> fv;
  fv[10] = fc;
  for (int j = 0; j < 10; ++j) {
    const double dx = h * xgk[j];
    const double f1 = f(c - dx), f2 = f(c + dx);
    fv[j] = f1;
    fv[20 - j] = f2;
    resk += wgk[j] * (f1 + f2);
    resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * resk;
  double resasc = wgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) resasc += wgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[20 - j] - mean));
  const double ah = std::abs(h);
  resk *= h;
  resabs *= ah;
  resasc *= ah;
  double err = std::abs(resk - resg * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  if (!std::isfinite(resk)) err = std::numeric_limits<double>::infinity();
  return {a, b, resk, err};
}

inline void check_args(double a, double b, double rel_tol) {
  udw::detail::require(std::isfinite(a) && std::isfinite(b), "quadrature: limits must be finite");
  udw::detail::require(rel_tol > 0.0 && rel_tol < 1.0, "quadrature: rel_tol must lie in (0,1)");
}

}  // namespace detail

/// Integrates f over the union of consecutive panels [pts[0],pts[1]], ..., refining the panel
/// with the largest error first until sum(err) <= max(abs_tol, rel_tol*|I|).
template <class F>
QuadratureResult integrate_breakpoints(F&& f, std::span<const double> pts, double rel_tol = default_rel_tol(),
                                       double abs_tol = 0.0, int max_panels = kMaxPanels) {
  udw::detail::require(pts.size() >= 2, "quadrature: need at least two break points");
  for (double p : pts) detail::check_args(p, p, rel_tol);
  std::priority_queue<detail::Panel> heap;
  double total = 0.0, total_err = 0.0;
  long evals = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] == pts[i]) continue;
    auto p = detail::gk21(f, pts[i], pts[i + 1]);
    evals += 21;
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  auto converged = [&] { return total_err <= std::max(abs_tol, rel_tol * std::abs(total)); };
  while (!heap.empty() && !converged()) {
    if (static_cast<int>(heap.size()) >= max_panels || !std::isfinite(total)) {
      throw QuadratureError("quadrature did not converge (estimate " + std::to_string(total) + " +- " +
                                std::to_string(total_err) + ")",
                            {total, total_err, evals});
    }
    detail::Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid == worst.a || mid == worst.b) break;  // cannot resolve further in double precision
    heap.pop();
    auto left = detail::gk21(f, worst.a, mid);
    auto right = detail::gk21(f, mid, worst.b);
    evals += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Resum to shed accumulated cancellation in the running totals.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  if (!(total_err <= std::max(abs_tol, rel_tol * std::abs(total)) * 1.0001 + 1e-300))
    throw QuadratureError("quadrature stalled at double-precision resolution", {total, total_err, evals});
  return {total, total_err, evals};
}

template <class F>
QuadratureResult integrate_finite(F&& f, double a, double b, double rel_tol = default_rel_tol()) {
  detail::check_args(a, b, rel_tol);
  const std::array<double, 2> pts{a, b};
  return integrate_breakpoints(f, pts, rel_tol);
}

/// Integrates over [a, inf) through x = a + s(1-t)/t, t in (0,1]. `scale` s should be about
/// the width of the region where f lives.
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, double a, double rel_tol = default_rel_tol(), double scale = 1.0,
                                         double abs_tol = 0.0) {
  detail::check_args(a, a, rel_tol);
  udw::detail::require(scale > 0.0, "quadrature: scale must be positive");
  auto g = [&](double t) {
    const double x = a + scale * (1.0 - t) / t;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v * scale / (t * t);
  };
  const std::array<double, 2> pts{0.0, 1.0};
  return integrate_breakpoints(g, pts, rel_tol, abs_tol);
}

/// Integrates over [a, inf) where the integrand is concentrated near the given hint points.
/// The finite part [a, last hint] is split at every hint; the tail uses the algebraic map.
template <class F>
QuadratureResult integrate_with_hints(F&& f, double a, std::vector<double> hints, double tail_scale,
                                      double rel_tol = default_rel_tol()) {
  std::vector<double> pts{a};
  std::sort(hints.begin(), hints.end());
  for (double h : hints)
    if (h > pts.back()) pts.push_back(h);
  QuadratureResult head{};
  if (pts.size() >= 2) head = integrate_breakpoints(f, std::span<const double>(pts), rel_tol * 0.5);
  const double tail_start = pts.back();
  auto tail = integrate_semi_infinite(f, tail_start, rel_tol * 0.5, tail_scale, 0.5 * rel_tol * std::abs(head.value));
  const double value = head.value + tail.value;
  return {value, head.error_estimate + tail.error_estimate, head.evaluations + tail.evaluations};
}

}  // namespace udw::quad
