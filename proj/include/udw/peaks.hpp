#pragma once

// Peak location on sampled curves: interior local maxima of a grid, and golden-section
// refinement of a bracketed maximum.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace udw::peaks {

struct Peak {
  double x = 0.0;
  double value = 0.0;
};

/// Indices i with y[i-1] < y[i] >= y[i+1] (strict on the left so plateaus count once).
inline std::vector<std::size_t> local_maxima(std::span<const double> y) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) out.push_back(i);
  return out;
}

inline std::size_t argmax(std::span<const double> y) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] > y[best]) best = i;
  return best;
}

/// Maximize a unimodal f on [lo, hi].
template <class F>
Peak golden_section_max(F&& f, double lo, double hi, double tol = 1e-10) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

/// Coarse scan with the given step, then golden-section refinement around the best sample.
template <class F>
Peak argmax_scan(F&& f, double lo, double hi, double step, double tol = 1e-10) {
  const int m = std::max(2, static_cast<int>(std::ceil((hi - lo) / step)) + 1);
  std::vector<double> xs(m), ys(m);
  for (int i = 0; i < m; ++i) {
    xs[i] = lo + (hi - lo) * i / (m - 1);
    ys[i] = f(xs[i]);
  }
  const std::size_t i = argmax(ys);
  const double a = xs[i == 0 ? 0 : i - 1], b = xs[i + 1 == xs.size() ? i : i + 1];
  Peak p = golden_section_max(f, a, b, tol);
  if (ys[i] > p.value) p = {xs[i], ys[i]};
  return p;
}

}  // namespace udw::peaks
