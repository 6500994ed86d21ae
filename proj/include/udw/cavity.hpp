#pragma once

// Dirichlet box of side L: one-particle excitation probability with Gaussian switching, and
// the (1+1)D energy-deposit spectra of an initially excited detector.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "udw/common.hpp"
#include "udw/specfun.hpp"

namespace udw {

/// Cavity geometry and switching. `x_d` is the detector position, one entry per axis.
/// `mode_cap` bounds the mode index on every axis; unset picks a Gaussian-tail based default.
struct CavitySpec {
  int n = 3;
  double L = pi;
  std::vector<double> x_d;
  double T = 10.0;
  std::optional<int> mode_cap;
};

struct DepositEntry {
  int j = 0;
  double omega_j = 0.0;
  double n_j = 0.0;
};

/// Mean excitation number deposited into each cavity mode, sorted by j.
struct DepositSpectrum {
  std::vector<DepositEntry> entries;

  double total() const {
    double t = 0.0;
    for (const auto& e : entries) t += e.n_j;
    return t;
  }
};

namespace cavity {

inline void validate(const CavitySpec& cav) {
  udw::detail::require(cav.n >= 1 && cav.n <= 6, "cavity: dimension must be in [1,6]");
  udw::detail::require(std::isfinite(cav.L) && cav.L > 0.0, "cavity: L must be positive");
  udw::detail::require(std::isfinite(cav.T) && cav.T > 0.0, "cavity: T must be positive");
  udw::detail::require(static_cast<int>(cav.x_d.size()) == cav.n, "cavity: x_d needs one coordinate per axis");
  for (double x : cav.x_d) udw::detail::require(x > 0.0 && x < cav.L, "cavity: detector must sit strictly inside the box");
  if (cav.mode_cap) udw::detail::require(*cav.mode_cap >= 1, "cavity: mode_cap must be >= 1");
}

/// Fourier transform of the switching exp(-t^2/T^2): sqrt(pi) T exp(-T^2 w^2 / 4).
inline double switching_ft(double T, double w) { return std::sqrt(pi) * T * std::exp(-0.25 * T * T * w * w); }

/// |k| of the mode with the given indices.
inline double mode_momentum(std::span<const int> index, double L) {
  double s = 0.0;
  for (int j : index) s += static_cast<double>(j) * j;
  return pi * std::sqrt(s) / L;
}

/// Mode function at x: (2|k|)^{-1/2} (2/L)^{n/2} prod sin(j_i pi x_i / L).
inline double mode_function(std::span<const int> index, double L, std::span<const double> x) {
  double v = std::pow(2.0 / L, 0.5 * index.size()) / std::sqrt(2.0 * mode_momentum(index, L));
  for (std::size_t i = 0; i < index.size(); ++i) v *= udw::detail::sin_pi(index[i] * x[i] / L);
  return v;
}

/// N_sigma = prod_i [sum_{m<j0_i} e^{-a^2 m^2} + (theta3(0, e^{-a^2}) - 1)/2]^{-1/2}, a = pi/(sigma L).
inline double discrete_normalization(const CavitySpec& cav, std::span<const int> k0_index, double sigma) {
  udw::detail::require(std::isfinite(sigma) && sigma > 0.0, "cavity: sigma must be positive");
  udw::detail::require(static_cast<int>(k0_index.size()) == cav.n, "cavity: k0_index needs one entry per axis");
  const double a2 = std::pow(pi / (sigma * cav.L), 2);
  const double theta_part = a2 > 745.0 ? 0.0 : 0.5 * (specfun::theta3_nome(std::exp(-a2)) - 1.0);
  double log_n = 0.0;
  for (int j0 : k0_index) {
    udw::detail::require(j0 >= 1, "cavity: mode indices start at 1");
    double bracket = theta_part;
    for (int m = 0; m < j0; ++m) bracket += std::exp(-a2 * m * m);
    log_n -= 0.5 * std::log(bracket);
  }
  return std::exp(log_n);
}

inline int default_mode_cap(std::span<const int> k0_index, double L, double sigma) {
  const double k0 = mode_momentum(k0_index, L);
  return static_cast<int>(std::ceil(k0 * L / pi + 12.0 * sigma * L / pi + 10.0));
}

namespace detail {

/// Pairwise sum; fixed association order keeps results bit-reproducible.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

/// Per-axis Gaussian weights exp(-a^2 (j - j0)^2 / 2) for j = 1..cap and the relative mass
/// of the part beyond cap.
inline std::pair<std::vector<double>, double> axis_weights(int j0, int cap, double a2) {
  std::vector<double> w(cap);
  double inside = 0.0;
  for (int j = 1; j <= cap; ++j) {
    w[j - 1] = std::exp(-0.5 * a2 * (j - j0) * (j - j0));
    inside += w[j - 1];
  }
  double tail = 0.0;
  for (int j = cap + 1;; ++j) {
    const double t = std::exp(-0.5 * a2 * (j - j0) * (j - j0));
    tail += t;
    if (t < 1e-20 * tail || t == 0.0 || j > cap + 100000) break;
  }
  return {std::move(w), tail / inside};
}

}  // namespace detail

/// P = lambda^2 |sum_I f(k_I) chi~(Omega - |k_I|) v_I(x_d)|^2 over the truncated mode lattice.
inline ProbabilityResult prob_one_cavity(const CavitySpec& cav, std::span<const int> k0_index, double sigma,
                                         const DetectorSpec& det) {
  validate(cav);
  udw::validate(det);
  const int n = cav.n;
  const double norm = discrete_normalization(cav, k0_index, sigma);
  const int cap = cav.mode_cap.value_or(default_mode_cap(k0_index, cav.L, sigma));
  const double a2 = std::pow(pi / (sigma * cav.L), 2);

  // Fold the Gaussian weight and the sine factor of each axis into one table.
  std::vector<std::vector<double>> axis(n);
  double tail = 0.0;
  for (int i = 0; i < n; ++i) {
    auto [w, t] = detail::axis_weights(k0_index[i], cap, a2);
    tail += t;
    for (int j = 1; j <= cap; ++j) w[j - 1] *= udw::detail::sin_pi(j * cav.x_d[i] / cav.L);
    axis[i] = std::move(w);
  }
  if (tail > 1e-10)
    throw TruncationError("cavity: mode_cap " + std::to_string(cap) + " leaves relative tail " + std::to_string(tail),
                          tail);

  const double pref = norm * std::pow(2.0 / cav.L, 0.5 * n);
  std::vector<double> terms;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(cap);
  terms.reserve(total);
  std::vector<int> idx(n, 1);
  for (std::size_t flat = 0; flat < total; ++flat) {
    double w = 1.0;
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
      w *= axis[i][idx[i] - 1];
      sq += static_cast<double>(idx[i]) * idx[i];
    }
    if (w != 0.0) {
      const double k = pi * std::sqrt(sq) / cav.L;
      terms.push_back(w * switching_ft(cav.T, det.omega - k) / std::sqrt(2.0 * k));
    }
    for (int i = n - 1; i >= 0; --i) {  // odometer increment, last axis fastest
      if (++idx[i] <= cap) break;
      idx[i] = 1;
    }
  }
  const double amp = pref * detail::pairwise_sum(terms);
  ProbabilityResult r;
  r.value = det.lambda * det.lambda * amp * amp;
  r.error_estimate = r.value * (2.0 * tail + 1e-13);
  if (cav.T * det.omega < 5.0)
    r.warnings.push_back("T*Omega < 5: omitted counter-rotating and vacuum terms may not be negligible");
  return r;
}

/// Limit sigma -> 0: lambda^2 |chi~(Omega - |k0|) v_{k0}(x_d)|^2.
inline double monochromatic_limit(const CavitySpec& cav, std::span<const int> k0_index, const DetectorSpec& det) {
  validate(cav);
  const double k0 = mode_momentum(k0_index, cav.L);
  const double a = switching_ft(cav.T, det.omega - k0) * mode_function(k0_index, cav.L, cav.x_d);
  return det.lambda * det.lambda * a * a;
}

namespace detail {

inline void check_deposit(const CavitySpec& cav, const DetectorSpec& det, int j_max) {
  validate(cav);
  udw::validate(det);
  udw::detail::require(cav.n == 1, "deposit spectra are defined for the (1+1)D cavity");
  udw::detail::require(j_max >= 1, "deposit: j_max must be >= 1");
}

// e^{-T^2 (Omega - 2 w_k)^2 / 4} sin^2(w_k x_d) / k
inline double pair_weight(const CavitySpec& cav, const DetectorSpec& det, int k) {
  const double w = k * pi / cav.L;
  const double s = udw::detail::sin_pi(k * cav.x_d[0] / cav.L);
  const double d = det.omega - 2.0 * w;
  return std::exp(-0.25 * cav.T * cav.T * d * d) * s * s / k;
}

// Bound on sum_{k > k_max} pair_weight, dropping the sine factor.
inline double pair_tail(const CavitySpec& cav, const DetectorSpec& det, int k_max) {
  double tail = 0.0;
  for (int k = k_max + 1;; ++k) {
    const double d = det.omega - 2.0 * k * pi / cav.L;
    const double t = std::exp(-0.25 * cav.T * cav.T * d * d) / k;
    tail += t;
    if (d < 0.0 && (t == 0.0 || t < 1e-30 * tail)) break;
  }
  return tail;
}

}  // namespace detail

/// Linear coupling: N_j = (lambda T)^2 / j * e^{-T^2 (Omega - w_j)^2 / 2} sin^2(w_j x_d).
inline DepositSpectrum deposit_linear(const CavitySpec& cav, const DetectorSpec& det, int j_max) {
  detail::check_deposit(cav, det, j_max);
  const double lt2 = std::pow(det.lambda * cav.T, 2);
  DepositSpectrum out;
  for (int j = 1; j <= j_max; ++j) {
    const double w = j * pi / cav.L;
    const double s = udw::detail::sin_pi(j * cav.x_d[0] / cav.L);
    const double d = det.omega - w;
    out.entries.push_back({j, w, lt2 / j * std::exp(-0.5 * cav.T * cav.T * d * d) * s * s});
  }
  return out;
}

/// Quadratic coupling: N_j = (lambda T)^2 (4/pi) a_j sum_{k<=k_max} a_k with
/// a_k = e^{-T^2 (Omega - 2 w_k)^2 / 4} sin^2(w_k x_d) / k. k_max = 0 picks the smallest
/// cut whose tail bound is below 1e-12 of the inner sum.
inline DepositSpectrum deposit_quadratic(const CavitySpec& cav, const DetectorSpec& det, int j_max, int k_max = 0) {
  detail::check_deposit(cav, det, j_max);
  udw::detail::require(k_max >= 0, "deposit: k_max must be >= 0");
  const bool automatic = k_max == 0;
  if (automatic) k_max = std::max(1, static_cast<int>(std::ceil(det.omega * cav.L / (2.0 * pi))));
  double inner = 0.0;
  int done = 0;
  for (;;) {
    for (int k = done + 1; k <= k_max; ++k) inner += detail::pair_weight(cav, det, k);
    done = k_max;
    const double tail = detail::pair_tail(cav, det, k_max);
    if (tail <= 1e-12 * inner) break;
    if (!automatic || k_max > 1000000)
      throw TruncationError("deposit_quadratic: inner sum tail " + std::to_string(tail) + " exceeds 1e-12 of " +
                                std::to_string(inner),
                            tail);
    k_max *= 2;
  }
  const double lt2 = std::pow(det.lambda * cav.T, 2);
  DepositSpectrum out;
  for (int j = 1; j <= j_max; ++j)
    out.entries.push_back({j, j * pi / cav.L, lt2 * (4.0 / pi) * detail::pair_weight(cav, det, j) * inner});
  return out;
}

}  // namespace cavity
}  // namespace udw
