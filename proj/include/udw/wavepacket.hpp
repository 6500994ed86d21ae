#pragma once

// Gaussian one- and two-particle wavepackets: validation, overlap and normalization of the
// two-peak state, energy expectation and the energy density at the origin.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "udw/common.hpp"
#include "udw/quadrature.hpp"
#include "udw/specfun.hpp"

namespace udw {

/// Isotropic Gaussian spectrum f(k) = (pi sigma^2)^{-n/4} exp(-|k-k0|^2 / 2 sigma^2).
///
/// `ir_cutoff` is only read when n == 1; unset means "choose 1e-6 of the smallest scale".
struct WavepacketSpec {
  int n = 3;
  double k0 = 1.0;
  double sigma = 1.0;
  std::optional<double> ir_cutoff;
};

/// Superposition of two Gaussian peaks of magnitudes eta1, eta2, taken to point the same way.
struct TwoParticleSpec {
  int n = 3;
  double eta1 = 1.0;
  double eta2 = 2.0;
  double sigma = 0.5;
  std::optional<double> ir_cutoff;

  double eta(Eta which) const { return which == Eta::one ? eta1 : eta2; }
  WavepacketSpec particle(Eta which) const { return {n, eta(which), sigma, ir_cutoff}; }
};

namespace angular {

// Sphere integrals of exp(c cos(theta)) and cos(theta) exp(c cos(theta)), as logs and without
// the 2 pi^{n/2} prefactor: 0F1~(n/2; c^2/4) and (c/2) 0F1~(n/2+1; c^2/4). Both need c > 0.
inline double log_even(int n, double c) { return specfun::hyp0f1_reg(0.5 * n, 0.25 * c * c).log_abs(); }
inline double log_odd(int n, double c) {
  return std::log(0.5 * c) + specfun::hyp0f1_reg(0.5 * n + 1.0, 0.25 * c * c).log_abs();
}

}  // namespace angular

namespace wavepacket {

inline void validate(const WavepacketSpec& wp, bool allow_zero_k0 = false) {
  detail::require(wp.n >= 1 && wp.n <= 64, "wavepacket: dimension n must be in [1,64]");
  detail::require_finite(wp.k0, "k0");
  detail::require_finite(wp.sigma, "sigma");
  detail::require(allow_zero_k0 ? wp.k0 >= 0.0 : wp.k0 > 0.0, "wavepacket: k0 must be positive");
  detail::require(wp.sigma > 0.0, "wavepacket: sigma must be positive");
  if (wp.ir_cutoff) {
    detail::require(std::isfinite(*wp.ir_cutoff) && *wp.ir_cutoff >= 0.0, "wavepacket: ir_cutoff must be >= 0");
    if (wp.n == 1 && !allow_zero_k0)
      detail::require(wp.k0 > *wp.ir_cutoff, "wavepacket: n=1 requires k0 above the IR cutoff");
  }
}

inline void validate(const TwoParticleSpec& s) {
  validate(s.particle(Eta::one));
  validate(s.particle(Eta::two));
}

/// Cutoff actually used for an n=1 computation that also involves the gap omega.
inline double effective_ir_cutoff(const std::optional<double>& cutoff, double k0, double sigma, double omega) {
  if (cutoff) return *cutoff;
  return 1e-6 * std::min({k0, sigma, omega});
}

/// Peak-momentum overlap C = exp(-(eta1-eta2)^2 / 4 sigma^2).
inline double overlap_C(const TwoParticleSpec& s) {
  validate(s);
  const double d = s.eta1 - s.eta2;
  return std::exp(-d * d / (4.0 * s.sigma * s.sigma));
}

/// N = 1/sqrt(1 + C^2), in [1/sqrt2, 1).
inline double normalization_N(const TwoParticleSpec& s) {
  const double c = overlap_C(s);
  return 1.0 / std::sqrt(1.0 + c * c);
}

/// <H> in the one-particle state. For n = 1 this is the cutoff expression
/// (1/2 sqrt(pi)) [sqrt(pi) k0 (erf((L+k0)/s) - erf((L-k0)/s)) + s (e^{-(L-k0)^2/s^2} + e^{-(L+k0)^2/s^2})].
inline double energy_expectation(const WavepacketSpec& wp) {
  validate(wp, true);
  const double s = wp.sigma, k0 = wp.k0;
  if (wp.n == 1) {
    const double lam = wp.ir_cutoff.value_or(0.0);
    const double a = (lam - k0) / s, b = (lam + k0) / s;
    return (std::sqrt(pi) * k0 * (specfun::erf(b) - specfun::erf(a)) + s * (std::exp(-a * a) + std::exp(-b * b))) /
           (2.0 * std::sqrt(pi));
  }
  const double z = -(k0 * k0) / (s * s);
  const auto f = specfun::hyp1f1_reg(-0.5, 0.5 * wp.n, z);
  return std::exp(std::log(s) + std::lgamma(0.5 * (wp.n + 1)) + f.log_abs());
}

/// Same quantity through the n >= 2 hypergeometric form, continued to any real n > 0.
inline double energy_expectation_continued(double n, double k0, double sigma) {
  const double z = -(k0 * k0) / (sigma * sigma);
  return std::exp(std::log(sigma) + std::lgamma(0.5 * (n + 1)) + specfun::hyp1f1_reg(-0.5, 0.5 * n, z).log_abs());
}

/// <:T_tt(0):> = A^2 + B^2, with A and B the sqrt|k| and k/sqrt|k| moments of f.
inline double energy_density_origin(const WavepacketSpec& wp, double rel_tol = quad::default_rel_tol()) {
  validate(wp, true);
  const int n = wp.n;
  const double s = wp.sigma, k0 = wp.k0;
  const double log_pref = -0.25 * n * std::log(pi * s * s) - 0.5 * std::log(2.0 * std::pow(2.0 * pi, n)) +
                          std::log(2.0) + 0.5 * n * std::log(pi);
  auto radial = [&](double k, bool odd) {
    if (k <= 0.0) return 0.0;
    const double c = k * k0 / (s * s);
    double log_ang;
    if (c == 0.0) {
      if (odd) return 0.0;
      log_ang = -std::lgamma(0.5 * n);
    } else {
      log_ang = odd ? angular::log_odd(n, c) : angular::log_even(n, c);
    }
    // exp(-(k^2+k0^2)/2s^2) = exp(-(k-k0)^2/2s^2 - c); the -c offsets the growth of the kernel
    return std::exp(log_pref + (n - 0.5) * std::log(k) - (k - k0) * (k - k0) / (2.0 * s * s) - c + log_ang);
  };
  const double lower = (n == 1) ? wp.ir_cutoff.value_or(0.0) : 0.0;
  std::vector<double> hints{std::max(lower, k0 - 8.0 * s), k0, k0 + 8.0 * s};
  auto a = quad::integrate_with_hints([&](double k) { return radial(k, false); }, lower, hints, s, rel_tol);
  auto b = quad::integrate_with_hints([&](double k) { return radial(k, true); }, lower, hints, s, rel_tol);
  return a.value * a.value + b.value * b.value;
}

}  // namespace wavepacket
}  // namespace udw
