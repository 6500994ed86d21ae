#pragma once

// Linear coupling in free space: one- and two-particle excitation probabilities in the
// long-time, pointlike limit. Every closed form here is a Gaussian times I_{(n-2)/2}, evaluated
// as exp(B - A) * (e^{-B} I(B)) so that narrow-band packets never overflow.

#include <cmath>
#include <limits>
#include <string>

#include "udw/common.hpp"
#include "udw/specfun.hpp"
#include "udw/wavepacket.hpp"

namespace udw {

/// lambda-tilde / lambda: |k0|^{(n-3)/2} for linear coupling, |k0|^{n-2} for quadratic.
inline double coupling_scale(int n, double k0, Coupling c) {
  return c == Coupling::linear ? std::pow(k0, 0.5 * (n - 3)) : std::pow(k0, n - 2.0);
}

namespace linear {

namespace detail {

inline constexpr double kRounding = 64.0 * std::numeric_limits<double>::epsilon();

inline void check(const WavepacketSpec& wp, const DetectorSpec& det) {
  wavepacket::validate(wp);
  validate(det);
  if (wp.n == 1) {
    const double lam = wavepacket::effective_ir_cutoff(wp.ir_cutoff, wp.k0, wp.sigma, det.omega);
    udw::detail::require(det.omega > lam && wp.k0 > lam, "n=1: omega and k0 must exceed the IR cutoff");
  }
}

/// log of the Gaussian-Bessel product e^{-(k0^2+W^2)/2s^2} I_nu(k0 W/s^2).
inline double log_gauss_bessel(int n, double k0, double omega, double s) {
  const double x = k0 * omega / (s * s);
  const double d = k0 - omega;
  return -d * d / (2.0 * s * s) + specfun::bessel_i_scaled(0.5 * (n - 2), x).log_abs();
}

}  // namespace detail

/// log of the co-rotating amplitude I_-.
inline double log_i_minus(const WavepacketSpec& wp, const DetectorSpec& det) {
  detail::check(wp, det);
  const int n = wp.n;
  const double log_pref = 0.5 * (std::log(2.0) + 0.5 * (4 - n) * std::log(pi) + (n - 1) * std::log(det.omega) -
                                 (n - 2) * std::log(wp.k0) - (4 - n) * std::log(wp.sigma));
  return log_pref + detail::log_gauss_bessel(n, wp.k0, det.omega, wp.sigma);
}

/// Co-rotating amplitude I_- for a pointlike detector.
inline double i_minus(const WavepacketSpec& wp, const DetectorSpec& det) { return std::exp(log_i_minus(wp, det)); }

/// P = lambda^2 I_-^2, times exp(-Delta^2 Omega^2 / 2) for a Gaussian-smeared detector.
inline ProbabilityResult prob_one_linear(const WavepacketSpec& wp, const DetectorSpec& det) {
  udw::detail::require(det.coupling == Coupling::linear, "prob_one_linear: detector must couple linearly");
  const double dw = det.smearing_delta * det.omega;
  const double p = std::exp(2.0 * std::log(det.lambda) + 2.0 * log_i_minus(wp, det) - 0.5 * dw * dw);
  return {p, detail::kRounding * p, {}, {}};
}

/// Probability with the coupling written as gamma sigma^{(3-n)/2}, gamma dimensionless.
inline ProbabilityResult prob_one_running(const WavepacketSpec& wp, const DetectorSpec& det, double gamma) {
  udw::detail::require(std::isfinite(gamma) && gamma > 0.0, "prob_one_running: gamma must be positive");
  detail::check(wp, det);
  const int n = wp.n;
  const double log_p = 2.0 * std::log(gamma) + std::log(2.0) + 0.5 * (4 - n) * std::log(pi) -
                       (n - 2) * std::log(wp.k0) + (n - 1) * std::log(det.omega) - std::log(wp.sigma) +
                       2.0 * detail::log_gauss_bessel(n, wp.k0, det.omega, wp.sigma);
  const double p = std::exp(log_p);
  return {p, detail::kRounding * p, {}, {}};
}

/// Two-particle amplitude M_- for the selected peak: N times I_- at that peak.
inline double m_minus(const TwoParticleSpec& spec, Eta which, const DetectorSpec& det) {
  return wavepacket::normalization_N(spec) * i_minus(spec.particle(which), det);
}

/// P = lambda^2 [M(eta1)^2 + M(eta2)^2 + 2 C M(eta1) M(eta2)].
inline ProbabilityResult prob_two_linear(const TwoParticleSpec& spec, const DetectorSpec& det) {
  udw::detail::require(det.coupling == Coupling::linear, "prob_two_linear: detector must couple linearly");
  const double m1 = m_minus(spec, Eta::one, det), m2 = m_minus(spec, Eta::two, det);
  const double c = wavepacket::overlap_C(spec);
  const double l2 = det.lambda * det.lambda;
  const double dw = det.smearing_delta * det.omega;
  const double smear = std::exp(-0.5 * dw * dw);
  ProbabilityResult r;
  r.components = {{"peak1", l2 * smear * m1 * m1}, {"peak2", l2 * smear * m2 * m2},
                  {"interference", l2 * smear * 2.0 * c * m1 * m2}};
  for (const auto& comp : r.components) r.value += comp.value;
  r.error_estimate = detail::kRounding * r.value;
  return r;
}

}  // namespace linear
}  // namespace udw
