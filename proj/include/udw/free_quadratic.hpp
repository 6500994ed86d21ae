#pragma once

// Quadratic coupling in free space. The one-particle probability and the Q part of the
// two-particle probability are radial integrals of a closed-form kernel; R and S are the
// one-dimensional integrals left after the angular reductions.

#include <algorithm>
#include <cmath>
#include <vector>

#include "udw/common.hpp"
#include "udw/free_linear.hpp"
#include "udw/quadrature.hpp"
#include "udw/specfun.hpp"
#include "udw/wavepacket.hpp"

namespace udw {

/// Two-particle quadratic probability split into its Q, R (sum frequency) and S (difference
/// frequency) parts. For one-particle results only `p_q` and `total` are filled.
struct QuadraticComponents {
  double p_q = 0.0;
  double p_r = 0.0;
  double p_s = 0.0;
  double total = 0.0;
  double error_estimate = 0.0;
};

namespace quadratic {

namespace detail {

inline void check(const WavepacketSpec& wp, const DetectorSpec& det) {
  wavepacket::validate(wp);
  validate(det);
  if (wp.n == 1) {
    const double lam = wavepacket::effective_ir_cutoff(wp.ir_cutoff, wp.k0, wp.sigma, det.omega);
    udw::detail::require(det.omega > lam && wp.k0 > lam, "n=1: omega and k0 must exceed the IR cutoff");
  }
}

inline void check(const TwoParticleSpec& s, const DetectorSpec& det) {
  check(s.particle(Eta::one), det);
  check(s.particle(Eta::two), det);
}

/// log of exp(-(eta^2+q^2)/2s^2) 0F1~(n/2; eta^2 q^2/4s^4), kept finite for narrow packets.
inline double log_gauss_kernel(int n, double eta, double q, double s) {
  const double c = eta * q / (s * s);
  const double d = eta - q;
  return -d * d / (2.0 * s * s) - c + angular::log_even(n, c);
}

inline double ir_lower(int n, const std::optional<double>& cutoff, double k0, double sigma, double omega) {
  return n == 1 ? wavepacket::effective_ir_cutoff(cutoff, k0, sigma, omega) : 0.0;
}

/// Integral of g over [lower, inf) for a g concentrated near the given centres.
/// With `log_head` the region below the peak is integrated in log k, which is what a 1/k
/// integrand sitting on an infrared cutoff needs.
template <class G>
quad::QuadratureResult radial_integral(G&& g, double lower, std::vector<double> centers, double width, bool log_head,
                                       double rel_tol) {
  std::vector<double> hints;
  for (double c : centers)
    for (double h : {c - 8.0 * width, c, c + 8.0 * width})
      if (h > lower) hints.push_back(h);
  std::sort(hints.begin(), hints.end());
  if (!log_head) return quad::integrate_with_hints(g, lower, hints, width, rel_tol);
  const double top = std::max(hints.empty() ? lower : hints.back(), 16.0 * lower);
  std::vector<double> pts{std::log(lower)};
  for (double h : hints)
    if (h < top) pts.push_back(std::log(h));
  pts.push_back(std::log(top));
  auto in_log = [&](double u) {
    const double k = std::exp(u);
    return k * g(k);
  };
  auto head = quad::integrate_breakpoints(in_log, std::span<const double>(pts), 0.5 * rel_tol);
  auto tail = quad::integrate_semi_infinite(g, top, 0.5 * rel_tol, width, 0.5 * rel_tol * std::abs(head.value));
  return {head.value + tail.value, head.error_estimate + tail.error_estimate, head.evaluations + tail.evaluations};
}

/// 4 (2 pi)^2 S_{n-1} / (2 (2 pi)^n): the constant in front of the k1 integral.
inline double radial_prefactor(int n) {
  return 4.0 * (2.0 * pi) * (2.0 * pi) * udw::detail::sphere_area(n) / (2.0 * std::pow(2.0 * pi, n));
}

}  // namespace detail

/// log J_-(k1): the co-rotating kernel with |k| = k1 + Omega enforced by the long-time limit.
inline double log_j_minus(const WavepacketSpec& wp, const DetectorSpec& det, double k1) {
  const int n = wp.n;
  const double a = k1 + det.omega, s = wp.sigma;
  const double log_pref = std::log(2.0) + 0.5 * n * std::log(pi) - 0.5 * std::log(2.0 * std::pow(2.0 * pi, n)) -
                          0.25 * n * std::log(pi * s * s);
  return log_pref + (n - 1.5) * std::log(a) + detail::log_gauss_kernel(n, wp.k0, a, s);
}

inline double j_minus(const WavepacketSpec& wp, const DetectorSpec& det, double k1) {
  detail::check(wp, det);
  udw::detail::require(k1 >= 0.0, "j_minus: k1 must be >= 0");
  return std::exp(log_j_minus(wp, det, k1));
}

/// P = 4 lambda^2 (2pi)^2 S_{n-1} / (2(2pi)^n) * int_L^inf k^{n-2} J_-(k)^2 dk.
inline ProbabilityResult prob_one_quadratic(const WavepacketSpec& wp, const DetectorSpec& det,
                                            double rel_tol = quad::default_rel_tol()) {
  udw::detail::require(det.coupling == Coupling::quadratic, "prob_one_quadratic: detector must couple quadratically");
  detail::check(wp, det);
  const int n = wp.n;
  const double lower = detail::ir_lower(n, wp.ir_cutoff, wp.k0, wp.sigma, det.omega);
  auto g = [&](double k) { return std::exp((n - 2) * std::log(k) + 2.0 * log_j_minus(wp, det, k)); };
  auto r = detail::radial_integral(g, lower, {std::max(0.0, wp.k0 - det.omega)}, wp.sigma / std::sqrt(2.0), n == 1,
                                   rel_tol);
  const double c = det.lambda * det.lambda * detail::radial_prefactor(n);
  return {c * r.value, c * r.error_estimate, {}, {}};
}

/// Q_- kernel for one peak of the two-particle state: 2 pi N J_- at that peak.
inline double q_minus(const TwoParticleSpec& spec, const DetectorSpec& det, Eta which, double k1) {
  detail::check(spec, det);
  udw::detail::require(k1 >= 0.0, "q_minus: k1 must be >= 0");
  return 2.0 * pi * wavepacket::normalization_N(spec) * std::exp(log_j_minus(spec.particle(which), det, k1));
}

namespace detail {

inline double log_pair_prefactor(const TwoParticleSpec& s) {
  const int n = s.n;
  return std::log(wavepacket::normalization_N(s)) - (n - 2) * std::log(2.0) - (0.5 * n - 1.0) * std::log(pi) -
         n * std::log(s.sigma);
}

// log of the R/S integrand at momenta p (paired with eta_a) and q (paired with eta_b).
// Includes exp(-(eta_a^2+eta_b^2)/2s^2), which the definitions imply.
inline double log_pair_integrand(int n, double s, double eta_a, double p, double eta_b, double q) {
  return (n - 1.5) * (std::log(p) + std::log(q)) + log_gauss_kernel(n, eta_a, p, s) + log_gauss_kernel(n, eta_b, q, s);
}

}  // namespace detail

/// Sum-frequency integral R_- over 0 < k < Omega. Each half is mapped by k = u^2 (or
/// Omega - k = u^2) so the (k(Omega-k))^{n-3/2} end behaviour becomes polynomial.
inline quad::QuadratureResult r_minus(const TwoParticleSpec& spec, const DetectorSpec& det,
                                      double rel_tol = quad::default_rel_tol()) {
  detail::check(spec, det);
  const int n = spec.n;
  const double om = det.omega, s = spec.sigma;
  const double pref = std::exp(detail::log_pair_prefactor(spec));
  const double peak = std::clamp(0.5 * (om + spec.eta1 - spec.eta2), 0.0, om);
  const double half = 0.5 * om, umax = std::sqrt(half);

  auto piece = [&](bool near_zero) {
    auto g = [&](double u) {
      const double u2 = u * u;
      const double k = near_zero ? u2 : om - u2;
      const double rest = near_zero ? om - u2 : u2;
      return 2.0 * u * std::exp(detail::log_pair_integrand(n, s, spec.eta1, k, spec.eta2, rest));
    };
    std::vector<double> pts{0.0};
    for (double k : {peak - 6.0 * s, peak, peak + 6.0 * s}) {
      const double d = near_zero ? k : om - k;  // distance from this piece's end point
      if (d > 0.0 && d < half) pts.push_back(std::sqrt(d));
    }
    pts.push_back(umax);
    std::sort(pts.begin(), pts.end());
    return quad::integrate_breakpoints(g, std::span<const double>(pts), 0.5 * rel_tol);
  };
  auto a = piece(true), b = piece(false);
  return {pref * (a.value + b.value), pref * (a.error_estimate + b.error_estimate), a.evaluations + b.evaluations};
}

/// Difference-frequency integral S_-(eta_i, eta_j) over k > 0; eta_i pairs with k and eta_j
/// with Omega + k, so the two orderings differ.
inline quad::QuadratureResult s_minus(const TwoParticleSpec& spec, const DetectorSpec& det, Eta i, Eta j,
                                      double rel_tol = quad::default_rel_tol()) {
  detail::check(spec, det);
  const int n = spec.n;
  const double om = det.omega, s = spec.sigma;
  const double ei = spec.eta(i), ej = spec.eta(j);
  const double pref = std::exp(detail::log_pair_prefactor(spec));
  const double peak = std::max(0.0, 0.5 * (ei + ej - om));
  auto g = [&](double u) {
    const double k = u * u;
    return 2.0 * u * std::exp(detail::log_pair_integrand(n, s, ei, k, ej, om + k));
  };
  std::vector<double> hints;
  for (double k : {peak - 6.0 * s, peak, peak + 6.0 * s})
    if (k > 0.0) hints.push_back(std::sqrt(k));
  auto r = quad::integrate_with_hints(g, 0.0, hints, std::sqrt(s), rel_tol);
  return {pref * r.value, pref * r.error_estimate, r.evaluations};
}

/// Q, R and S parts of the two-particle quadratic probability.
inline QuadraticComponents prob_two_quadratic(const TwoParticleSpec& spec, const DetectorSpec& det,
                                              double rel_tol = quad::default_rel_tol()) {
  udw::detail::require(det.coupling == Coupling::quadratic, "prob_two_quadratic: detector must couple quadratically");
  detail::check(spec, det);
  const int n = spec.n;
  const double l2 = det.lambda * det.lambda;
  const double c = wavepacket::overlap_C(spec);
  const double nn = wavepacket::normalization_N(spec);
  const auto p1 = spec.particle(Eta::one), p2 = spec.particle(Eta::two);

  // Q part: same radial structure as the one-particle probability, with N^2 [J1^2 + J2^2 + 2C J1 J2].
  const double lower = detail::ir_lower(n, spec.ir_cutoff, std::min(spec.eta1, spec.eta2), spec.sigma, det.omega);
  auto bracket = [&](double k) {
    const double j1 = std::exp(log_j_minus(p1, det, k)), j2 = std::exp(log_j_minus(p2, det, k));
    return std::pow(k, n - 2) * nn * nn * (j1 * j1 + j2 * j2 + 2.0 * c * j1 * j2);
  };
  const double w = spec.sigma / std::sqrt(2.0);
  const std::vector<double> centers{std::max(0.0, spec.eta1 - det.omega), std::max(0.0, spec.eta2 - det.omega)};
  auto q = detail::radial_integral(bracket, lower, centers, w, n == 1, rel_tol);
  const double qpref = l2 * detail::radial_prefactor(n);

  auto r = r_minus(spec, det, rel_tol);
  auto s12 = s_minus(spec, det, Eta::one, Eta::two, rel_tol);
  auto s21 = s_minus(spec, det, Eta::two, Eta::one, rel_tol);
  auto s11 = s_minus(spec, det, Eta::one, Eta::one, rel_tol);
  auto s22 = s_minus(spec, det, Eta::two, Eta::two, rel_tol);

  QuadraticComponents out;
  out.p_q = qpref * q.value;
  out.p_r = 4.0 * l2 * r.value * r.value;
  out.p_s = 4.0 * l2 * (s12.value * s12.value + s21.value * s21.value + 2.0 * s11.value * s22.value);
  out.total = out.p_q + out.p_r + out.p_s;
  out.error_estimate = qpref * q.error_estimate + 8.0 * l2 * std::abs(r.value) * r.error_estimate +
                       8.0 * l2 *
                           (std::abs(s12.value) * s12.error_estimate + std::abs(s21.value) * s21.error_estimate +
                            std::abs(s22.value) * s11.error_estimate + std::abs(s11.value) * s22.error_estimate);
  return out;
}

}  // namespace quadratic
}  // namespace udw
