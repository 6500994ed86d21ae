#pragma once

// Brute-force reference evaluators. Angular integrals are done by Gauss-Legendre quadrature in
// theta, radial ones by the adaptive rule; nothing here touches the Bessel or hypergeometric
// code, so agreement with the closed forms is a genuine cross-check.

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "udw/cavity.hpp"
#include "udw/common.hpp"
#include "udw/quadrature.hpp"
#include "udw/wavepacket.hpp"

namespace udw::oracle {

struct OracleConfig {
  double rel_tol = 1e-10;
  int angular_points = 32;
  std::optional<double> ir_cutoff;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// m-point Gauss-Legendre rule by Newton iteration on P_m.
inline const GaussRule& gauss_legendre(int m) {
  thread_local std::map<int, GaussRule> cache;
  if (auto it = cache.find(m); it != cache.end()) return it->second;
  GaussRule r;
  r.nodes.resize(m);
  r.weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0;
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[m - 1 - i] = x;
    r.weights[i] = w;
    r.weights[m - 1 - i] = w;
  }
  return cache.emplace(m, std::move(r)).first->second;
}

namespace detail {

template <class F>
double gauss_on(const F& f, double a, double b, int m) {
  const auto& rule = gauss_legendre(m);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += rule.weights[i] * f(c + h * rule.nodes[i]);
  return h * s;
}

/// Fixed-order Gauss rule on [a,b], doubling the order until two successive values agree.
template <class F>
double gauss_doubling(const F& f, double a, double b, int start) {
  double prev = gauss_on(f, a, b, start);
  for (int m = 2 * start; m <= 4096; m *= 2) {
    const double cur = gauss_on(f, a, b, m);
    if (std::abs(cur - prev) <= 1e-12 * std::abs(cur)) return cur;
    prev = cur;
  }
  throw quad::QuadratureError("oracle: angular Gauss rule did not settle", {prev, std::abs(prev), 0});
}

}  // namespace detail

/// log of the integral of exp(c cos(theta)) (times cos(theta) when `odd`) over the unit
/// (n-1)-sphere, c > 0. For n = 1 the "sphere" is the two points +-1.
inline double log_sphere_integral(int n, double c, bool odd, int points = 32) {
  if (n == 1) return c + std::log(odd ? -std::expm1(-2.0 * c) : 1.0 + std::exp(-2.0 * c));
  // S_{n-2} * int_0^pi sin^{n-2} e^{c (cos - 1)} [cos] dtheta, then add back c.
  const double ring = 2.0 * std::pow(pi, 0.5 * (n - 1)) / std::tgamma(0.5 * (n - 1));
  auto f = [&](double th) {
    const double w = std::pow(std::sin(th), n - 2) * std::exp(c * (std::cos(th) - 1.0));
    return odd ? w * std::cos(th) : w;
  };
  double total;
  if (c > 64.0) {
    // the weight lives in theta ~ 1/sqrt(c); give that region its own rule
    const double split = std::min(pi / 2, 12.0 / std::sqrt(c));
    total = detail::gauss_doubling(f, 0.0, split, points) + detail::gauss_doubling(f, split, pi, points);
  } else {
    total = detail::gauss_doubling(f, 0.0, pi, points);
  }
  return c + std::log(ring * total);
}

namespace detail {

inline void check_cfg(const OracleConfig& cfg) {
  udw::detail::require(cfg.angular_points >= 32, "oracle: angular_points must be >= 32");
  udw::detail::require(cfg.rel_tol > 0.0 && cfg.rel_tol <= 1e-7, "oracle: rel_tol must be <= 1e-7");
}

/// log of int d^n k f(k) delta(|k| - a) / sqrt(2 (2pi)^n |k|), the building block of I_- and J_-.
inline double log_shell(int n, double k0, double sigma, double a, int points) {
  const double c = k0 * a / (sigma * sigma);
  return (n - 1.5) * std::log(a) - 0.5 * std::log(2.0 * std::pow(2.0 * pi, n)) - 0.25 * n * std::log(pi * sigma * sigma) -
         (k0 * k0 + a * a) / (2.0 * sigma * sigma) + log_sphere_integral(n, c, false, points);
}

}  // namespace detail

/// I_- with the time integral collapsed to 2 pi delta(Omega - |k|) and the sphere done by quadrature.
inline double oracle_i_minus(const WavepacketSpec& wp, const DetectorSpec& det, const OracleConfig& cfg = {}) {
  detail::check_cfg(cfg);
  if (wp.n == 1) {
    const double lam = cfg.ir_cutoff.value_or(wp.ir_cutoff.value_or(0.0));
    udw::detail::require(det.omega > lam, "oracle: n=1 needs omega above the IR cutoff");
  }
  return 2.0 * pi * std::exp(detail::log_shell(wp.n, wp.k0, wp.sigma, det.omega, cfg.angular_points));
}

/// J_-(k1): the same shell integral at |k| = Omega + k1, without the 2 pi.
inline double oracle_j_minus(const WavepacketSpec& wp, const DetectorSpec& det, double k1, const OracleConfig& cfg = {}) {
  detail::check_cfg(cfg);
  return std::exp(detail::log_shell(wp.n, wp.k0, wp.sigma, det.omega + k1, cfg.angular_points));
}

namespace detail {

// Radial integrand of R_- / S_- after the delta: momenta p (peak eta_a) and q (peak eta_b).
inline double pair_radial(int n, double s, double eta_a, double p, double eta_b, double q, int points) {
  const double ga = -(p * p + eta_a * eta_a) / (2 * s * s) + log_sphere_integral(n, eta_a * p / (s * s), false, points);
  const double gb = -(q * q + eta_b * eta_b) / (2 * s * s) + log_sphere_integral(n, eta_b * q / (s * s), false, points);
  return std::exp((n - 1.5) * (std::log(p) + std::log(q)) + ga + gb);
}

inline double pair_prefactor(const TwoParticleSpec& spec) {
  const int n = spec.n;
  return wavepacket::normalization_N(spec) * 2.0 * pi /
         (2.0 * std::pow(2.0 * pi, n) * std::pow(pi * spec.sigma * spec.sigma, 0.5 * n));
}

}  // namespace detail

/// R_- by radial quadrature over |k| in (0, Omega) with both sphere integrals done numerically.
inline quad::QuadratureResult oracle_r_minus(const TwoParticleSpec& spec, const DetectorSpec& det,
                                             const OracleConfig& cfg = {}) {
  detail::check_cfg(cfg);
  const double om = det.omega;
  auto g = [&](double k) {
    return detail::pair_radial(spec.n, spec.sigma, spec.eta1, k, spec.eta2, om - k, cfg.angular_points);
  };
  auto r = quad::integrate_finite(g, 0.0, om, cfg.rel_tol);
  const double pref = detail::pair_prefactor(spec);
  return {pref * r.value, pref * r.error_estimate, r.evaluations};
}

/// S_-(eta_i, eta_j) by radial quadrature over |k| > 0, |k'| = Omega + |k|.
inline quad::QuadratureResult oracle_s_minus(const TwoParticleSpec& spec, const DetectorSpec& det, Eta i, Eta j,
                                             const OracleConfig& cfg = {}) {
  detail::check_cfg(cfg);
  const double om = det.omega, ei = spec.eta(i), ej = spec.eta(j);
  auto g = [&](double k) { return detail::pair_radial(spec.n, spec.sigma, ei, k, ej, om + k, cfg.angular_points); };
  const double peak = std::max(0.0, 0.5 * (ei + ej - om));
  std::vector<double> hints;
  for (double h : {peak - 6 * spec.sigma, peak, peak + 6 * spec.sigma})
    if (h > 0.0) hints.push_back(h);
  auto r = quad::integrate_with_hints(g, 0.0, hints, spec.sigma, cfg.rel_tol);
  const double pref = detail::pair_prefactor(spec);
  return {pref * r.value, pref * r.error_estimate, r.evaluations};
}

namespace detail {

// int_lower^inf dk k^{n-1+extra} exp(-(k^2 + k0^2) m / 2 s^2) * sphere(c = m k k0 / s^2), where m
// is 1 for amplitudes and 2 for |f|^2 moments.
inline quad::QuadratureResult radial_moment(const WavepacketSpec& wp, double extra, double m, bool odd, double lower,
                                            const OracleConfig& cfg) {
  const int n = wp.n;
  const double s = wp.sigma, k0 = wp.k0;
  auto g = [&](double k) {
    const double c = m * k * k0 / (s * s);
    double log_ang;
    if (c == 0.0) {
      if (odd) return 0.0;
      log_ang = std::log(n == 1 ? 2.0 : udw::detail::sphere_area(n));
    } else {
      log_ang = log_sphere_integral(n, c, odd, cfg.angular_points);
    }
    return std::exp((n - 1 + extra) * std::log(k) - m * (k * k + k0 * k0) / (2.0 * s * s) + log_ang);
  };
  const double w = s / std::sqrt(m);
  std::vector<double> hints;
  for (double h : {k0 - 10 * w, k0, k0 + 10 * w})
    if (h > lower) hints.push_back(h);
  return quad::integrate_with_hints(g, lower, hints, w, cfg.rel_tol);
}

inline double n1_lower(const WavepacketSpec& wp, const OracleConfig& cfg) {
  return wp.n == 1 ? cfg.ir_cutoff.value_or(wp.ir_cutoff.value_or(0.0)) : 0.0;
}

}  // namespace detail

/// int d^n k |f|^2; equals 1 for a normalized spectrum.
inline double oracle_norm(const WavepacketSpec& wp, const OracleConfig& cfg = {}) {
  detail::check_cfg(cfg);
  auto r = detail::radial_moment(wp, 0.0, 2.0, false, 0.0, cfg);
  return r.value / std::pow(pi * wp.sigma * wp.sigma, 0.5 * wp.n);
}

/// int d^n k |k| |f|^2, with |k| >= the IR cutoff when n = 1.
inline double oracle_energy_expectation(const WavepacketSpec& wp, const OracleConfig& cfg = {}) {
  detail::check_cfg(cfg);
  auto r = detail::radial_moment(wp, 1.0, 2.0, false, detail::n1_lower(wp, cfg), cfg);
  return r.value / std::pow(pi * wp.sigma * wp.sigma, 0.5 * wp.n);
}

/// A^2 + B^2 with A, B the sqrt|k| and k/sqrt|k| moments of f / sqrt(2 (2pi)^n).
inline double oracle_energy_density(const WavepacketSpec& wp, const OracleConfig& cfg = {}) {
  detail::check_cfg(cfg);
  const double lower = detail::n1_lower(wp, cfg);
  const double pref =
      std::pow(pi * wp.sigma * wp.sigma, -0.25 * wp.n) / std::sqrt(2.0 * std::pow(2.0 * pi, wp.n));
  const double a = pref * detail::radial_moment(wp, 0.5, 1.0, false, lower, cfg).value;
  const double b = pref * detail::radial_moment(wp, 0.5, 1.0, true, lower, cfg).value;
  return a * a + b * b;
}

/// Direct lattice sum of |N_sigma f(k_I)|^2 over the truncated mode lattice.
inline double oracle_lattice_norm(const CavitySpec& cav, std::span<const int> k0_index, double sigma) {
  const double norm = cavity::discrete_normalization(cav, k0_index, sigma);
  const double a2 = std::pow(pi / (sigma * cav.L), 2);
  const int n = cav.n;
  const int cap = cav.mode_cap.value_or(cavity::default_mode_cap(k0_index, cav.L, sigma));
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(cap);
  std::vector<int> idx(n, 1);
  std::vector<double> terms;
  terms.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    double e = 0.0;
    for (int i = 0; i < n; ++i) e += static_cast<double>(idx[i] - k0_index[i]) * (idx[i] - k0_index[i]);
    terms.push_back(std::exp(-a2 * e));
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[i] <= cap) break;
      idx[i] = 1;
    }
  }
  return norm * norm * cavity::detail::pairwise_sum(terms);
}

}  // namespace udw::oracle
