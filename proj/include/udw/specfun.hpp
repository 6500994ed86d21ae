#pragma once

// Special functions needed by the closed-form probabilities: exponentially scaled modified
// Bessel I, regularized 0F1 and 1F1, the Jacobi theta function at zero argument, and thin
// wrappers over std::erf / std::tgamma. Everything that can overflow is carried in log space.

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "udw/common.hpp"

namespace udw::specfun {

/// Result of a special-function evaluation.
///
/// `log_scaled` holds log|f| whenever it was computed in log space. If that magnitude does not
/// fit in a double, `value` holds only the sign (+-1); an underflowing result stores 0.
struct SpecFunResult {
  double value = 0.0;
  std::optional<double> log_scaled;

  double log_abs() const { return log_scaled ? *log_scaled : std::log(std::abs(value)); }
};

namespace detail {

inline constexpr double kMaxLog = 709.78;

inline SpecFunResult from_log(double log_value) {
  SpecFunResult r;
  r.log_scaled = log_value;
  r.value = log_value > kMaxLog ? 1.0 : std::exp(log_value);
  return r;
}

inline bool is_half_integer(double nu) {
  double twice = 2.0 * nu;
  return twice == std::round(twice) && std::fmod(std::abs(twice), 2.0) == 1.0;
}

inline double switchover(double nu) { return 30.0 * (1.0 + std::abs(nu)); }

/// log of e^{-x} I_nu(x) by the ascending series. Requires x > 0 and nu > -1.
inline double log_bessel_i_scaled_series(double nu, double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0, log_rescale = 0.0;
  for (int m = 1; m < 100000; ++m) {
    term *= q / (m * (nu + m));
    sum += term;
    if (sum > 1e250) {
      sum *= 1e-250;
      term *= 1e-250;
      log_rescale += 250.0 * std::log(10.0);
    }
    if (term < 1e-17 * sum && m * (nu + m) > q) break;
  }
  return -x + nu * std::log(0.5 * x) - std::lgamma(nu + 1.0) + std::log(sum) + log_rescale;
}

/// e^{-x} I_nu(x) by the Hankel expansion; accurate for x well beyond nu^2.
inline double bessel_i_scaled_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    double next = -term * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
    if (std::abs(next) >= std::abs(term)) break;  // series started diverging
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * pi * x);
}

/// e^{-x} I_nu(x) for half-integer nu >= -1/2 from the hyperbolic forms of I_{-1/2}, I_{1/2}
/// and upward recurrence. Upward recurrence is stable only once x exceeds about nu.
inline double bessel_i_scaled_half_integer(double nu, double x) {
  const double pref = std::sqrt(2.0 / (pi * x));
  double lower = pref * 0.5 * (1.0 + std::exp(-2.0 * x));  // order -1/2
  double upper = pref * 0.5 * -std::expm1(-2.0 * x);       // order +1/2
  if (nu == -0.5) return lower;
  for (double mu = 0.5; mu < nu; mu += 1.0) {
    double next = lower - (2.0 * mu / x) * upper;
    lower = upper;
    upper = next;
  }
  return upper;
}

}  // namespace detail

/// e^{-x} I_nu(x) for nu >= -1/2, x >= 0.
inline SpecFunResult bessel_i_scaled(double nu, double x) {
  udw::detail::require(std::isfinite(x) && std::isfinite(nu), "bessel_i_scaled: non-finite argument");
  udw::detail::require(x >= 0.0, "bessel_i_scaled: x must be >= 0");
  udw::detail::require(nu >= -0.5, "bessel_i_scaled: order must be >= -1/2");
  if (x == 0.0) {
    udw::detail::require(nu >= 0.0, "bessel_i_scaled: I_nu(0) diverges for nu < 0");
    return {nu == 0.0 ? 1.0 : 0.0, std::nullopt};
  }
  if (detail::is_half_integer(nu) && x >= 2.0 * nu + 2.0)
    return {detail::bessel_i_scaled_half_integer(nu, x), std::nullopt};
  if (x < detail::switchover(nu)) return detail::from_log(detail::log_bessel_i_scaled_series(nu, x));
  return {detail::bessel_i_scaled_asymptotic(nu, x), std::nullopt};
}

/// log I_nu(x) for x > 0; never overflows.
inline double log_bessel_i(double nu, double x) {
  udw::detail::require(x > 0.0, "log_bessel_i: x must be > 0");
  return x + bessel_i_scaled(nu, x).log_abs();
}

/// Regularized 0F1(;b;z) = sum_m z^m / (m! Gamma(b+m)) for b > 0, z >= 0.
inline SpecFunResult hyp0f1_reg(double b, double z) {
  udw::detail::require(std::isfinite(b) && std::isfinite(z), "hyp0f1_reg: non-finite argument");
  udw::detail::require(b > 0.0, "hyp0f1_reg: b must be > 0");
  udw::detail::require(z >= 0.0, "hyp0f1_reg: z must be >= 0");
  if (z == 0.0) return detail::from_log(-std::lgamma(b));
  const double nu = b - 1.0;
  const double x = 2.0 * std::sqrt(z);
  if (nu >= -0.5 && (x >= detail::switchover(nu) || (detail::is_half_integer(nu) && x >= 2.0 * nu + 2.0))) {
    // I_nu(x) = (x/2)^nu 0F1~(nu+1; x^2/4)
    return detail::from_log(log_bessel_i(nu, x) - nu * std::log(0.5 * x));
  }
  double term = 1.0, sum = 1.0, log_rescale = 0.0;
  for (int m = 1; m < 100000; ++m) {
    term *= z / (m * (b + m - 1.0));
    sum += term;
    if (sum > 1e250) {
      sum *= 1e-250;
      term *= 1e-250;
      log_rescale += 250.0 * std::log(10.0);
    }
    if (term < 1e-17 * sum && m * (b + m - 1.0) > z) break;
  }
  return detail::from_log(std::log(sum) + log_rescale - std::lgamma(b));
}

/// Regularized 1F1(a;b;z) for z <= 0, b > 0 and a < b.
///
/// Small |z| goes through Kummer's transformation so that every series term is positive;
/// large |z| uses the algebraic asymptotic expansion (the exponentially small part is dropped).
inline SpecFunResult hyp1f1_reg(double a, double b, double z) {
  udw::detail::require(std::isfinite(a) && std::isfinite(b) && std::isfinite(z), "hyp1f1_reg: non-finite argument");
  udw::detail::require(b > 0.0, "hyp1f1_reg: b must be > 0");
  udw::detail::require(z <= 0.0, "hyp1f1_reg: z must be <= 0");
  udw::detail::require(a < b, "hyp1f1_reg: requires a < b");
  const double y = -z;
  if (y <= 50.0) {
    // 1F1(a;b;-y) = e^{-y} 1F1(b-a;b;y)
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 10000; ++m) {
      term *= (b - a + m - 1.0) * y / ((b + m - 1.0) * m);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return detail::from_log(-y + std::log(sum) - std::lgamma(b));
  }
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    double next = term * (a + k - 1.0) * (a - b + k) / (k * y);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  // 1/Gamma(b-a) is positive because b-a > 0; sum stays positive for y > 50 at the orders used.
  SpecFunResult r = detail::from_log(-a * std::log(y) - std::lgamma(b - a) + std::log(std::abs(sum)));
  if (sum < 0) r.value = -r.value;
  return r;
}

/// Jacobi theta_3(0, q) = 1 + 2 sum_{m>=1} q^{m^2}.
inline double theta3_nome(double q) {
  udw::detail::require(q >= 0.0 && q < 1.0, "theta3_nome: nome must lie in [0,1)");
  if (q == 0.0) return 1.0;
  const double lq = std::log(q);
  double partial = 0.0;
  for (long m = 1;; ++m) {
    double term = std::exp(static_cast<double>(m) * m * lq);
    partial += term;
    if (term < 1e-16 * partial) break;
  }
  return 1.0 + 2.0 * partial;
}

inline double erf(double x) { return std::erf(x); }

inline double gamma(double x) {
  udw::detail::require(!(x <= 0.0 && x == std::floor(x)), "gamma: pole at non-positive integer");
  return std::tgamma(x);
}

}  // namespace udw::specfun
