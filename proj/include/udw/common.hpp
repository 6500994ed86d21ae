#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace udw {

inline constexpr double pi = std::numbers::pi;

/// Raised when an argument lies outside the mathematical or physical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a truncated mode sum cannot meet its tail bound.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double tail_bound)
      : std::runtime_error(what), tail_bound_(tail_bound) {}
  double tail_bound() const noexcept { return tail_bound_; }

 private:
  double tail_bound_;
};

/// A named sub-result reported alongside a probability (e.g. p_q, p_r, p_s).
struct Component {
  std::string name;
  double value = 0.0;
};

/// Outcome of a transition-probability evaluation.
///
/// `error_estimate` is an absolute bound on the numerical error of `value`; closed-form
/// results carry a rounding-level estimate. `warnings` collects regime-validity notes that do
/// not invalidate the number.
struct ProbabilityResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::vector<Component> components;
  std::vector<std::string> warnings;

  double component(std::string_view name) const {
    for (const auto& c : components)
      if (c.name == name) return c.value;
    throw std::out_of_range("no component named " + std::string(name));
  }
};

/// Detector-field coupling.
enum class Coupling { linear, quadratic };

/// Two-level detector parameters.
///
/// `omega` is the energy gap (inverse length). `lambda` has units length^{(n-3)/2} for the
/// linear model and length^{n-2} for the quadratic one. `smearing_delta` is the width of a
/// Gaussian spatial profile; zero means pointlike.
struct DetectorSpec {
  double omega = 1.0;
  double lambda = 1.0;
  Coupling coupling = Coupling::linear;
  double smearing_delta = 0.0;
};

/// Selects one of the two peaks of a two-particle wavepacket.
enum class Eta { one, two };

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

inline void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) throw DomainError(std::string(name) + " must be finite");
}

/// Unit (n-1)-sphere area 2 pi^{n/2} / Gamma(n/2); equals 2 for n = 1.
inline double sphere_area(int n) {
  return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// Exactly-reduced sin(pi x); returns exact zeros at integers and exact +-1 at half-integers.
inline double sin_pi(double x) {
  double r = std::fmod(x, 2.0);  // exact
  if (r < 0) r += 2.0;
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == 1.5) return -1.0;
  double sign = 1.0;
  if (r > 1.0) {
    r -= 1.0;
    sign = -1.0;
  }
  if (r > 0.5) r = 1.0 - r;
  return sign * std::sin(pi * r);
}

}  // namespace detail

inline void validate(const DetectorSpec& det) {
  detail::require(std::isfinite(det.omega) && det.omega > 0.0, "detector: omega must be positive");
  detail::require(std::isfinite(det.lambda) && det.lambda > 0.0, "detector: lambda must be positive");
  detail::require(std::isfinite(det.smearing_delta) && det.smearing_delta >= 0.0,
                  "detector: smearing width must be >= 0");
}

}  // namespace udw
