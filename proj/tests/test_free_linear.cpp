#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "udw/free_linear.hpp"
#include "udw/oracle.hpp"
#include "udw/peaks.hpp"

using namespace udw;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

DetectorSpec gap(double omega, double delta = 0.0) { return {omega, 1.0, Coupling::linear, delta}; }

double resonant(int n, double sigma) { return linear::prob_one_linear({n, 1.0, sigma, {}}, gap(1.0)).value; }

}  // namespace

TEST(IMinus, MatchesOracleOnValidationGrid) {
  for (int n = 1; n <= 4; ++n)
    for (double s : {0.2, 0.5, 1.0})
      for (double om : {0.5, 1.0, 2.0}) {
        WavepacketSpec wp{n, 1.0, s, {}};
        EXPECT_LT(rel(linear::i_minus(wp, gap(om)), oracle::oracle_i_minus(wp, gap(om))), 1e-8) << n << s << om;
      }
}

TEST(IMinus, OffResonanceThreeDimensions) {
  WavepacketSpec wp{3, 1.0, 0.5, {}};
  EXPECT_LT(rel(linear::i_minus(wp, gap(5.0)), oracle::oracle_i_minus(wp, gap(5.0))), 1e-8);
}

TEST(IMinus, OneDimensionalExplicitForm) {
  const double s = 0.1, k0 = 1.0, om = 1.0;
  const double bracket = std::exp(-(om - k0) * (om - k0) / (2 * s * s)) + std::exp(-(om + k0) * (om + k0) / (2 * s * s));
  const double explicit_p = std::sqrt(M_PI) / (s * om) * bracket * bracket;
  EXPECT_LT(rel(linear::prob_one_linear({1, k0, s, {}}, gap(om)).value, explicit_p), 1e-12);
}

TEST(IMinus, TwoDimensionsApproachesUnitResonance) {
  EXPECT_LT(rel(std::pow(linear::i_minus({2, 1.0, 1e-4, {}}, gap(1.0)), 2), 1.0), 1e-3);
}

TEST(IMinus, OneDimensionRequiresGapAboveCutoff) {
  EXPECT_THROW(linear::i_minus({1, 1.0, 0.5, 0.1}, gap(0.05)), DomainError);
}

TEST(IMinus, NarrowPacketsDoNotOverflow) {
  for (int n = 1; n <= 4; ++n) {
    const double v = linear::i_minus({n, 1.0, 1e-4, {}}, gap(1.0));
    EXPECT_TRUE(std::isfinite(v) && v > 0.0) << n;
  }
}

TEST(ProbOneLinear, ResonantScalingLaw) {
  const double s = 1e-3;
  for (int n = 1; n <= 4; ++n) {
    const double law = std::pow(s / std::sqrt(M_PI), n - 2);
    EXPECT_LT(rel(resonant(n, s) / std::pow(coupling_scale(n, 1.0, Coupling::linear), 2), law), 0.01) << n;
  }
}

TEST(ProbOneLinear, DimensionTrichotomy) {
  const double a = resonant(1, 0.5), b = resonant(1, 0.25), c = resonant(1, 0.1);
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
  EXPECT_LT(rel(resonant(2, 0.1), 1.0), 0.05);
  for (int n : {3, 4}) {
    EXPECT_GT(resonant(n, 0.5), resonant(n, 0.25));
    EXPECT_GT(resonant(n, 0.25), resonant(n, 0.1));
  }
}

TEST(ProbOneLinear, ArgmaxApproachesPeakMomentum) {
  for (int n = 2; n <= 4; ++n) {
    double previous = INFINITY;
    for (double s : {1.0, 0.5, 0.25}) {
      auto f = [&](double om) { return linear::prob_one_linear({n, 1.0, s, {}}, gap(om)).value; };
      const double d = std::abs(peaks::argmax_scan(f, 0.05, 3.0, 0.01).x - 1.0);
      EXPECT_LT(d, previous) << n << " " << s;
      previous = d;
    }
  }
}

TEST(ProbOneLinear, SmearingSuppressesNarrowPacketsFaster) {
  for (double s : {0.5, 0.25}) {
    const double point = resonant(3, s);
    const double smeared = linear::prob_one_linear({3, 1.0, s, {}}, gap(1.0, 1.0 / s)).value;
    EXPECT_NEAR(smeared / point, std::exp(-0.5 / (s * s)), 1e-14);
  }
}

TEST(ProbOneLinear, RejectsQuadraticDetector) {
  EXPECT_THROW(linear::prob_one_linear({3, 1.0, 1.0, {}}, {1.0, 1.0, Coupling::quadratic, 0.0}), DomainError);
}

TEST(ProbOneRunning, VanishesInMonochromaticLimit) {
  double previous = INFINITY;
  for (double s : {1e-1, 1e-2, 1e-3}) {
    const double p = linear::prob_one_running({1, 1.0, s, {}}, gap(1.0), 1.0).value;
    EXPECT_LT(p, previous);
    previous = p;
  }
  EXPECT_LT(previous, 1e-2);
}

TEST(ProbOneRunning, MatchesLinearWithRescaledCoupling) {
  for (int n = 1; n <= 4; ++n) {
    const double s = 0.4, gamma = 0.7;
    DetectorSpec det = gap(1.3);
    det.lambda = gamma * std::pow(s, 0.5 * (3 - n));
    const double direct = linear::prob_one_linear({n, 1.0, s, {}}, det).value;
    EXPECT_LT(rel(linear::prob_one_running({n, 1.0, s, {}}, gap(1.3), gamma).value, direct), 1e-12) << n;
  }
}

TEST(ProbTwoLinear, SameModeDoublesProbability) {
  for (int n = 1; n <= 4; ++n) {
    const double one = linear::prob_one_linear({n, 1.0, 0.3, {}}, gap(1.1)).value;
    const double two = linear::prob_two_linear({n, 1.0, 1.0, 0.3, {}}, gap(1.1)).value;
    EXPECT_LT(rel(two, 2.0 * one), 1e-10) << n;
  }
}

TEST(ProbTwoLinear, FarApartPeaksReduceToSingleAmplitudes) {
  TwoParticleSpec spec{3, 1.0, 20.0, 0.3, {}};
  EXPECT_LT(rel(linear::m_minus(spec, Eta::one, gap(1.0)), linear::i_minus(spec.particle(Eta::one), gap(1.0))), 1e-15);
}

TEST(ProbTwoLinear, LargeGapSuppressed) {
  EXPECT_LT(linear::prob_two_linear({3, 1.0, 2.0, 0.25, {}}, gap(20.0)).value, 1e-100);
}

TEST(ProbTwoLinear, ComponentsSumToTotal) {
  auto r = linear::prob_two_linear({3, 1.0, 1.5, 0.5, {}}, gap(1.2));
  EXPECT_NEAR(r.component("peak1") + r.component("peak2") + r.component("interference"), r.value, 1e-15 * r.value);
}

TEST(ProbTwoLinear, TwoPeaksWithLowerOneHigher) {
  std::vector<double> grid, p;
  for (int i = 0; i <= 350; ++i) {
    const double om = 0.02 + i * 0.01;
    grid.push_back(om);
    p.push_back(linear::prob_two_linear({3, 1.0, 2.0, 0.25, {}}, gap(om)).value);
  }
  const auto maxima = peaks::local_maxima(p);
  ASSERT_EQ(maxima.size(), 2u);
  EXPECT_NEAR(grid[maxima[0]], 1.0, 0.15);
  EXPECT_NEAR(grid[maxima[1]], 2.0, 0.3);
  EXPECT_GT(p[maxima[0]], p[maxima[1]]);
}
