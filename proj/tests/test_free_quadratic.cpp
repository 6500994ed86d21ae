#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "udw/free_linear.hpp"
#include "udw/free_quadratic.hpp"
#include "udw/oracle.hpp"
#include "udw/peaks.hpp"

using namespace udw;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

DetectorSpec quad_gap(double omega) { return {omega, 1.0, Coupling::quadratic, 0.0}; }

double p_one(int n, double sigma, double omega) {
  return quadratic::prob_one_quadratic({n, 1.0, sigma, {}}, quad_gap(omega)).value;
}

}  // namespace

TEST(JMinus, MatchesOracle) {
  for (int n = 1; n <= 4; ++n)
    for (double k1 : {0.0, 0.5, 2.0}) {
      WavepacketSpec wp{n, 1.0, 0.5, {}};
      EXPECT_LT(rel(quadratic::j_minus(wp, quad_gap(1.0), k1), oracle::oracle_j_minus(wp, quad_gap(1.0), k1)), 1e-9)
          << n << " " << k1;
    }
}

TEST(JMinus, VanishesAtLargeMomentum) {
  EXPECT_LT(quadratic::j_minus({3, 1.0, 0.5, {}}, quad_gap(1.0), 40.0), 1e-300);
}

TEST(JMinus, OneDimensionalExplicitForm) {
  // (pi s^2)^{-1/4} / sqrt(4 pi a) [e^{-(a-k0)^2/2s^2} + e^{-(a+k0)^2/2s^2}], a = k1 + Omega
  const double s = 0.3, k0 = 1.0;
  for (double k1 : {0.1, 0.7, 1.5}) {
    const double a = k1 + 0.8;
    const double explicit_j = std::pow(M_PI * s * s, -0.25) / std::sqrt(4.0 * M_PI * a) *
                              (std::exp(-(a - k0) * (a - k0) / (2 * s * s)) + std::exp(-(a + k0) * (a + k0) / (2 * s * s)));
    EXPECT_LT(rel(quadratic::j_minus({1, k0, s, {}}, quad_gap(0.8), k1), explicit_j), 1e-12) << k1;
  }
}

TEST(ProbOneQuadratic, WidthTrichotomyAtResonance) {
  EXPECT_LT(p_one(1, 1.0, 1.0), p_one(1, 0.5, 1.0));
  EXPECT_LT(p_one(1, 0.5, 1.0), p_one(1, 0.25, 1.0));
  for (int n = 2; n <= 4; ++n) {
    EXPECT_GT(p_one(n, 1.0, 1.0), p_one(n, 0.5, 1.0)) << n;
    EXPECT_GT(p_one(n, 0.5, 1.0), p_one(n, 0.25, 1.0)) << n;
  }
}

TEST(ProbOneQuadratic, NoResonanceInThreeDimensions) {
  std::vector<double> p;
  for (int i = 0; i <= 100; ++i) p.push_back(p_one(3, 0.5, 0.5 + i * 0.01));
  EXPECT_TRUE(peaks::local_maxima(p).empty());
  EXPECT_GT(p_one(3, 0.5, 0.05), p_one(3, 0.5, 1.0));
}

TEST(ProbOneQuadratic, ToleranceIsHonoured) {
  auto r = quadratic::prob_one_quadratic({3, 1.0, 0.5, {}}, quad_gap(1.0), 1e-12);
  auto loose = quadratic::prob_one_quadratic({3, 1.0, 0.5, {}}, quad_gap(1.0), 1e-6);
  EXPECT_LE(std::abs(loose.value - r.value), std::max(loose.error_estimate, 1e-14 * r.value));
}

TEST(ProbOneQuadratic, RejectsLinearDetector) {
  EXPECT_THROW(quadratic::prob_one_quadratic({3, 1.0, 0.5, {}}, {1.0, 1.0, Coupling::linear, 0.0}), DomainError);
}

TEST(QMinus, SameModeCarriesNormalization) {
  // With eta1 = eta2 the normalization is 1/sqrt2; the 2 pi is the time-integral factor.
  TwoParticleSpec spec{3, 1.0, 1.0, 0.5, {}};
  const double j = quadratic::j_minus(spec.particle(Eta::one), quad_gap(1.0), 0.4);
  EXPECT_LT(rel(quadratic::q_minus(spec, quad_gap(1.0), Eta::one, 0.4), 2.0 * M_PI * j / std::sqrt(2.0)), 1e-14);
}

TEST(QMinus, DecaysAtLargeMomentum) {
  EXPECT_LT(quadratic::q_minus({3, 1.0, 3.0, 0.5, {}}, quad_gap(1.0), Eta::two, 50.0), 1e-300);
}

TEST(RMinus, MatchesOracle) {
  for (int n : {1, 2, 3, 4})
    for (double om : {1.5, 4.0}) {
      TwoParticleSpec spec{n, 1.0, 3.0, 0.5, {}};
      const double want = oracle::oracle_r_minus(spec, quad_gap(om)).value;
      EXPECT_LT(rel(quadratic::r_minus(spec, quad_gap(om), 1e-11).value, want), 1e-7) << n << " " << om;
    }
}

TEST(RMinus, VanishesAsGapCloses) {
  TwoParticleSpec spec{3, 1.0, 3.0, 0.5, {}};
  EXPECT_LT(quadratic::r_minus(spec, quad_gap(1e-3)).value, 1e-6 * quadratic::r_minus(spec, quad_gap(4.0)).value);
}

TEST(SMinus, MatchesOracleBothOrderings) {
  for (int n : {1, 2, 3, 4}) {
    TwoParticleSpec spec{n, 1.0, 3.0, 0.5, {}};
    for (auto [i, j] : {std::pair{Eta::one, Eta::two}, std::pair{Eta::two, Eta::one}, std::pair{Eta::one, Eta::one}}) {
      const double want = oracle::oracle_s_minus(spec, quad_gap(2.0), i, j).value;
      EXPECT_LT(rel(quadratic::s_minus(spec, quad_gap(2.0), i, j, 1e-11).value, want), 1e-7) << n;
    }
  }
}

TEST(SMinus, SamePeakOrderingsAgree) {
  TwoParticleSpec spec{3, 1.5, 1.5, 0.5, {}};
  EXPECT_EQ(quadratic::s_minus(spec, quad_gap(1.0), Eta::one, Eta::two).value,
            quadratic::s_minus(spec, quad_gap(1.0), Eta::two, Eta::one).value);
}

TEST(SMinus, LargeGapSuppressed) {
  TwoParticleSpec spec{3, 1.0, 3.0, 0.5, {}};
  EXPECT_LT(quadratic::s_minus(spec, quad_gap(30.0), Eta::one, Eta::two).value, 1e-100);
}

TEST(ProbTwoQuadratic, ComponentsAreNonNegativeAndAdd) {
  for (double om : {0.3, 1.0, 2.0, 4.0}) {
    auto r = quadratic::prob_two_quadratic({3, 1.0, 3.0, 0.5, {}}, quad_gap(om));
    EXPECT_GE(r.p_q, 0.0);
    EXPECT_GE(r.p_r, 0.0);
    EXPECT_GE(r.p_s, 0.0);
    EXPECT_LT(rel(r.p_q + r.p_r + r.p_s, r.total), 1e-12);
  }
}

TEST(ProbTwoQuadratic, SameModeDoublesOneParticle) {
  for (int n = 1; n <= 4; ++n) {
    auto r = quadratic::prob_two_quadratic({n, 1.0, 1.0, 0.5, {}}, quad_gap(1.0), 1e-11);
    EXPECT_LT(rel(r.p_q, 2.0 * p_one(n, 0.5, 1.0)), 1e-9) << n;
  }
}

TEST(ProbTwoQuadratic, SumFrequencyPeak) {
  for (int n = 2; n <= 4; ++n)
    for (double s : {0.5, 1.0}) {
      auto f = [&](double om) { return quadratic::prob_two_quadratic({n, 1.0, 3.0, s, {}}, quad_gap(om), 1e-7).p_r; };
      const double x = peaks::argmax_scan(f, 0.5, 8.0, 0.1, 1e-4).x;
      EXPECT_NEAR(x, 4.0, 4.0 * std::max(0.15, s)) << n << " " << s;
    }
}

TEST(ProbTwoQuadratic, DifferenceFrequencyPeak) {
  auto f = [](double om) { return quadratic::prob_two_quadratic({3, 1.0, 3.0, 0.5, {}}, quad_gap(om), 1e-7).p_s; };
  const double x = peaks::argmax_scan(f, 1.0, 5.0, 0.05, 1e-4).x;  // above half the peak separation
  EXPECT_NEAR(x, 2.0, 0.3);
}

TEST(ProbTwoQuadratic, OneDimensionResonatesAtBothPeaks) {
  std::vector<double> grid, pq;
  for (int i = 0; i <= 200; ++i) {
    grid.push_back(0.3 + 0.02 * i);
    pq.push_back(quadratic::prob_two_quadratic({1, 1.0, 3.0, 0.25, {}}, quad_gap(grid.back()), 1e-7).p_q);
  }
  const auto m = peaks::local_maxima(pq);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_NEAR(grid[m[0]], 1.0, 0.2);
  EXPECT_NEAR(grid[m[1]], 3.0, 0.3);
}

TEST(ProbTwoQuadratic, QPartWidthTrichotomy) {
  auto pq = [](int n, double s) { return quadratic::prob_two_quadratic({n, 1.0, 3.0, s, {}}, quad_gap(1.0), 1e-8).p_q; };
  EXPECT_LT(pq(1, 1.0), pq(1, 0.5));
  for (int n = 2; n <= 4; ++n) EXPECT_GT(pq(n, 1.0), pq(n, 0.5)) << n;
}
