#include <gtest/gtest.h>

#include <cmath>

#include "urnsa/error.hpp"
#include "urnsa/limit_theory.hpp"
#include "urnsa/polya_urn.hpp"
#include "urnsa/rng.hpp"

using namespace urnsa;

namespace {

constexpr ReplacementMatrix kToy{4, 5, 3, 2};
const double kBlack = std::nextafter(1.0, 0.0);

ReplacementMatrix random_matrix(Xoshiro256pp& rng) {
  for (;;) {
    ReplacementMatrix m{double(rng() % 8), double(rng() % 8), double(rng() % 8), double(rng() % 8)};
    if (m.sa_eligible()) return m;
  }
}

UrnState random_state(Xoshiro256pp& rng, const ReplacementMatrix& m) {
  UrnState s = UrnState::initial(double(1 + rng() % 10), double(1 + rng() % 10));
  const auto steps = rng() % 300;
  for (std::uint64_t k = 0; k < steps; ++k) s = urn_step(s, m, uniform_from_bits(rng()));
  return s;
}

}  // namespace

TEST(ReplacementMatrix, DerivedCoefficients) {
  EXPECT_EQ(kToy.alpha(), -4.0);
  EXPECT_EQ(kToy.beta(), -4.0);
  EXPECT_TRUE(kToy.sa_eligible());
  EXPECT_FALSE((ReplacementMatrix{0, 0, 1, 1}.sa_eligible()));
  EXPECT_FALSE((ReplacementMatrix{-1, 2, 1, 1}.sa_eligible()));
  EXPECT_THROW((ReplacementMatrix{0, 0, 1, 1}.require_sa()), Error);
  EXPECT_TRUE((ReplacementMatrix{2, 2, 1, 1}.singular()));
  EXPECT_EQ(kToy.max_row_sum(), 9.0);
  EXPECT_EQ(kToy.min_row_sum(), 5.0);
}

TEST(DriftFromMatrix, Examples) {
  EXPECT_EQ(drift_from_matrix(kToy), DriftPoly(-4, -4, 3));
  const DriftPoly identity = drift_from_matrix({1, 0, 0, 1});
  EXPECT_EQ(identity, DriftPoly(0, 0, 0));
  EXPECT_TRUE(identity.identically_zero());
  EXPECT_EQ(drift_from_matrix({1, 2, 2, 1}), DriftPoly(0, -4, 2));
}

TEST(ErrorPoly, Examples) {
  EXPECT_DOUBLE_EQ(error_poly_from_matrix(kToy)(0.5), 0.25);
  EXPECT_DOUBLE_EQ(error_poly_from_matrix({3, 0, 2, 5})(0.5), 2.25);
  Xoshiro256pp rng(3, 0);
  for (int i = 0; i < 100; ++i) {
    const ErrorPoly e = error_poly_from_matrix(random_matrix(rng));
    EXPECT_EQ(e(0.0), 0.0);
    EXPECT_EQ(e(1.0), 0.0);
    for (double x = 0.05; x < 1.0; x += 0.05) EXPECT_GE(e(x), 0.0);
  }
}

TEST(UrnStep, EnumeratedOutcomes) {
  const UrnState s = UrnState::initial(1, 1);
  const UrnState white = urn_step(s, kToy, 0.3);
  EXPECT_EQ(white.W, 5);
  EXPECT_EQ(white.B, 6);
  EXPECT_EQ(white.T(), 11);
  EXPECT_EQ(white.W_star, 1u);
  EXPECT_EQ(white.n, 1u);
  const UrnState black = urn_step(s, kToy, 0.7);
  EXPECT_EQ(black.W, 4);
  EXPECT_EQ(black.B, 3);
  EXPECT_EQ(black.T(), 7);
  EXPECT_EQ(black.W_star, 0u);
  const UrnState polya = urn_step(UrnState::initial(2, 1), {1, 0, 0, 1}, 0.5);
  EXPECT_EQ(polya.W, 3);
  EXPECT_EQ(polya.B, 1);
  EXPECT_EQ(polya.T(), 4);
}

TEST(UrnStep, RejectsBadInput) {
  EXPECT_THROW(urn_step(UrnState::initial(1, 1), kToy, 1.0), Error);
  EXPECT_THROW(urn_step(UrnState::initial(1, 1), kToy, -0.1), Error);
  EXPECT_THROW(UrnState::initial(0, 1), Error);
  EXPECT_THROW(UrnState::initial(1, -2), Error);
}

TEST(UrnNoise, HandEvaluation) {
  const UrnState s = UrnState::initial(1, 1);
  const DriftPoly f = drift_from_matrix(kToy);
  const double uw = urn_noise(s, urn_step(s, kToy, 0.3), f);
  const double ub = urn_noise(s, urn_step(s, kToy, 0.7), f);
  EXPECT_DOUBLE_EQ(uw, -0.5);
  EXPECT_DOUBLE_EQ(ub, 0.5);
  EXPECT_EQ(0.5 * uw + 0.5 * ub, 0.0);
}

TEST(UrnNoise, MartingaleAndDriftIdentitiesOverRandomStates) {
  Xoshiro256pp rng(5, 0);
  for (int i = 0; i < 1000; ++i) {
    const ReplacementMatrix m = random_matrix(rng);
    const UrnState s = random_state(rng, m);
    const DriftPoly f = drift_from_matrix(m);
    const double x = s.X();
    const UrnState w = urn_step(s, m, 0.0), b = urn_step(s, m, kBlack);
    ASSERT_EQ(w.W_star, s.W_star + 1);
    ASSERT_EQ(b.W_star, s.W_star);
    const double uw = urn_noise(s, w, f), ub = urn_noise(s, b, f);
    EXPECT_NEAR(x * uw + (1 - x) * ub, 0.0, 1e-12);
    EXPECT_NEAR(x * uw * uw + (1 - x) * ub * ub, error_poly_from_matrix(m)(x), 1e-12);
    // E_n[T_{n+1}(X_{n+1} - X_n)] = f(X_n), with the increment written via exact counts.
    const double drift = x * (w.W - w.T() * x) + (1 - x) * (b.W - b.T() * x);
    EXPECT_NEAR(drift, f(x), 1e-12);
  }
}

TEST(UrnState, BookkeepingIsExact) {
  Xoshiro256pp rng(6, 0);
  for (int i = 0; i < 100; ++i) {
    const ReplacementMatrix m = random_matrix(rng);
    const double W0 = double(1 + rng() % 10), B0 = double(1 + rng() % 10);
    UrnState s = UrnState::initial(W0, B0);
    for (int k = 0; k < 1000; ++k) {
      s = urn_step(s, m, uniform_from_bits(rng()));
      const double n = double(s.n), ws = double(s.W_star);
      ASSERT_EQ(s.W, W0 + m.c * n + (m.a - m.c) * ws);
      ASSERT_EQ(s.T(), W0 + B0 + (m.c + m.d) * n - m.alpha() * ws);
      ASSERT_EQ(s.T(), s.W + s.B);
    }
  }
}

TEST(UrnState, DefinitionBoundsHoldOnSimulatedPaths) {
  Xoshiro256pp rng(8, 0);
  for (int i = 0; i < 50; ++i) {
    const ReplacementMatrix m = random_matrix(rng);
    const DriftPoly f = drift_from_matrix(m);
    UrnState s = UrnState::initial(double(1 + rng() % 5), double(1 + rng() % 5));
    const double T0 = s.T();
    const double c_l = 1.0 / (T0 + m.max_row_sum());
    const double c_u = 1.0 / m.min_row_sum();
    const double K_u = std::max(std::abs(m.a - m.c), std::abs(m.b - m.d)) + m.max_row_sum();
    for (int k = 0; k < 2000; ++k) {
      const UrnState next = urn_step(s, m, uniform_from_bits(rng()));
      const double n = double(next.n);
      const double gamma_n = 1.0 / next.T();
      EXPECT_GE(gamma_n * n, c_l);
      EXPECT_LE(gamma_n * n, c_u);
      EXPECT_LE(std::abs(urn_noise(s, next, f)), K_u);
      EXPECT_GE(next.X(), 0.0);
      EXPECT_LE(next.X(), 1.0);
      s = next;
    }
  }
}

TEST(UrnState, SingularFamilyIsMonotoneTowardItsFixedFraction) {
  const ReplacementMatrix family[] = {{2, 2, 1, 1}, {1, 3, 0.5, 1.5}, {5, 1, 10, 2}};
  Xoshiro256pp rng(9, 0);
  for (const ReplacementMatrix& m : family) {
    const double p = m.a / (m.a + m.b);
    for (auto [W0, B0] : {std::pair{1.0, 5.0}, std::pair{5.0, 1.0}, std::pair{3.0, 2.0}}) {
      UrnState s = UrnState::initial(W0, B0);
      const double side = s.X() - p;
      for (int k = 0; k < 1024; ++k) {
        const UrnState next = urn_step(s, m, uniform_from_bits(rng()));
        if (side == 0) {
          ASSERT_EQ(next.X(), p);
        } else if (side < 0) {
          ASSERT_GT(next.X(), s.X());
          ASSERT_LT(next.X(), p);
        } else {
          ASSERT_LT(next.X(), s.X());
          ASSERT_GT(next.X(), p);
        }
        s = next;
      }
    }
  }
}

TEST(GammaLimit, Examples) {
  EXPECT_DOUBLE_EQ(gamma_limit(kToy, 0.5), 1.0 / 7);
  EXPECT_DOUBLE_EQ(gamma_limit({3, 0, 2, 5}, 0.5), 0.2);
  for (double p : {0.0, 0.3, 0.77, 1.0}) EXPECT_DOUBLE_EQ(gamma_limit({2, 1, 1, 2}, p), 1.0 / 3);
  EXPECT_THROW(gamma_limit(kToy, 1.5), Error);
}

TEST(GammaHat, Examples) {
  EXPECT_DOUBLE_EQ(gamma_hat(kToy).gamma_hat, 8.0 / 7);
  EXPECT_DOUBLE_EQ(gamma_hat({3, 0, 2, 5}).gamma_hat, 0.4);
  for (const ReplacementMatrix& m :
       {ReplacementMatrix{2, 1, 1, 2}, ReplacementMatrix{4, 2, 1, 5}, ReplacementMatrix{1, 3, 2, 2}}) {
    EXPECT_DOUBLE_EQ(gamma_hat(m).gamma_hat, (m.b + m.c) / (m.a + m.b));
  }
  EXPECT_THROW(gamma_hat({1, 0, 0, 1}), Error);
}

TEST(GammaDeviation, AlphaZeroClosedForm) {
  const ReplacementMatrix m{2, 1, 1, 2};
  const double gamma = 1.0 / 3;
  Xoshiro256pp rng(10, 0);
  UrnState s = UrnState::initial(2, 3);
  for (int k = 0; k < 500; ++k) {
    s = urn_step(s, m, uniform_from_bits(rng()));
    const GammaDeviation d = gamma_deviation(s, m, 5.0, 0.5, gamma);
    const double expected = -gamma * 5.0 / (5.0 + 3.0 * double(s.n));
    EXPECT_NEAR(d.direct, expected, 1e-15);
    EXPECT_NEAR(d.identity, expected, 1e-15);
  }
}

TEST(GammaDeviation, ZeroInitialTotalGivesZero) {
  // State reached from T0 = 0 after 10 draws, 4 of them white.
  const ReplacementMatrix m{2, 1, 1, 2};
  UrnState s;
  s.n = 10;
  s.W_star = 4;
  s.W = 1.0 * 10 + 1.0 * 4;
  s.B = 30 - s.W;
  const GammaDeviation d = gamma_deviation(s, m, 0.0, 0.5, 1.0 / 3);
  EXPECT_EQ(d.direct, 0.0);
  EXPECT_EQ(d.identity, 0.0);
}

TEST(GammaDeviation, IdentityMatchesAndIsOrderOfDistanceToZero) {
  const ReplacementMatrix m{3, 0, 2, 5};
  const GammaHat g = gamma_hat(m);
  // Near p the deviation is about 0.27 |X_n - p| plus T0/(25 n), so one is a safe constant.
  constexpr double kC = 1.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Xoshiro256pp rng(seed, 1);
    UrnState s = UrnState::initial(1, 1);
    for (int k = 0; k < 1000; ++k) s = urn_step(s, m, uniform_from_bits(rng()));
    const GammaDeviation d = gamma_deviation(s, m, 2.0, g.p, g.gamma);
    EXPECT_NEAR(d.direct, d.identity, 1e-12);
    EXPECT_LE(std::abs(d.direct), kC * (std::abs(s.X() - g.p) + 1.0 / double(s.n)));
  }
  EXPECT_THROW(gamma_deviation(UrnState::initial(1, 1), m, 2.0, g.p, g.gamma), Error);
}

TEST(MaxExactHorizon, CapsCountsBelowTwoToThe53) {
  const std::uint64_t h = max_exact_horizon(kToy, 2.0);
  EXPECT_GT(h, 1000000000000ULL);
  EXPECT_LE(2.0 + 9.0 * double(h), 9007199254740992.0);
}
