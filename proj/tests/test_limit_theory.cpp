#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "urnsa/drift_poly.hpp"
#include "urnsa/error.hpp"
#include "urnsa/limit_theory.hpp"
#include "urnsa/rng.hpp"
#include "urnsa/special.hpp"

using namespace urnsa;

// Reference values below come from tests/oracles/reference_values.py (mpmath, 40 digits).

TEST(StableZeros, ToyDrift) {
  const auto zeros = stable_zeros(DriftPoly(-4, -4, 3));
  ASSERT_EQ(zeros.size(), 2u);
  EXPECT_DOUBLE_EQ(zeros[0].value, -1.5);
  EXPECT_EQ(zeros[0].stability, Stability::Unstable);
  EXPECT_FALSE(zeros[0].interior);
  EXPECT_DOUBLE_EQ(zeros[1].value, 0.5);
  EXPECT_EQ(zeros[1].stability, Stability::Stable);
  EXPECT_TRUE(zeros[1].interior);
}

TEST(StableZeros, PowerLawDrift) {
  const auto zeros = stable_zeros(DriftPoly(4, -6, 2));
  ASSERT_EQ(zeros.size(), 2u);
  EXPECT_DOUBLE_EQ(zeros[0].value, 0.5);
  EXPECT_EQ(zeros[0].stability, Stability::Stable);
  EXPECT_DOUBLE_EQ(zeros[1].value, 1.0);
  EXPECT_EQ(zeros[1].stability, Stability::Unstable);
  EXPECT_FALSE(zeros[1].interior);
  EXPECT_TRUE(zeros[1].in_unit_interval);
}

TEST(StableZeros, ZeroDriftAndDoubleZero) {
  try {
    stable_zeros(DriftPoly(0, 0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroDrift);
  }
  const auto dz = stable_zeros(DriftPoly(-1, 1, -0.25));  // -(x - 1/2)^2
  ASSERT_FALSE(dz.empty());
  EXPECT_EQ(dz[0].stability, Stability::DoubleZero);
  EXPECT_NEAR(dz[0].value, 0.5, 1e-12);
}

TEST(StableZeros, RootsAndTagsAgreeWithFiniteDifferences) {
  Xoshiro256pp rng(21, 0);
  int roots = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto coef = [&] { return 10.0 * uniform_from_bits(rng()) - 5.0; };
    const DriftPoly f(i % 5 == 0 ? 0.0 : coef(), coef(), coef());
    for (const DriftZero& z : stable_zeros(f)) {
      ++roots;
      EXPECT_LE(std::abs(f(z.value)), 1e-10);
      if (z.stability == Stability::DoubleZero) continue;
      constexpr double eps = 1e-6;
      const double slope = (f(z.value + eps) - f(z.value - eps)) / (2 * eps);
      EXPECT_EQ(z.stability == Stability::Stable, slope < 0) << "root " << z.value;
    }
  }
  EXPECT_GT(roots, 1000);
}

TEST(DriftPoly, FactoredHMatchesDerivativeAtTheZero) {
  const DriftPoly f(-4, -4, 3);
  EXPECT_EQ(f.h(0.5, 0.5), -f.derivative(0.5));
  for (double x = 0.0; x <= 1.0; x += 0.125) {
    if (x == 0.5) continue;
    EXPECT_NEAR(f.h(x, 0.5), -f(x) / (x - 0.5), 1e-12);
  }
}

TEST(Classify, WorkedExamples) {
  const LimitPrediction toy = classify({4, 5, 3, 2});
  EXPECT_EQ(toy.regime, Regime::CltSqrtN);
  EXPECT_NEAR(*toy.predicted_variance, 1.0 / 252, 1e-15);
  EXPECT_EQ(toy.scaling.x, 0.5);
  EXPECT_EQ(toy.scaling.y, 0.0);
  EXPECT_FALSE(toy.as_exponent);

  const LimitPrediction friedman = classify({3, 1, 1, 3});
  EXPECT_EQ(friedman.regime, Regime::CltSqrtNOverLog);
  EXPECT_NEAR(*friedman.predicted_variance, 1.0 / 16, 1e-15);
  EXPECT_EQ(friedman.scaling.y, -0.5);

  const LimitPrediction janson = classify({3, 0, 2, 5});
  EXPECT_EQ(janson.regime, Regime::AsPowerLaw);
  EXPECT_NEAR(*janson.as_exponent, 0.4, 1e-15);
  EXPECT_FALSE(janson.predicted_variance);
  EXPECT_NEAR(janson.sigma2, 0.04 * 2.25, 1e-15);

  const LimitPrediction singular = classify({2, 2, 1, 1});
  EXPECT_EQ(singular.regime, Regime::SingularMonotone);
  EXPECT_DOUBLE_EQ(singular.gamma_hat, 1.0);
  EXPECT_EQ(singular.sigma2, 0.0);

  EXPECT_EQ(classify({1, 0, 0, 1}).regime, Regime::ZeroDriftBeta);
  EXPECT_FALSE(classify({1, 0, 0, 1}).predicted_variance);
  EXPECT_EQ(classify({1, 0, 1, 0}).regime, Regime::NotApplicable);  // zero only at the boundary
  EXPECT_THROW(classify({0, 0, 1, 1}), Error);
  EXPECT_STREQ(to_string(Regime::CltSqrtNOverLog), "CLT_SQRT_N_OVER_LOG");
}

TEST(Classify, InvariantUnderScaling) {
  Xoshiro256pp rng(22, 0);
  int compared = 0;
  for (int i = 0; i < 500; ++i) {
    ReplacementMatrix m{double(rng() % 7), double(rng() % 7), double(rng() % 7), double(rng() % 7)};
    if (!m.sa_eligible()) continue;
    const LimitPrediction base = classify(m);
    for (double s : {0.5, 3.0, 17.25}) {
      const LimitPrediction scaled = classify(m.scaled(s));
      ASSERT_EQ(scaled.regime, base.regime);
      if (!base.has_zero) continue;
      EXPECT_NEAR(scaled.gamma_hat, base.gamma_hat, 1e-12);
      EXPECT_NEAR(scaled.gamma * s, base.gamma, 1e-12 * base.gamma);
      EXPECT_NEAR(scaled.h_p / s, base.h_p, 1e-12 * std::abs(base.h_p));
      ++compared;
    }
  }
  EXPECT_GT(compared, 300);
}

TEST(VarianceAlpha0, Examples) {
  EXPECT_NEAR(variance_alpha0({2, 1, 1, 2}), 1.0 / 12, 1e-15);
  EXPECT_NEAR(variance_alpha0({3, 1, 1, 3}), 1.0 / 16, 1e-15);
  EXPECT_NEAR(variance_alpha0({1, 2, 2, 1}), 1.0 / 60, 1e-15);
  for (auto [a, b] : {std::pair{1.0, 2.0}, std::pair{2.0, 5.0}, std::pair{0.0, 1.0}}) {
    EXPECT_NEAR(variance_alpha0({a, b, b, a}), (a - b) * (a - b) / (4 * (a + b) * (3 * b - a)), 1e-15);
  }
  EXPECT_THROW(variance_alpha0({4, 5, 3, 2}), Error);  // a+b != c+d
  EXPECT_THROW(variance_alpha0({2, 2, 2, 2}), Error);  // a = c
  EXPECT_THROW(variance_alpha0({5, 1, 1, 5}), Error);  // a > b+2c
}

TEST(VarianceAlpha0, AgreesWithGeneralFormOverRandomMatrices) {
  Xoshiro256pp rng(23, 0);
  const auto uni = [&](double lo, double hi) { return lo + (hi - lo) * uniform_from_bits(rng()); };
  for (int i = 0; i < 1000; ++i) {
    const double b = uni(0.1, 5.0), c = uni(0.1, 5.0);
    double a;
    // Keep gamma_hat - 1/2 away from zero so the comparison is well conditioned.
    do a = uni(std::max(0.0, c - b), 0.98 * (b + 2 * c));
    while (a == c);
    const ReplacementMatrix m{a, b, c, a + b - c};
    const LimitPrediction pred = classify(m);
    ASSERT_EQ(pred.regime, Regime::CltSqrtN);
    const double general = pred.gamma * pred.gamma * error_poly_from_matrix(m)(pred.p) / (2 * (pred.gamma_hat - 0.5));
    EXPECT_NEAR(variance_alpha0(m) / general, 1.0, 1e-12);
  }
}

TEST(ProductPAlpha, Examples) {
  EXPECT_DOUBLE_EQ(product_P_alpha(2, 4, 0.5), 0.546875);
  EXPECT_EQ(product_P_alpha(5, 4, 0.5), 1.0);
  EXPECT_NEAR(product_P_alpha(10, 1000, 0.4), 0.15396118060079022579, 1e-14);
  EXPECT_DOUBLE_EQ(product_P_alpha(1, 5, 0.5), 0.24609375);
  EXPECT_THROW(product_P_alpha(2, 4, 1.5), Error);
}

TEST(ProductPAlpha, RelativeErrorBoundedByConstantOverM) {
  constexpr double kC = 1.0;
  for (std::uint64_t m : {2ULL, 10ULL, 100ULL}) {
    for (double alpha : {0.1, 0.4, 0.9}) {
      for (std::uint64_t n = m; n <= 2000000; n = 2 * n + 1) {
        const double rel = product_P_alpha(m, n, alpha) * std::pow(double(n) / double(m), alpha) - 1.0;
        EXPECT_LE(std::abs(rel), kC / double(m)) << "m=" << m << " n=" << n << " alpha=" << alpha;
      }
    }
  }
}

TEST(ChungRecursion, FixedPointAndLimits) {
  for (std::uint64_t N : {1ULL, 10ULL, 1000ULL, 100000ULL})
    EXPECT_NEAR(chung_recursion(2.0, 1.5, 3.0, StepFamily::N, N), 2.0, 1e-12);
  EXPECT_NEAR(chung_recursion(0.0, 2.0, 1.0, StepFamily::N, 1000000), 0.5, 1e-3);
  EXPECT_NEAR(chung_recursion(0.0, 2.0, 1.0, StepFamily::N, 1000000), 0.499999999994423, 1e-12);
}

TEST(ChungRecursion, LogDecayMatchesOracle) {
  // The n ln n family decays only like a power of ln N: 0.127 at 1e4, 0.085 at 1e6.
  const double at4 = chung_recursion(5.0, 1.0, 0.0, StepFamily::NLogN, 10000);
  const double at6 = chung_recursion(5.0, 1.0, 0.0, StepFamily::NLogN, 1000000);
  EXPECT_NEAR(at4, 0.12696063643326624, 1e-12);
  EXPECT_NEAR(at6, 0.08463992648439107, 1e-12);
  EXPECT_LT(at6, at4);
  EXPECT_LT(at6, 0.1);
  EXPECT_THROW(chung_recursion(1.0, 0.0, 1.0, StepFamily::N, 10), Error);
}

TEST(ChungRecursion, MatchesSyntheticSecondMomentRecursion) {
  // b_{k+1} = (1 - Gamma/g_k)^2 b_k + sigma^2/g_k differs from the Chung form with
  // A = 2 Gamma, B = sigma^2 only by Gamma^2 b_k / g_k^2.
  const double Gamma = 1.0, sigma2 = 1.0;
  const std::uint64_t N = 100000;
  double b = 0.0;
  for (std::uint64_t k = first_contracting_index(StepFamily::N, 2 * Gamma); k < N; ++k) {
    const double g = double(k);
    b = (1 - Gamma / g) * (1 - Gamma / g) * b + sigma2 / g;
  }
  EXPECT_NEAR(b, chung_recursion(0.0, 2 * Gamma, sigma2, StepFamily::N, N), 1e-4);
  EXPECT_NEAR(b, 0.5, 1e-3);
}

TEST(SpecialFunctions, GammaSpotValues) {
  EXPECT_NEAR(gamma_fn(5.0), 24.0, 24e-10);
  EXPECT_NEAR(gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-10);
  EXPECT_NEAR(gamma_fn(0.2), 4.5908437120, 1e-10);
  EXPECT_NEAR(gamma_fn(0.2) / 4.5908437119988030532, 1.0, 1e-10);
  EXPECT_NEAR(gamma_fn(0.8) / 1.1642297137253033736, 1.0, 1e-10);
  EXPECT_THROW(gamma_fn(0.0), Error);
  EXPECT_THROW(gamma_fn(-1.5), Error);
}

TEST(SpecialFunctions, NormalCdfAndQuantile) {
  EXPECT_EQ(normal_cdf(0, 0, 1), 0.5);
  EXPECT_EQ(normal_cdf(3.25, 3.25, 7.0), 0.5);
  EXPECT_NEAR(normal_cdf(1, 0, 1), 0.8413447461, 1e-10);
  EXPECT_NEAR(normal_cdf(-2.5, 0, 1), 0.006209665325776135167, 1e-15);
  EXPECT_NEAR(normal_cdf(2, 0, 4), 0.8413447461, 1e-10);
  EXPECT_THROW(normal_cdf(0, 0, 0), Error);
  EXPECT_NEAR(normal_quantile(0.975), 1.9599639845400542355, 1e-12);
  EXPECT_NEAR(normal_quantile(0.001), -3.0902323061678135415, 1e-12);
  EXPECT_NEAR(normal_quantile(1e-9), -5.9978070150076868716, 1e-10);
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
  EXPECT_THROW(normal_quantile(1.0), Error);
}

TEST(JansonMean, Examples) {
  EXPECT_NEAR(janson_mean(4, 4), 11.829736841131678899, 1e-10);
  EXPECT_NEAR(janson_mean(4, 4), 3 * gamma_fn(0.2) / gamma_fn(0.8), 1e-12);
  EXPECT_NEAR(janson_mean(5, 8), 0.0, 1e-14);
  EXPECT_NEAR(janson_mean(1, 4), 0.0, 1e-14);
  EXPECT_NEAR(janson_mean(4, 9), -1.9716228068552798165, 1e-12);
  EXPECT_NEAR(janson_mean(8, 8), 3.3575248622103667909, 1e-12);
  try {
    janson_mean(4, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UndefinedMean);
  }
}

TEST(JansonMean, LinearInW0AtB0Eight) {
  const double g85 = gamma_fn(1.6);
  for (double W0 : {0.5, 1.0, 2.0, 5.0, 7.5, 20.0}) EXPECT_NEAR(janson_mean(W0, 8), (W0 - 5.0) / g85, 1e-12);
}

TEST(PredictedScaledMean, Examples) {
  EXPECT_NEAR(predicted_scaled_mean(4, 4), 1.30078, 1e-5);
  EXPECT_NEAR(predicted_scaled_mean(4, 4), 1.3007859453528999461, 1e-12);
  EXPECT_NEAR(predicted_scaled_mean(5, 8), 0.0, 1e-14);
  EXPECT_NEAR(predicted_scaled_mean(4, 9), -0.21679765755881665768, 1e-12);
  EXPECT_NEAR(predicted_scaled_mean(4, 9),
              (4 * gamma_fn(1.2) - 5 * gamma_fn(2.2)) / gamma_fn(1.8) / (3 * std::pow(2.0, 1.6)), 1e-12);
}
