#include <gtest/gtest.h>

#include <cmath>

#include "urnsa/drift_poly.hpp"
#include "urnsa/error.hpp"
#include "urnsa/limit_theory.hpp"
#include "urnsa/polya_urn.hpp"
#include "urnsa/rng.hpp"
#include "urnsa/sa_core.hpp"

using namespace urnsa;

TEST(SaStep, DirectArithmetic) {
  EXPECT_NEAR(sa_step(0.5, 0.1, 0.2, 0.1), 0.53, 1e-15);
  EXPECT_EQ(sa_step(0.5, 0.1, 0.0, 0.0), 0.5);
}

TEST(SaStep, RejectsLeavingTheUnitInterval) {
  EXPECT_THROW(sa_step(0.9, 0.5, 1.0, 0.0), Error);
  EXPECT_THROW(sa_step(1.2, 0.1, 0.0, 0.0), Error);
  EXPECT_THROW(sa_step(0.5, 0.0, 0.0, 0.0), Error);
  try {
    sa_step(0.1, 1.0, -1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainViolation);
  }
  // Slack of 1e-12 around the boundary is tolerated.
  EXPECT_NO_THROW(sa_step(1.0, 1.0, 5e-13, 0.0));
}

TEST(QStep, Examples) {
  EXPECT_EQ(q_step(0.0, 0.7, 0.0, 12), 0.0);
  EXPECT_NEAR(q_step(0.1, 1.0, 0.0, 9), 0.09, 1e-15);
}

TEST(SyntheticStep, Examples) {
  EXPECT_EQ(synthetic_step(0.0, 1.3, 0.0, 7.0), 0.0);
  EXPECT_EQ(synthetic_step(1.0, 1.0, 0.0, 2.0), 0.5);
}

TEST(Weight, Examples) {
  EXPECT_DOUBLE_EQ(weight(3, 0.5, 0.0), 2.0);
  for (std::uint64_t n : {1ULL, 2ULL, 1000ULL, 123456789ULL}) EXPECT_EQ(weight(n, 0.0, 0.0), 1.0);
  EXPECT_NEAR(weight(1, 0.5, -0.5), std::sqrt(2.0) / std::sqrt(std::log(2.0)), 1e-12);
  EXPECT_NEAR(weight(1, 0.5, -0.5), 1.6986436005760381, 1e-15);
  EXPECT_THROW(weight(0, 0.5, 0.0), Error);
}

TEST(Weight, RatioExpansionResidualIsOrderOneOverNSquared) {
  for (auto [x, y] : {std::pair{0.5, 0.0}, std::pair{0.5, -0.5}}) {
    double worst = 0.0;
    for (std::uint64_t n = 2; n <= 1000000; n = n < 100 ? n + 1 : n + n / 7) {
      const double dn = double(n);
      const double residual = weight(n, x, y) / weight(n - 1, x, y) - (1.0 + x / dn + y / (dn * std::log(dn)));
      worst = std::max(worst, dn * dn * std::abs(residual));
    }
    EXPECT_LT(worst, 2.0) << "x=" << x << " y=" << y;
  }
}

TEST(StepFamily, NamesAndDivisors) {
  EXPECT_EQ(step_family_from_string("n"), StepFamily::N);
  EXPECT_EQ(step_family_from_string("nlogn"), StepFamily::NLogN);
  EXPECT_STREQ(to_string(StepFamily::NLogN), "nlogn");
  EXPECT_THROW(step_family_from_string("log"), Error);
  EXPECT_EQ(step_divisor(StepFamily::N, 7), 7.0);
  EXPECT_DOUBLE_EQ(step_divisor(StepFamily::NLogN, 10), 10.0 * std::log(10.0));
  EXPECT_EQ(first_contracting_index(StepFamily::N, 1.0), 2u);
  EXPECT_EQ(first_contracting_index(StepFamily::N, 0.5), 1u);
  EXPECT_EQ(first_contracting_index(StepFamily::NLogN, 1.0), 2u);  // 2 ln 2 = 1.386
  EXPECT_EQ(first_contracting_index(StepFamily::NLogN, 2.0), 3u);
}

TEST(SyntheticProcess, Validation) {
  SyntheticProcess p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(p.limit_variance(), 0.5);
  p.sigma2 = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.gamma = -1.0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.noise_bound = 0.5;
  EXPECT_THROW(p.validate(), Error);
}

TEST(SAConstantsAndPath, Invariants) {
  EXPECT_TRUE(SAConstants{}.valid());
  EXPECT_FALSE((SAConstants{2.0, 1.0, 1.0, 1.0, 1.0}.valid()));
  SAPath path;
  EXPECT_TRUE(path.consistent());
  path.values = {0.5, 0.6};
  path.steps = {0.1};
  path.noises = {0.0};
  EXPECT_TRUE(path.consistent());
  path.values.push_back(1.5);
  EXPECT_FALSE(path.consistent());
}

// The x-form and the centred q-form are the same recursion once the
// normalised step and noise are built from the urn quantities.
TEST(RecursionEquivalence, XFormMatchesQFormOverRandomUrnStates) {
  Xoshiro256pp rng(11, 0);
  const ReplacementMatrix matrices[] = {{4, 5, 3, 2}, {2, 1, 1, 2}, {3, 0, 2, 5}, {3, 1, 1, 3}, {1, 2, 2, 1},
                                        {6, 1, 2, 3}, {1, 4, 7, 2}};
  int checked = 0;
  double worst = 0.0;
  while (checked < 10000) {
    const ReplacementMatrix& m = matrices[rng() % std::size(matrices)];
    const DriftPoly f = drift_from_matrix(m);
    const double p = classify(m).p;
    UrnState s = UrnState::initial(double(1 + rng() % 9), double(1 + rng() % 9));
    const auto steps = rng() % 300;
    for (std::uint64_t k = 0; k < steps; ++k) s = urn_step(s, m, uniform_from_bits(rng()));
    const UrnState next = urn_step(s, m, uniform_from_bits(rng()));
    const double x = s.X();
    const double gamma_next = 1.0 / next.T();
    const double U = urn_noise(s, next, f);
    const double x_form = sa_step(x, gamma_next, f(x), U) - p;
    const double n1 = double(s.n) + 1.0;
    const double gamma_hat_next = n1 * gamma_next * f.h(x, p);
    const double u_hat_next = n1 * gamma_next * U;
    const double q_form = q_step(x - p, gamma_hat_next, u_hat_next, s.n);
    worst = std::max(worst, std::abs(x_form - q_form));
    ++checked;
  }
  EXPECT_LE(worst, 1e-12);
}
