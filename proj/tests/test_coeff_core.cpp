#include "sgop/coeff_core.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace sgop;

namespace {

// Straight evaluation of the recursions, no memo.
Rational alpha_direct(int j) {
  if (j < 0) return 0;
  if (j == 0) return 1;
  if (j == 1) return Rational(1, 6);
  Rational s = 0;
  for (int l = 1; l <= j - 1; ++l) s += alpha_direct(j - l) * alpha_direct(l);
  return Rational(4) / (Rational(pow5(j)) - 5) * s;
}

Rational beta_direct(int j) {
  if (j < 0) return 0;
  if (j == 0) return Rational(-1, 2);
  Rational s = 0;
  for (int l = 0; l <= j - 1; ++l)
    s += (3 * Rational(pow5(j - l)) - Rational(pow5(l + 1)) + 6) * alpha_direct(j - l) * beta_direct(l);
  return Rational(2) / (15 * (Rational(pow5(j)) - 1)) * s;
}

}  // namespace

TEST(Rational, LowestTermsAndPositiveDenominator) {
  Rational q(Integer(6), Integer(-4));
  EXPECT_EQ(numerator_of(q), -3);
  EXPECT_EQ(denominator_of(q), 2);
  EXPECT_EQ(to_string(q), "-3/2");
  EXPECT_EQ(to_string(Rational(4)), "4");
}

TEST(Rational, Parse) {
  EXPECT_EQ(parse_rational("1/2"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("1e3"), Rational(1000));
  EXPECT_EQ(parse_rational("2.5e-1"), Rational(1, 4));
  EXPECT_EQ(parse_rational("-0.125"), Rational(-1, 8));
  EXPECT_EQ(parse_rational("010"), Rational(10));
  EXPECT_EQ(parse_rational("-007/010"), Rational(-7, 10));
  EXPECT_EQ(parse_rational("+3"), Rational(3));
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(Rational, Decimal) {
  EXPECT_EQ(to_decimal(Rational(1, 3), 4), "3.333e-01");
  EXPECT_EQ(to_decimal(Rational(0), 4), "0");
}

TEST(Coefficients, InitialData) {
  EXPECT_EQ(alpha(0), 1);
  EXPECT_EQ(alpha(1), Rational(1, 6));
  EXPECT_EQ(beta(0), Rational(-1, 2));
  EXPECT_EQ(eta(0), 0);
  EXPECT_EQ(alpha_prime(0), Rational(1, 2));
}

TEST(Coefficients, Examples) {
  EXPECT_EQ(alpha(2), Rational(1, 180));
  EXPECT_EQ(eta(1), Rational(1, 2));
  EXPECT_EQ(beta(1), Rational(-2, 45));
  EXPECT_EQ(gamma(0), Rational(1, 2));
}

TEST(Coefficients, MatchDirectRecursion) {
  for (int j = 0; j <= 9; ++j) {
    EXPECT_EQ(alpha(j), alpha_direct(j)) << j;
    EXPECT_EQ(beta(j), beta_direct(j)) << j;
  }
}

TEST(Coefficients, EtaRecursion) {
  for (int j = 1; j <= 12; ++j) {
    Rational s = (Rational(pow5(j)) + 1) / 2 * alpha(j);
    for (int l = 0; l < j; ++l) s += 2 * eta(l) * beta(j - l);
    EXPECT_EQ(eta(j), s) << j;
  }
}

TEST(Coefficients, GammaIsThreeAlphaShifted) {
  for (int j = 0; j <= 40; ++j) EXPECT_EQ(gamma(j), 3 * alpha(j + 1)) << j;
}

TEST(Coefficients, AlphaPrime) {
  for (int j = 1; j <= 20; ++j) EXPECT_EQ(alpha_prime(j), alpha(j));
}

TEST(Coefficients, NegativeIndexIsZero) {
  for (int j = -3; j < 0; ++j) {
    EXPECT_EQ(alpha(j), 0);
    EXPECT_EQ(beta(j), 0);
    EXPECT_EQ(gamma(j), 0);
    EXPECT_EQ(eta(j), 0);
    EXPECT_EQ(alpha_prime(j), 0);
  }
}

TEST(Coefficients, BetaNonzeroUpTo50) {
  EXPECT_EQ(first_vanishing_beta(50), -1);
  for (int j = 0; j <= 50; ++j) EXPECT_NE(beta(j), 0);
}

TEST(Coefficients, AlphaPositive) {
  for (int j = 0; j <= 30; ++j) EXPECT_GT(alpha(j), 0);
}

TEST(Boundary, Values) {
  using C = Corner;
  using K = BoundaryKind;
  EXPECT_EQ(monomial_boundary(0, 1, C::q0, K::value), 1);
  EXPECT_EQ(monomial_boundary(0, 2, C::q1, K::normal), Rational(-1, 2));
  EXPECT_EQ(monomial_boundary(0, 2, C::q2, K::normal), Rational(-1, 2));
  for (int j = 0; j <= 8; ++j) {
    EXPECT_EQ(monomial_boundary(j, 3, C::q2, K::normal), -3 * eta(j + 1));
    EXPECT_EQ(monomial_boundary(j, 3, C::q1, K::normal), 3 * eta(j + 1));
    EXPECT_EQ(monomial_boundary(j, 1, C::q1, K::value), alpha(j));
    EXPECT_EQ(monomial_boundary(j, 2, C::q2, K::value), beta(j));
    EXPECT_EQ(monomial_boundary(j, 3, C::q2, K::value), -gamma(j));
    EXPECT_EQ(monomial_boundary(j, 1, C::q2, K::normal), eta(j));
    EXPECT_EQ(monomial_boundary(j, 2, C::q1, K::normal), -alpha_prime(j));
    for (int k = 1; k <= 3; ++k) {
      EXPECT_EQ(monomial_boundary(j, k, C::q0, K::value), j == 0 && k == 1 ? 1 : 0);
      EXPECT_EQ(monomial_boundary(j, k, C::q0, K::normal), j == 0 && k == 2 ? 1 : 0);
      EXPECT_EQ(monomial_boundary(j, k, C::q0, K::tangential), j == 0 && k == 3 ? 1 : 0);
    }
  }
}

TEST(Boundary, TangentialOffBaseRejected) {
  EXPECT_THROW(monomial_boundary(0, 3, Corner::q1, BoundaryKind::tangential), std::domain_error);
  EXPECT_THROW(monomial_boundary(2, 1, Corner::q2, BoundaryKind::tangential), std::domain_error);
}

TEST(Boundary, BadFamilyRejected) {
  EXPECT_THROW(monomial_boundary(0, 4, Corner::q1, BoundaryKind::value), std::invalid_argument);
  EXPECT_THROW(monomial_integral(0, 0), std::invalid_argument);
}

TEST(Integral, Examples) {
  EXPECT_EQ(monomial_integral(0, 1), 1);
  EXPECT_EQ(monomial_integral(0, 1), 2 * eta(1));
  EXPECT_EQ(monomial_integral(0, 2), Rational(-1, 3));
  for (int j = 0; j <= 6; ++j) EXPECT_EQ(monomial_integral(j, 3), 0);
  for (int j = 0; j <= 6; ++j) {
    EXPECT_EQ(monomial_integral(j, 1), 2 * eta(j + 1));
    EXPECT_EQ(monomial_integral(j, 2), -2 * alpha(j + 1));
  }
}

TEST(Integral, HarmonicMeanOfBoundaryValues) {
  for (int k = 1; k <= 3; ++k) {
    Rational mean = 0;
    for (Corner c : {Corner::q0, Corner::q1, Corner::q2}) mean += monomial_boundary(0, k, c, BoundaryKind::value);
    EXPECT_EQ(monomial_integral(0, k), mean / 3) << k;
  }
}

TEST(Cache, RoundTrip) {
  CoeffTable t;
  t.beta(15);
  t.eta(15);
  std::stringstream ss;
  t.save(ss);
  CoeffTable u;
  u.load(ss);
  EXPECT_EQ(u.computed_beta(), t.computed_beta());
  for (int j = 0; j <= 15; ++j) {
    EXPECT_EQ(u.alpha(j), t.alpha(j));
    EXPECT_EQ(u.beta(j), t.beta(j));
    EXPECT_EQ(u.eta(j), t.eta(j));
  }
  EXPECT_EQ(u.beta(20), beta(20));
}

TEST(Cache, RejectsCorruptSeeds) {
  std::stringstream ss("alpha 0 1\nalpha 1 1/5\nbeta 0 -1/2\neta 0 0\n");
  CoeffTable t;
  EXPECT_THROW(t.load(ss), std::runtime_error);
  std::stringstream gap("alpha 0 1\nalpha 2 1/6\n");
  EXPECT_THROW(t.load(gap), std::runtime_error);
}
