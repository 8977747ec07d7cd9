#include <gtest/gtest.h>

#include <cmath>

#include "motzkin/qpoly.hpp"

using namespace motzkin;

TEST(Chebyshev, PValues) {
  EXPECT_EQ(chebyshev_P(0, Rational(7)), 1);
  EXPECT_EQ(chebyshev_P(1, Rational(7)), 1);
  EXPECT_EQ(chebyshev_P(2, Rational(1, 4)), Rational(3, 4));
  EXPECT_EQ(chebyshev_P(3, Rational(1, 4)), Rational(1, 2));
}

TEST(Chebyshev, QValues) {
  EXPECT_EQ(chebyshev_Q(2, Rational(3)), 8);
  EXPECT_EQ(chebyshev_Q(3, Rational(3)), 21);
  for (int m = 0; m <= 20; ++m) EXPECT_EQ(chebyshev_Q(m, Rational(2)), m + 1);
}

TEST(Chebyshev, QIsHomogenisedP) {
  for (const Rational& y : {Rational(2), Rational(3), Rational(7, 2)})
    for (int m = 0; m <= 20; ++m) EXPECT_EQ(chebyshev_Q(m, y), pow(y, m) * chebyshev_P(m, 1 / (y * y))) << m;
}

TEST(Phi, ClosedFormAtOneThird) {
  for (int m = 1; m <= 30; ++m) EXPECT_EQ(phi(m, Rational(1, 3)), Rational(3 * m) / (m + 1));
  EXPECT_EQ(phi(2, Rational(1, 3)), 2);
}

TEST(Phi, QuarterValues) {
  EXPECT_EQ(phi(1, Rational(1, 4)), Rational(4, 3));
  EXPECT_EQ(phi(3, Rational(1, 4)), Rational(32, 21));
}

TEST(Phi, TwoFormulasAgree) {
  for (const Rational& lam : {Rational(1, 3), Rational(1, 4), Rational(2, 9), Rational(1, 10)})
    for (int m = 1; m <= 20; ++m) EXPECT_EQ(phi_p_ratio(m, lam), phi_q_ratio(m, lam));
}

TEST(Phi, QIntegerForm) {
  for (const Rational& lam : {Rational(1, 3), Rational(1, 4), Rational(1, 7)}) {
    double q = q_parameter(lam), delta = Rational(1 / lam).get_d();
    for (int m = 1; m <= 25; ++m) EXPECT_NEAR(phi(m, lam).get_d(), delta * q_integer(m, q) / q_integer(m + 1, q), 1e-10);
  }
}

TEST(Phi, IncreasingBelowLimit) {
  for (const Rational& lam : {Rational(1, 3), Rational(1, 4)}) {
    PhiFunction f(lam);
    Rational prev = 0;
    for (int m = 1; m <= 100; ++m) {
      EXPECT_GT(f(m), prev);  // exact, doubles saturate near the limit
      EXPECT_LT(f(m).get_d(), f.at_infinity() + 1e-12);
      prev = f(m);
    }
  }
}

TEST(PhiInfinity, Values) {
  EXPECT_DOUBLE_EQ(phi_infinity(Rational(1, 3)), 3.0);
  const double q = (3 - std::sqrt(5.0)) / 2;
  EXPECT_NEAR(q_parameter(Rational(1, 4)), q, 1e-15);
  EXPECT_NEAR(phi_infinity(Rational(1, 4)), 4 * q, 1e-12);
  EXPECT_NEAR(phi_infinity(Rational(1, 4)), 1.527864, 1e-6);
  EXPECT_NEAR(0.25 * phi_infinity(Rational(1, 4)), q, 1e-12);
  EXPECT_LT(std::abs(phi(30, Rational(1, 4)).get_d() - phi_infinity(Rational(1, 4))), 1e-3);
  EXPECT_THROW(phi_infinity(Rational(1, 2)), DomainError);
}

TEST(Phi, ReverseCoefficientClosedForm) {
  for (const Rational& lam : {Rational(1, 3), Rational(1, 4)}) {
    double q = q_parameter(lam), l = lam.get_d();
    for (int m = 1; m <= 30; ++m) {
      Rational exact = 1 - lam - lam * lam * phi(m, lam);
      double closed = std::abs(q - 1) < 1e-12
                          ? l * (m + 2) / (m + 1)
                          : l * (std::pow(q, m + 2) - std::pow(q, -m - 2)) / (std::pow(q, m + 1) - std::pow(q, -m - 1));
      EXPECT_NEAR(exact.get_d(), closed, 1e-10) << m;
    }
  }
  EXPECT_EQ(1 - Rational(1, 3) - Rational(1, 9) * phi(1, Rational(1, 3)), Rational(1, 2));
  EXPECT_EQ(1 - Rational(1, 4) - Rational(1, 16) * phi(1, Rational(1, 4)), Rational(2, 3));
}

TEST(Genericity, Values) {
  EXPECT_TRUE(is_generic(Rational(1, 3), 50));
  EXPECT_TRUE(is_generic(Rational(1, 4), 50));
  EXPECT_FALSE(is_generic(Rational(1, 2), 2));
  EXPECT_TRUE(is_generic(Rational(1, 2), 1));
  EXPECT_THROW(is_generic(Rational(1), 3), DomainError);
  EXPECT_THROW(phi(2, Rational(1, 2)), SingularParameterError);
}

TEST(DimSubproduct, Tables) {
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(dim_subproduct(3, k), k + 1);
  const std::int64_t four[] = {1, 3, 8, 21, 55, 144};
  for (int k = 0; k <= 5; ++k) EXPECT_EQ(dim_subproduct(4, k), four[k]);
  for (int n = 3; n <= 8; ++n) EXPECT_EQ(dim_subproduct(n, 2), (n - 1) * (n - 1) - 1);
  EXPECT_THROW(dim_subproduct(2, 2), DomainError);
}

TEST(DimSubproduct, MatchesQuantumInteger) {
  for (int n = 3; n <= 6; ++n) {
    double s = n - 1, tau = (s - std::sqrt(s * s - 4)) / 2;
    for (int k = 0; k <= 10; ++k) EXPECT_EQ(dim_subproduct(n, k), std::llround(q_integer(k + 1, tau)));
  }
}
