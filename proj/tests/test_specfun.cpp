#include "sdeq/specfun.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace sdeq;

namespace {

/// Power series of M(a, b, x) in 50-digit arithmetic.
double kummer_m_reference(double a, double b, double x) {
  using F = boost::multiprecision::cpp_bin_float_50;
  F t = 1, s = 1;
  for (int k = 0; k < 2000; ++k) {
    t *= (F(a) + k) * F(x) / ((F(b) + k) * (k + 1));
    s += t;
    if (k > 10 && abs(t) < 1e-40 * abs(s)) break;
  }
  return static_cast<double>(s);
}

/// U(a, 1, x) = 1/Gamma(a) int_0^inf e^{-x t} t^{a-1} (1 + t)^{-a} dt, a > 0.
double kummer_u_integral(double a, double x) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double t) { return std::exp(-x * t) * std::pow(t, a - 1) * std::pow(1 + t, -a); };
  return integrator.integrate(f) / std::tgamma(a);
}

}  // namespace

TEST(KummerM, Examples) {
  for (double a : {-3.0, -0.5, 0.7, 2.0}) EXPECT_EQ(kummer_m(a, 1.5, 0.0), 1.0);
  for (double x : {0.0, 0.3, 2.0, 17.5}) EXPECT_NEAR(kummer_m(-1, 1, x), 1 - x, 1e-15 * (1 + x));
  EXPECT_EQ(kummer_m(-2, 1, 2), -1.0);
}

TEST(KummerM, Errors) {
  EXPECT_THROW(kummer_m(1, 0, 1), std::domain_error);
  EXPECT_THROW(kummer_m(1, -2, 1), std::domain_error);
  EXPECT_THROW(kummer_m(-1, -1, 1), std::domain_error);
  EXPECT_NO_THROW(kummer_m(1, -1.5, 1));
}

TEST(KummerM, PolynomialCoefficientsAreExact) {
  auto c = kummer_m_polynomial(2, Rational(1));
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0], Rational(1));
  EXPECT_EQ(c[1], Rational(-2));
  EXPECT_EQ(c[2], Rational(1, 2));
}

TEST(KummerM, MatchesLaguerre) {
  for (int n = 0; n <= 10; ++n)
    for (int j = 0; j < 100; ++j) {
      double x = 50.0 * j / 99;
      double l = laguerre(n, x);
      EXPECT_LE(std::abs(kummer_m(-n, 1, x) - l), 1e-12 * std::max(1.0, std::abs(l))) << n << " " << x;
    }
}

TEST(KummerM, MatchesExtendedPrecisionSeries) {
  for (double a : {-2.5, -0.3, 0.5, 1.0, 2.7})
    for (double b : {0.5, 1.0, 2.5})
      for (double x : {0.0, 0.1, 1.0, 5.0, 12.0, 20.0, -1.0, -5.0}) {
        double ref = kummer_m_reference(a, b, x);
        EXPECT_LE(std::abs(kummer_m(a, b, x) - ref), 1e-13 * std::max(1.0, std::abs(ref))) << a << " " << b << " " << x;
      }
}

TEST(KummerM, ConfluentOdeResidual) {
  for (double a : {-4.0, -1.5, 0.5, 2.2})
    for (double b : {1.0, 2.0})
      for (double x : {0.5, 2.0, 7.0, 15.0}) {
        auto f = [&](double t) { return kummer_m(a, b, t); };
        EXPECT_LE(confluent_ode_residual(f, a, b, x), 1e-8) << a << " " << b << " " << x;
      }
}

TEST(KummerU, PolynomialBranch) {
  for (double x : {0.5, 1.0, 5.0}) {
    EXPECT_LE(std::abs(kummer_u(-1, 1, x) / -1 - (1 - x)), 1e-10);
    EXPECT_EQ(kummer_u(0, 1, x), 1.0);
    EXPECT_EQ(kummer_u(-0.0, x), 1.0);
    for (int n = 0; n <= 6; ++n) {
      double expected = (n % 2 ? -1 : 1) * boost::math::factorial<double>(n) * laguerre(n, x);
      EXPECT_LE(std::abs(kummer_u(-n, x) - expected), 1e-12 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST(KummerU, MatchesIntegralRepresentation) {
  for (double a : {0.3, 1.0, 1.7, 3.2})
    for (double x : {0.2, 1.0, 4.0, 15.0}) {
      double ref = kummer_u_integral(a, x);
      EXPECT_LE(std::abs(kummer_u(a, x) - ref), 1e-9 * std::abs(ref)) << a << " " << x;
    }
  // U(1, 1, x) = e^x E_1(x).
  EXPECT_NEAR(kummer_u(1, 1.0), std::exp(1.0) * 0.21938393439552027, 1e-14);
}

TEST(KummerU, ConfluentOdeResidual) {
  for (double a : {-3.0, -0.5, 0.3, 1.7, 3.2})
    for (double x : {0.5, 2.0, 8.0, 15.0}) {
      auto f = [&](double t) { return kummer_u(a, t); };
      EXPECT_LE(confluent_ode_residual(f, a, 1, x), 1e-8) << a << " " << x;
    }
}

TEST(KummerU, Errors) {
  EXPECT_THROW(kummer_u(0.5, 2, 1), std::domain_error);
  EXPECT_THROW(kummer_u(0.5, 1, 0), std::domain_error);
  EXPECT_THROW(kummer_u(0.5, 1, -1), std::domain_error);
}

TEST(Laguerre, Examples) {
  for (double x : {0.0, 1.3, 40.0}) {
    EXPECT_EQ(laguerre(0, x), 1.0);
    EXPECT_DOUBLE_EQ(laguerre(1, x), 1 - x);
  }
  EXPECT_EQ(laguerre(2, 2), -1.0);
  for (int n = 0; n < 12; ++n) EXPECT_EQ(laguerre(n, 0), 1.0);
  EXPECT_THROW(laguerre(-1, 0), std::invalid_argument);
}
