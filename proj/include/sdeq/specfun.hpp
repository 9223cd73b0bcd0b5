#pragma once

#include "sdeq/rational.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdeq {

namespace detail {

inline bool is_nonpositive_integer(double v) { return v <= 0 && std::floor(v) == v; }

/// Running sum with Neumaier compensation.
struct CompensatedSum {
  long double sum = 0, comp = 0;
  void add(long double v) {
    long double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  long double value() const { return sum + comp; }
};

}  // namespace detail

/// Coefficients c_k of M(-n, b, x) = sum_k c_k x^k, exact.
inline std::vector<Rational> kummer_m_polynomial(int n, const Rational& b) {
  if (n < 0) throw std::invalid_argument("kummer_m_polynomial: n must be >= 0");
  std::vector<Rational> c{Rational(1)};
  c.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k) {
    Rational denom = (b + Rational(k)) * Rational(k + 1);
    if (denom.is_zero()) throw std::domain_error("kummer_m: b is a nonpositive integer");
    c.push_back(c.back() * Rational(k - n) / denom);
  }
  return c;
}

/// Kummer's function M(a, b, x) = 1F1(a; b; x).
/// For a = -n the terminating sum is evaluated in exact rational arithmetic
/// at the binary value of x and rounded once. Otherwise the power series is
/// summed in extended precision with compensation.
inline double kummer_m(double a, double b, double x) {
  if (detail::is_nonpositive_integer(b)) throw std::domain_error("kummer_m: b is a nonpositive integer");
  if (!std::isfinite(a) || !std::isfinite(x)) throw std::domain_error("kummer_m: non-finite argument");
  if (detail::is_nonpositive_integer(a) && a > -100000) {
    auto coeffs = kummer_m_polynomial(static_cast<int>(-a), Rational::from_double(b));
    Rational xr = Rational::from_double(x);
    Rational acc;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * xr + *it;
    return acc.to_double();
  }
  const long double al = a, bl = b, xl = x;
  detail::CompensatedSum s;
  long double t = 1;
  s.add(t);
  for (int k = 0; k < 100000; ++k) {
    t *= (al + k) * xl / ((bl + k) * (k + 1));
    s.add(t);
    bool past_turn = (al + k) > 0 || std::fabs(al + k) < 1;
    if (past_turn && std::fabs(t) <= 1e-21L * std::fabs(s.value())) return static_cast<double>(s.value());
    if (t == 0) return static_cast<double>(s.value());
  }
  throw std::runtime_error("kummer_m: series did not converge");
}

/// Laguerre polynomial L_n(x) by the three-term recurrence.
inline double laguerre(int n, double x) {
  if (n < 0) throw std::invalid_argument("laguerre: n must be >= 0");
  double prev = 1, cur = 1 - x;
  if (n == 0) return prev;
  for (int k = 1; k < n; ++k) {
    double next = ((2 * k + 1 - x) * cur - k * prev) / (k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Tricomi's function U(a, 1, x) for x > 0. At a = -n this is
/// (-1)^n n! L_n(x); otherwise the logarithmic series
///   U(a,1,x) = -1/Gamma(a) sum_k (a)_k / (k!)^2 x^k [ln x + psi(a+k) - 2 psi(1+k)].
inline double kummer_u(double a, double b, double x) {
  if (b != 1.0) throw std::domain_error("kummer_u: only b = 1 is supported");
  if (!(x > 0)) throw std::domain_error("kummer_u: x must be positive");
  if (detail::is_nonpositive_integer(a)) {
    int n = static_cast<int>(-a);
    long double fact = 1;
    for (int k = 2; k <= n; ++k) fact *= k;
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * static_cast<double>(fact) * kummer_m(-n, 1, x);
  }
  // The terms grow like e^x while the sum decays like x^-a, so the series
  // is summed with 50 significant digits.
  using F = boost::multiprecision::cpp_bin_float_50;
  const F al = a, xl = x, lx = log(xl);
  F psi_a = boost::math::digamma(al);
  F psi_1 = boost::math::digamma(F(1));
  F t = 1;  // (a)_k x^k / (k!)^2
  F s = t * (lx + psi_a - 2 * psi_1);
  const F tol = std::numeric_limits<F>::epsilon();
  for (int k = 0; k < 100000; ++k) {
    t *= (al + k) * xl / (F(k + 1) * F(k + 1));
    psi_a += 1 / (al + k);
    psi_1 += F(1) / (k + 1);
    F term = t * (lx + psi_a - 2 * psi_1);
    s += term;
    bool past_turn = (al + k) > 0 || abs(al + k) < 1;
    if (past_turn && k > 2 && abs(term) <= tol * abs(s)) {
      return static_cast<double>(-s / boost::math::tgamma(al));
    }
  }
  throw std::runtime_error("kummer_u: series did not converge");
}

inline double kummer_u(double a, double x) { return kummer_u(a, 1.0, x); }

/// x f'' + (b - x) f' - a f at x, with f'' and f' from eighth-order central
/// differences of step h. Returned relative to |x f''| + |(b - x) f'| + |a f| + |f|.
inline double confluent_ode_residual(const std::function<double(double)>& f, double a, double b, double x,
                                     double h = 0.01) {
  static constexpr double d1[] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
  static constexpr double d2[] = {8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
  const double f0 = f(x);
  double fp = 0, fpp = -205.0 / 72 * f0;
  for (int j = 1; j <= 4; ++j) {
    double plus = f(x + j * h), minus = f(x - j * h);
    fp += d1[j - 1] * (plus - minus);
    fpp += d2[j - 1] * (plus + minus);
  }
  fp /= h;
  fpp /= h * h;
  double r = x * fpp + (b - x) * fp - a * f0;
  double scale = std::fabs(x * fpp) + std::fabs((b - x) * fp) + std::fabs(a * f0) + std::fabs(f0);
  return scale > 0 ? std::fabs(r) / scale : std::fabs(r);
}

}  // namespace sdeq
