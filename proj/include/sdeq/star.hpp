#pragma once

#include "sdeq/metric.hpp"
#include "sdeq/polynomial.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace sdeq {

namespace detail {

// One factor of the expanded exponential: a_mu copies of
// (<-d/dq^mu ->d/dp^mu) and b_mu copies of (<-d/dp^mu ->d/dq^mu).
struct LambdaPower {
  std::array<int, 4> a{};
  std::array<int, 4> b{};
};

inline void enumerate_lambda_powers(int mu, int dims, int budget, const std::array<int, 4>& a_cap,
                                    const std::array<int, 4>& b_cap, LambdaPower& cur,
                                    std::vector<LambdaPower>& out) {
  if (mu == dims) {
    out.push_back(cur);
    return;
  }
  const auto m = static_cast<std::size_t>(mu);
  for (int a = 0; a <= std::min(a_cap[m], budget); ++a) {
    for (int b = 0; a + b <= budget && b <= b_cap[m]; ++b) {
      cur.a[m] = a;
      cur.b[m] = b;
      enumerate_lambda_powers(mu + 1, dims, budget - a - b, a_cap, b_cap, cur, out);
    }
  }
  cur.a[m] = 0;
  cur.b[m] = 0;
}

inline Rational factorial(int n) {
  Rational r(1);
  for (int k = 2; k <= n; ++k) r *= Rational(k);
  return r;
}

}  // namespace detail

/// Exact Moyal product f * exp((i/2) Lambda) g on polynomials, with
/// Lambda = sum_mu g^{mu mu} (<-d_q^mu ->d_p^mu - <-d_p^mu ->d_q^mu).
///
/// The exponential is expanded multinomially: each choice of powers
/// (a_mu, b_mu) contributes
///   (i/2)^{|a|+|b|} prod_mu (g^{mu mu})^{a_mu+b_mu} (-1)^{b_mu} / (a_mu! b_mu!)
///     * (d_q^a d_p^b f) (d_p^a d_q^b g).
/// Powers are bounded by min(deg f, deg g), where the series terminates.
inline PhasePolynomial moyal_star(const PhasePolynomial& f, const PhasePolynomial& g,
                                  const MetricSignature& metric = {}) {
  if (f.dims() != g.dims()) throw DimensionMismatch("moyal_star: operands have different dims");
  const int dims = f.dims();
  PhasePolynomial result(dims);
  if (f.is_zero() || g.is_zero()) return result;

  std::array<int, 4> a_cap{}, b_cap{};
  for (int mu = 0; mu < dims; ++mu) {
    const auto m = static_cast<std::size_t>(mu);
    a_cap[m] = std::min(f.max_exponent(q_gen(mu)), g.max_exponent(p_gen(mu)));
    b_cap[m] = std::min(f.max_exponent(p_gen(mu)), g.max_exponent(q_gen(mu)));
  }
  const int order = std::min(f.degree(), g.degree());

  std::vector<detail::LambdaPower> powers;
  detail::LambdaPower cur;
  detail::enumerate_lambda_powers(0, dims, order, a_cap, b_cap, cur, powers);

  const ExactComplex half_i(Rational(0), Rational(1, 2));
  for (const auto& pw : powers) {
    PhasePolynomial left = f;
    PhasePolynomial right = g;
    ExactComplex coeff(1);
    for (int mu = 0; mu < dims && !left.is_zero() && !right.is_zero(); ++mu) {
      const auto m = static_cast<std::size_t>(mu);
      int a = pw.a[m], b = pw.b[m];
      if (a == 0 && b == 0) continue;
      if (a > 0) {
        left = derivative(left, q_gen(mu), a);
        right = derivative(right, p_gen(mu), a);
      }
      if (b > 0) {
        left = derivative(left, p_gen(mu), b);
        right = derivative(right, q_gen(mu), b);
      }
      int sign = ((metric[mu] < 0 && (a + b) % 2 == 1) ? -1 : 1) * (b % 2 == 1 ? -1 : 1);
      coeff *= ExactComplex(Rational(sign) / (detail::factorial(a) * detail::factorial(b)));
      for (int k = 0; k < a + b; ++k) coeff *= half_i;
    }
    if (left.is_zero() || right.is_zero()) continue;
    result += coeff * (left * right);
  }
  return result;
}

}  // namespace sdeq
