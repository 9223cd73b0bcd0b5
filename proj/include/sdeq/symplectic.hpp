#pragma once

#include "sdeq/metric.hpp"
#include "sdeq/polynomial.hpp"

namespace sdeq {

/// {f, g} = sum_mu g^{mu mu} (df/dq^mu dg/dp^mu - df/dp^mu dg/dq^mu).
///
/// The momentum derivative in the symplectic contraction carries a lower
/// index, so the metric enters once per coordinate pair.
inline PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g,
                                       const MetricSignature& metric = {}) {
  if (f.dims() != g.dims()) throw DimensionMismatch("poisson_bracket: operands have different dims");
  PhasePolynomial r(f.dims());
  for (int mu = 0; mu < f.dims(); ++mu) {
    PhasePolynomial t = derivative(f, q_gen(mu)) * derivative(g, p_gen(mu)) -
                        derivative(f, p_gen(mu)) * derivative(g, q_gen(mu));
    if (metric[mu] > 0) {
      r += t;
    } else {
      r -= t;
    }
  }
  return r;
}

}  // namespace sdeq
