#pragma once

#include "sdeq/metric.hpp"
#include "sdeq/polynomial.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace sdeq {

/// Composable linear operator on phase-space polynomials.
///
/// Leaves are the identity, multiplication by a polynomial, and the Bopp
/// shifts
///   P^mu = p^mu - (i/2) g^{mu mu} d/dq^mu,   Q^mu = q^mu + (i/2) g^{mu mu} d/dp^mu,
/// which are left star-multiplication by p^mu and q^mu. Inner nodes are sums,
/// scalar multiples, and ordered products. A product A*B applies B first,
/// then A. Trees are never normalised; two operators are compared by their
/// action on a spanning set of monomials.
class OperatorExpr {
 public:
  struct Identity {};
  struct MultiplyBy {
    PhasePolynomial factor;
  };
  struct BoppMomentum {
    int mu;
    int metric_sign;  // g^{mu mu}
  };
  struct BoppPosition {
    int mu;
    int metric_sign;
  };
  struct Sum {
    std::vector<OperatorExpr> terms;
  };
  struct Product {
    std::vector<OperatorExpr> factors;  // applied right to left
  };
  struct Scale {
    ExactComplex factor;
    std::vector<OperatorExpr> inner;  // exactly one element
  };
  using Node = std::variant<Identity, MultiplyBy, BoppMomentum, BoppPosition, Sum, Product, Scale>;

  /// The zero operator (an empty sum).
  OperatorExpr() : node_(std::make_shared<const Node>(Sum{})) {}

  static OperatorExpr identity() { return OperatorExpr(Identity{}); }
  static OperatorExpr zero() { return OperatorExpr(); }
  static OperatorExpr multiply_by(PhasePolynomial f) { return OperatorExpr(MultiplyBy{std::move(f)}); }

  const Node& node() const { return *node_; }

  bool is_zero_tree() const {
    const auto* s = std::get_if<Sum>(node_.get());
    return s && s->terms.empty();
  }

  PhasePolynomial apply(const PhasePolynomial& f) const;

  friend OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b) {
    if (a.is_zero_tree()) return b;
    if (b.is_zero_tree()) return a;
    Sum s;
    for (const OperatorExpr* x : {&a, &b}) {
      if (const auto* inner = std::get_if<Sum>(x->node_.get())) {
        s.terms.insert(s.terms.end(), inner->terms.begin(), inner->terms.end());
      } else {
        s.terms.push_back(*x);
      }
    }
    return OperatorExpr(std::move(s));
  }
  friend OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b) {
    return a + ExactComplex(-1) * b;
  }
  /// Composition: (a * b)(f) = a(b(f)).
  friend OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
    if (a.is_zero_tree() || b.is_zero_tree()) return zero();
    Product p;
    for (const OperatorExpr* x : {&a, &b}) {
      if (const auto* inner = std::get_if<Product>(x->node_.get())) {
        p.factors.insert(p.factors.end(), inner->factors.begin(), inner->factors.end());
      } else {
        p.factors.push_back(*x);
      }
    }
    return OperatorExpr(std::move(p));
  }
  friend OperatorExpr operator*(const ExactComplex& c, const OperatorExpr& a) {
    if (c.is_zero() || a.is_zero_tree()) return zero();
    if (c.is_one()) return a;
    return OperatorExpr(Scale{c, {a}});
  }
  OperatorExpr& operator+=(const OperatorExpr& o) { return *this = *this + o; }

 private:
  friend OperatorExpr bopp_momentum(int, const MetricSignature&);
  friend OperatorExpr bopp_position(int, const MetricSignature&);

  explicit OperatorExpr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  std::shared_ptr<const Node> node_;
};

/// P^mu = p^mu * (left star product), i.e. p^mu - (i/2) d/dq_mu.
inline OperatorExpr bopp_momentum(int mu, const MetricSignature& metric = {}) {
  check_index(mu);
  return OperatorExpr(OperatorExpr::BoppMomentum{mu, metric[mu]});
}

/// Q^mu = q^mu * (left star product), i.e. q^mu + (i/2) d/dp_mu.
inline OperatorExpr bopp_position(int mu, const MetricSignature& metric = {}) {
  check_index(mu);
  return OperatorExpr(OperatorExpr::BoppPosition{mu, metric[mu]});
}

namespace detail {

inline void require_active(int mu, const PhasePolynomial& f) {
  if (mu >= f.dims())
    throw DimensionMismatch("operator index " + std::to_string(mu) + " outside dims=" + std::to_string(f.dims()));
}

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace detail

inline PhasePolynomial OperatorExpr::apply(const PhasePolynomial& f) const {
  return std::visit(
      detail::Overloaded{
          [&](const Identity&) { return f; },
          [&](const MultiplyBy& m) { return m.factor * f; },
          [&](const BoppMomentum& b) {
            detail::require_active(b.mu, f);
            ExactComplex c(Rational(0), Rational(-b.metric_sign, 2));
            return PhasePolynomial::generator(p_gen(b.mu), f.dims()) * f + c * derivative(f, q_gen(b.mu));
          },
          [&](const BoppPosition& b) {
            detail::require_active(b.mu, f);
            ExactComplex c(Rational(0), Rational(b.metric_sign, 2));
            return PhasePolynomial::generator(q_gen(b.mu), f.dims()) * f + c * derivative(f, p_gen(b.mu));
          },
          [&](const Sum& s) {
            PhasePolynomial r(f.dims());
            for (const auto& t : s.terms) r += t.apply(f);
            return r;
          },
          [&](const Product& p) {
            PhasePolynomial r = f;
            for (auto it = p.factors.rbegin(); it != p.factors.rend() && !r.is_zero(); ++it) r = it->apply(r);
            return r;
          },
          [&](const Scale& s) { return s.factor * s.inner.front().apply(f); },
      },
      *node_);
}

inline PhasePolynomial apply_operator(const OperatorExpr& op, const PhasePolynomial& f) { return op.apply(f); }

/// (AB - BA) f, exactly.
inline PhasePolynomial commutator_on(const OperatorExpr& a, const OperatorExpr& b, const PhasePolynomial& f) {
  return a.apply(b.apply(f)) - b.apply(a.apply(f));
}

/// Every monomial in the active generators with total degree <= max_degree,
/// in graded-lex order.
inline std::vector<PhasePolynomial> monomial_basis(int max_degree, int dims = 4) {
  std::vector<Generator> gens;
  for (int mu = 0; mu < dims; ++mu) gens.push_back(q_gen(mu));
  for (int mu = 0; mu < dims; ++mu) gens.push_back(p_gen(mu));
  std::vector<Monomial> monos;
  Monomial cur;
  auto rec = [&](auto&& self, std::size_t k, int budget) -> void {
    if (k == gens.size()) {
      monos.push_back(cur);
      return;
    }
    auto s = static_cast<std::size_t>(slot(gens[k]));
    for (int e = 0; e <= budget; ++e) {
      cur.exp[s] = static_cast<std::uint8_t>(e);
      self(self, k + 1, budget - e);
    }
    cur.exp[s] = 0;
  };
  rec(rec, 0, max_degree);
  std::sort(monos.begin(), monos.end(), GradedLexOrder{});
  std::vector<PhasePolynomial> out;
  out.reserve(monos.size());
  for (const auto& m : monos) out.push_back(PhasePolynomial::monomial(m, ExactComplex(1), dims));
  return out;
}

}  // namespace sdeq
