#pragma once

#include "sdeq/metric.hpp"
#include "sdeq/operator.hpp"
#include "sdeq/parser.hpp"
#include "sdeq/poincare.hpp"

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdeq {

/// Exact 4x4 complex-rational matrix, row-major.
class Matrix4 {
 public:
  Matrix4() = default;

  static Matrix4 identity() {
    Matrix4 m;
    for (int k = 0; k < 4; ++k) m(k, k) = ExactComplex(1);
    return m;
  }

  /// Block matrix [[a, b], [c, d]] from 2x2 blocks.
  static Matrix4 blocks(const std::array<ExactComplex, 4>& a, const std::array<ExactComplex, 4>& b,
                        const std::array<ExactComplex, 4>& c, const std::array<ExactComplex, 4>& d) {
    Matrix4 m;
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) {
        auto k = static_cast<std::size_t>(2 * r + s);
        m(r, s) = a[k];
        m(r, s + 2) = b[k];
        m(r + 2, s) = c[k];
        m(r + 2, s + 2) = d[k];
      }
    return m;
  }

  ExactComplex& operator()(int r, int c) { return e_[static_cast<std::size_t>(4 * r + c)]; }
  const ExactComplex& operator()(int r, int c) const { return e_[static_cast<std::size_t>(4 * r + c)]; }

  bool is_zero() const {
    for (const auto& x : e_)
      if (!x.is_zero()) return false;
    return true;
  }

  friend Matrix4 operator+(const Matrix4& a, const Matrix4& b) {
    Matrix4 r;
    for (std::size_t k = 0; k < 16; ++k) r.e_[k] = a.e_[k] + b.e_[k];
    return r;
  }
  friend Matrix4 operator-(const Matrix4& a, const Matrix4& b) {
    Matrix4 r;
    for (std::size_t k = 0; k < 16; ++k) r.e_[k] = a.e_[k] - b.e_[k];
    return r;
  }
  friend Matrix4 operator*(const Matrix4& a, const Matrix4& b) {
    Matrix4 r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        ExactComplex s;
        for (int k = 0; k < 4; ++k)
          if (!a(i, k).is_zero() && !b(k, j).is_zero()) s += a(i, k) * b(k, j);
        r(i, j) = s;
      }
    return r;
  }
  friend Matrix4 operator*(const ExactComplex& c, const Matrix4& a) {
    Matrix4 r;
    for (std::size_t k = 0; k < 16; ++k) r.e_[k] = c * a.e_[k];
    return r;
  }
  friend bool operator==(const Matrix4& a, const Matrix4& b) { return a.e_ == b.e_; }

  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < 4; ++i) {
      s += i ? ", [" : "[";
      for (int j = 0; j < 4; ++j) s += (j ? ", " : "") + (*this)(i, j).to_string();
      s += "]";
    }
    return s + "]";
  }

 private:
  std::array<ExactComplex, 16> e_{};
};

/// Gamma matrices together with gamma_5, alpha^j = gamma^0 gamma^j and
/// Sigma^k, tied to the metric they represent.
struct GammaRep {
  std::array<Matrix4, 4> gamma;
  Matrix4 gamma5;
  std::array<Matrix4, 3> alpha;  // alpha[j-1] = alpha^j
  std::array<Matrix4, 3> Sigma;  // Sigma[k-1] = Sigma^k
  MetricSignature metric;
};

namespace detail {

inline std::array<std::array<ExactComplex, 4>, 4> pauli() {
  const ExactComplex i = ExactComplex::i();
  const ExactComplex z, one(1), m1(-1);
  return {{{one, z, z, one}, {z, one, one, z}, {z, -i, i, z}, {one, z, z, m1}}};
}

}  // namespace detail

/// Dirac representation:
///   gamma^0 = [[1, 0], [0, -1]],  gamma^i = [[0, sigma^i], [-sigma^i, 0]],
///   gamma_5 = [[0, 1], [1, 0]],   Sigma^k = [[sigma^k, 0], [0, sigma^k]].
/// For (+,-,-,-) these matrices are used as is. For (-,+,+,+) every
/// gamma^mu is multiplied by i so that {gamma^mu, gamma^nu} = 2 g^{mu nu};
/// gamma_5 and Sigma are unchanged and alpha^j = gamma^0 gamma^j follows.
inline GammaRep standard_gamma_rep(const MetricSignature& metric = {}) {
  const auto s = detail::pauli();
  const ExactComplex z, one(1), m1(-1);
  const std::array<ExactComplex, 4> I2{one, z, z, one}, O2{z, z, z, z}, mI2{m1, z, z, m1};
  auto neg = [](std::array<ExactComplex, 4> a) {
    for (auto& x : a) x = -x;
    return a;
  };

  GammaRep rep;
  rep.metric = metric;
  rep.gamma[0] = Matrix4::blocks(I2, O2, O2, mI2);
  for (int k = 1; k <= 3; ++k) {
    const auto& sk = s[static_cast<std::size_t>(k)];
    rep.gamma[static_cast<std::size_t>(k)] = Matrix4::blocks(O2, sk, neg(sk), O2);
    rep.Sigma[static_cast<std::size_t>(k - 1)] = Matrix4::blocks(sk, O2, O2, sk);
  }
  rep.gamma5 = Matrix4::blocks(O2, I2, I2, O2);
  if (!metric.is_mostly_minus()) {
    for (auto& g : rep.gamma) g = ExactComplex::i() * g;
  }
  for (int j = 1; j <= 3; ++j)
    rep.alpha[static_cast<std::size_t>(j - 1)] = rep.gamma[0] * rep.gamma[static_cast<std::size_t>(j)];
  return rep;
}

/// sigma^{mu nu} = (i/2) [gamma^mu, gamma^nu].
inline Matrix4 sigma(int mu, int nu, const GammaRep& rep) {
  check_index(mu);
  check_index(nu);
  const auto& a = rep.gamma[static_cast<std::size_t>(mu)];
  const auto& b = rep.gamma[static_cast<std::size_t>(nu)];
  return ExactComplex(Rational(0), Rational(1, 2)) * (a * b - b * a);
}

/// Spatial Levi-Civita symbol with lowered indices, epsilon_{ijk} =
/// g_ii g_jj g_kk epsilon^{ijk}, epsilon^{123} = +1. Indices are 1..3.
inline int spatial_levi_civita_lower(int i, int j, int k, const MetricSignature& metric) {
  return levi_civita(0, i, j, k) * metric[i] * metric[j] * metric[k];
}

/// Exact identity checks on a representation, as matrix residuals.
struct CliffordReport {
  struct Entry {
    std::string relation;
    Matrix4 residual;
  };
  std::vector<Entry> entries;

  bool pass() const {
    for (const auto& e : entries)
      if (!e.residual.is_zero()) return false;
    return true;
  }
  std::size_t violations() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.residual.is_zero() ? 0 : 1;
    return n;
  }
};

/// {gamma^mu, gamma^nu} = 2 g^{mu nu} I, gamma_5^2 = I, {gamma_5, gamma^mu} = 0,
/// sigma^{0j} = i alpha^j and sigma^{ij} = -epsilon_{ijk} Sigma^k.
inline CliffordReport check_clifford(const GammaRep& rep) {
  CliffordReport report;
  const Matrix4 I = Matrix4::identity();
  const auto& g = rep.gamma;
  auto idx = [](std::string fam, std::initializer_list<int> is) { return detail::relation_id(fam.c_str(), is); };
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const auto& a = g[static_cast<std::size_t>(mu)];
      const auto& b = g[static_cast<std::size_t>(nu)];
      report.entries.push_back(
          {idx("anticommutator", {mu, nu}), a * b + b * a - ExactComplex(2 * rep.metric.diag(mu, nu)) * I});
    }
  report.entries.push_back({"gamma5^2", rep.gamma5 * rep.gamma5 - I});
  for (int mu = 0; mu < 4; ++mu) {
    const auto& a = g[static_cast<std::size_t>(mu)];
    report.entries.push_back({idx("{gamma5,gamma}", {mu}), rep.gamma5 * a + a * rep.gamma5});
  }
  for (int j = 1; j <= 3; ++j)
    report.entries.push_back(
        {idx("sigma0j", {j}), sigma(0, j, rep) - ExactComplex::i() * rep.alpha[static_cast<std::size_t>(j - 1)]});
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      Matrix4 rhs;
      for (int k = 1; k <= 3; ++k) {
        int eps = spatial_levi_civita_lower(i, j, k, rep.metric);
        if (eps != 0) rhs = rhs - ExactComplex(eps) * rep.Sigma[static_cast<std::size_t>(k - 1)];
      }
      report.entries.push_back({idx("sigmaij", {i, j}), sigma(i, j, rep) - rhs});
    }
  return report;
}

/// The constant c with gamma^mu gamma^nu = g^{mu nu} I + c sigma^{mu nu} for
/// all mu != nu. Throws std::runtime_error if the twelve ordered pairs do not
/// share one constant.
inline ExactComplex gamma_product_decomposition(const GammaRep& rep) {
  const Matrix4 I = Matrix4::identity();
  bool found = false;
  ExactComplex c;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      if (mu == nu) continue;
      Matrix4 s = sigma(mu, nu, rep);
      Matrix4 lhs = rep.gamma[static_cast<std::size_t>(mu)] * rep.gamma[static_cast<std::size_t>(nu)] -
                    ExactComplex(rep.metric.diag(mu, nu)) * I;
      if (!found) {
        for (int r = 0; r < 4 && !found; ++r)
          for (int k = 0; k < 4 && !found; ++k)
            if (!s(r, k).is_zero()) {
              c = lhs(r, k) / s(r, k);
              found = true;
            }
        if (!found) throw std::runtime_error("sigma vanishes; representation is degenerate");
      }
      if (!(lhs == c * s))
        throw std::runtime_error("no single constant c with gamma gamma = g + c sigma (pair " + std::to_string(mu) +
                                 "," + std::to_string(nu) + ")");
    }
  return c;
}

/// (I + sign * gamma_5) / 2.
inline Matrix4 chiral_projector(int sign, const GammaRep& rep) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("chirality sign must be +1 or -1");
  return ExactComplex(Rational(1, 2)) * (Matrix4::identity() + ExactComplex(sign) * rep.gamma5);
}

inline std::array<std::complex<double>, 4> apply(const Matrix4& m, const std::array<std::complex<double>, 4>& v) {
  std::array<std::complex<double>, 4> r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const auto& e = m(i, j);
      r[static_cast<std::size_t>(i)] +=
          std::complex<double>(e.real().to_double(), e.imag().to_double()) * v[static_cast<std::size_t>(j)];
    }
  return r;
}

inline std::array<ExactComplex, 4> apply(const Matrix4& m, const std::array<ExactComplex, 4>& v) {
  std::array<ExactComplex, 4> r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[static_cast<std::size_t>(i)] += m(i, j) * v[static_cast<std::size_t>(j)];
  return r;
}

/// Chirality projection of a four-component value: returns psi with
/// gamma_5 psi = sign * psi.
template <class T>
std::array<T, 4> project_solution(const std::array<T, 4>& psi, int sign = 1, const GammaRep& rep = standard_gamma_rep()) {
  return sdeq::apply(chiral_projector(sign, rep), psi);
}

using SpinorPolynomial = std::array<PhasePolynomial, 4>;

/// 4x4 array of operators acting componentwise on spinor polynomials.
class MatrixOperatorExpr {
 public:
  MatrixOperatorExpr() = default;

  /// Matrix of constants times a scalar operator.
  static MatrixOperatorExpr kron(const Matrix4& m, const OperatorExpr& op) {
    MatrixOperatorExpr r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (!m(i, j).is_zero()) r(i, j) = m(i, j) * op;
    return r;
  }

  OperatorExpr& operator()(int r, int c) { return e_[static_cast<std::size_t>(4 * r + c)]; }
  const OperatorExpr& operator()(int r, int c) const { return e_[static_cast<std::size_t>(4 * r + c)]; }

  SpinorPolynomial apply(const SpinorPolynomial& psi) const {
    int dims = psi[0].dims();
    SpinorPolynomial out{PhasePolynomial(dims), PhasePolynomial(dims), PhasePolynomial(dims), PhasePolynomial(dims)};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const auto& op = (*this)(i, j);
        const auto& in = psi[static_cast<std::size_t>(j)];
        if (op.is_zero_tree() || in.is_zero()) continue;
        out[static_cast<std::size_t>(i)] += op.apply(in);
      }
    return out;
  }

  friend MatrixOperatorExpr operator+(const MatrixOperatorExpr& a, const MatrixOperatorExpr& b) {
    MatrixOperatorExpr r;
    for (std::size_t k = 0; k < 16; ++k) r.e_[k] = a.e_[k] + b.e_[k];
    return r;
  }
  friend MatrixOperatorExpr operator-(const MatrixOperatorExpr& a, const MatrixOperatorExpr& b) {
    MatrixOperatorExpr r;
    for (std::size_t k = 0; k < 16; ++k) r.e_[k] = a.e_[k] - b.e_[k];
    return r;
  }
  /// Composition, (a * b) psi = a (b psi).
  friend MatrixOperatorExpr operator*(const MatrixOperatorExpr& a, const MatrixOperatorExpr& b) {
    MatrixOperatorExpr r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        OperatorExpr s;
        for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
        r(i, j) = s;
      }
    return r;
  }

 private:
  std::array<OperatorExpr, 16> e_{};
};

/// gamma^mu (p_mu - (i/2) d/dq^mu) - m I.
inline MatrixOperatorExpr dirac_operator(const Rational& mass, const GammaRep& rep) {
  if (mass.sign() < 0) throw std::invalid_argument("mass must be nonnegative");
  MatrixOperatorExpr d;
  for (int mu = 0; mu < 4; ++mu)
    d = d + MatrixOperatorExpr::kron(rep.gamma[static_cast<std::size_t>(mu)], lowered_momentum(mu, rep.metric));
  if (!mass.is_zero())
    d = d - MatrixOperatorExpr::kron(Matrix4::identity(), ExactComplex(mass) * OperatorExpr::identity());
  return d;
}

/// (gamma^mu P_mu)(gamma^nu P_nu) - P^2 I on every spinor e_a * f with f a
/// monomial of degree <= max_degree. Records are per (input slot, output slot).
inline AlgebraReport dirac_square_check(int max_degree, const GammaRep& rep = standard_gamma_rep()) {
  const MatrixOperatorExpr d = dirac_operator(Rational(0), rep);
  const MatrixOperatorExpr d2 = d * d;
  const OperatorExpr p2 = casimir_p2(rep.metric);
  AlgebraReport report;
  for (const auto& f : monomial_basis(max_degree)) {
    const std::string mono = to_string(f);
    const PhasePolynomial p2f = p2.apply(f);
    for (int a = 0; a < 4; ++a) {
      SpinorPolynomial psi{PhasePolynomial(4), PhasePolynomial(4), PhasePolynomial(4), PhasePolynomial(4)};
      psi[static_cast<std::size_t>(a)] = f;
      SpinorPolynomial out = d2.apply(psi);
      for (int b = 0; b < 4; ++b) {
        PhasePolynomial r = out[static_cast<std::size_t>(b)];
        if (a == b) r -= p2f;
        report.records.push_back({detail::relation_id("D2-P2", {a, b}), mono, r});
      }
    }
  }
  return report;
}

}  // namespace sdeq
