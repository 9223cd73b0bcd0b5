#pragma once

#include "sdeq/errors.hpp"
#include "sdeq/rational.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sdeq {

/// The eight phase-space generators (q^0..q^3, p^0..p^3), upper indices.
enum class Generator : std::uint8_t { q0, q1, q2, q3, p0, p1, p2, p3 };

inline constexpr int kGeneratorCount = 8;

constexpr Generator q_gen(int mu) { return static_cast<Generator>(mu); }
constexpr Generator p_gen(int mu) { return static_cast<Generator>(4 + mu); }
constexpr int slot(Generator g) { return static_cast<int>(g); }
/// Spacetime index carried by a generator.
constexpr int index_of(Generator g) { return slot(g) % 4; }
constexpr bool is_position(Generator g) { return slot(g) < 4; }

inline std::string_view generator_name(Generator g) {
  static constexpr std::array<std::string_view, 8> names{"q0", "q1", "q2", "q3", "p0", "p1", "p2", "p3"};
  return names[static_cast<std::size_t>(slot(g))];
}

struct Monomial {
  std::array<std::uint8_t, kGeneratorCount> exp{};

  int degree() const {
    int d = 0;
    for (auto e : exp) d += e;
    return d;
  }
  int operator[](Generator g) const { return exp[static_cast<std::size_t>(slot(g))]; }

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Printing order: higher total degree first, then lexicographic on the
/// exponent vector (q0 most significant), larger exponents first.
struct GradedLexOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return a.exp > b.exp;
  }
};

/// Exact polynomial in the phase-space generators with complex-rational
/// coefficients. `dims` is the number of active coordinate pairs: only
/// q^mu, p^mu with mu < dims may appear. No stored coefficient is zero.
class PhasePolynomial {
 public:
  using Terms = std::map<Monomial, ExactComplex, GradedLexOrder>;

  explicit PhasePolynomial(int dims = 4) : dims_(dims) {
    if (dims < 1 || dims > 4) throw std::invalid_argument("dims must be in 1..4");
  }

  static PhasePolynomial constant(const ExactComplex& c, int dims = 4) {
    PhasePolynomial r(dims);
    r.add_term(Monomial{}, c);
    return r;
  }
  static PhasePolynomial generator(Generator g, int dims = 4) {
    Monomial m;
    m.exp[static_cast<std::size_t>(slot(g))] = 1;
    return monomial(m, ExactComplex(1), dims);
  }
  static PhasePolynomial monomial(const Monomial& m, const ExactComplex& c, int dims = 4) {
    PhasePolynomial r(dims);
    r.add_term(m, c);
    return r;
  }

  int dims() const { return dims_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Total degree; -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

  /// Largest exponent of `g` over all terms.
  int max_exponent(Generator g) const {
    int m = 0;
    for (const auto& [mono, c] : terms_) m = std::max(m, mono[g]);
    return m;
  }

  ExactComplex coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? ExactComplex() : it->second;
  }

  /// Accumulates c * m, dropping the term if it cancels.
  void add_term(const Monomial& m, const ExactComplex& c) {
    if (c.is_zero()) return;
    for (int k = 0; k < kGeneratorCount; ++k) {
      if (m.exp[static_cast<std::size_t>(k)] != 0 && k % 4 >= dims_)
        throw DimensionMismatch("generator " + std::string(generator_name(static_cast<Generator>(k))) +
                                " outside dims=" + std::to_string(dims_));
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  PhasePolynomial operator-() const {
    PhasePolynomial r(dims_);
    for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, -c);
    return r;
  }

  PhasePolynomial& operator+=(const PhasePolynomial& o) {
    check_dims(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  PhasePolynomial& operator-=(const PhasePolynomial& o) {
    check_dims(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend PhasePolynomial operator+(PhasePolynomial a, const PhasePolynomial& b) { return a += b; }
  friend PhasePolynomial operator-(PhasePolynomial a, const PhasePolynomial& b) { return a -= b; }

  friend PhasePolynomial operator*(const PhasePolynomial& a, const PhasePolynomial& b) {
    a.check_dims(b);
    PhasePolynomial r(a.dims_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m;
        for (std::size_t k = 0; k < m.exp.size(); ++k) {
          unsigned e = unsigned(ma.exp[k]) + mb.exp[k];
          if (e > 255) throw std::overflow_error("exponent overflow in polynomial product");
          m.exp[k] = static_cast<std::uint8_t>(e);
        }
        r.add_term(m, ca * cb);
      }
    }
    return r;
  }
  PhasePolynomial& operator*=(const PhasePolynomial& o) { return *this = *this * o; }

  friend PhasePolynomial operator*(const ExactComplex& s, const PhasePolynomial& f) {
    PhasePolynomial r(f.dims_);
    if (s.is_zero()) return r;
    for (const auto& [m, c] : f.terms_) r.terms_.emplace_hint(r.terms_.end(), m, s * c);
    return r;
  }

  /// Complex conjugate of every coefficient (the generators are real).
  PhasePolynomial conj() const {
    PhasePolynomial r(dims_);
    for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, c.conj());
    return r;
  }

  friend bool operator==(const PhasePolynomial& a, const PhasePolynomial& b) {
    return a.dims_ == b.dims_ && a.terms_ == b.terms_;
  }

 private:
  void check_dims(const PhasePolynomial& o) const {
    if (o.dims_ != dims_)
      throw DimensionMismatch("polynomial dims differ: " + std::to_string(dims_) + " vs " + std::to_string(o.dims_));
  }

  int dims_;
  Terms terms_;
};

/// k-th partial derivative with respect to one generator, exact.
inline PhasePolynomial derivative(const PhasePolynomial& f, Generator g, int order = 1) {
  PhasePolynomial r(f.dims());
  const auto k = static_cast<std::size_t>(slot(g));
  for (const auto& [m, c] : f.terms()) {
    int e = m.exp[k];
    if (e < order) continue;
    std::int64_t falling = 1;
    for (int j = 0; j < order; ++j) falling *= (e - j);
    Monomial d = m;
    d.exp[k] = static_cast<std::uint8_t>(e - order);
    r.add_term(d, ExactComplex(Rational(falling)) * c);
  }
  return r;
}

/// Floating-point evaluation at a phase-space point (q^0..q^3, p^0..p^3).
inline std::complex<double> evaluate(const PhasePolynomial& f, std::span<const double, kGeneratorCount> point) {
  std::complex<double> sum = 0.0;
  for (const auto& [m, c] : f.terms()) {
    double v = 1.0;
    for (std::size_t k = 0; k < m.exp.size(); ++k)
      for (int j = 0; j < m.exp[k]; ++j) v *= point[k];
    sum += std::complex<double>(c.real().to_double(), c.imag().to_double()) * v;
  }
  return sum;
}

}  // namespace sdeq
