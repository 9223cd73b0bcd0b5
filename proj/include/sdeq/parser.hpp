#pragma once

#include "sdeq/errors.hpp"
#include "sdeq/polynomial.hpp"

#include <cctype>
#include <string>
#include <string_view>

namespace sdeq {

namespace detail {

// Recursive-descent parser for
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := integer | 'i' | identifier | '(' expr ')'
//
// Division is only allowed by a nonzero constant.
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, int dims) : text_(text), dims_(dims) {}

  PhasePolynomial parse() {
    PhasePolynomial r = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return r;
  }

 private:
  static constexpr int kMaxExponent = 255;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  PhasePolynomial expr() {
    PhasePolynomial r = term();
    for (;;) {
      if (accept('+')) {
        r += term();
      } else if (accept('-')) {
        r -= term();
      } else {
        return r;
      }
    }
  }

  PhasePolynomial term() {
    PhasePolynomial r = unary();
    for (;;) {
      if (accept('*')) {
        r = r * unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        PhasePolynomial d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        if (d.degree() != 0) throw ParseError("division by a non-constant expression", at);
        ExactComplex inv = ExactComplex(1) / d.terms().begin()->second;
        r = inv * r;
      } else {
        return r;
      }
    }
  }

  PhasePolynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  PhasePolynomial power() {
    PhasePolynomial base = primary();
    if (!accept('^')) return base;
    skip_ws();
    std::size_t at = pos_;
    std::string digits = read_digits();
    if (digits.empty()) throw ParseError("expected nonnegative integer exponent", at);
    if (digits.size() > 3 || std::stoi(digits) > kMaxExponent) throw ParseError("exponent overflow", at);
    int n = std::stoi(digits);
    PhasePolynomial r = PhasePolynomial::constant(ExactComplex(1), dims_);
    try {
      for (int k = 0; k < n; ++k) r = r * base;
    } catch (const std::overflow_error&) {
      throw ParseError("exponent overflow", at);
    }
    return r;
  }

  std::string read_digits() {
    std::string d;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) d += text_[pos_++];
    return d;
  }

  PhasePolynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    std::size_t at = pos_;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      PhasePolynomial r = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return PhasePolynomial::constant(ExactComplex(Rational::from_string(read_digits())), dims_);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        id += text_[pos_++];
      if (id == "i") return PhasePolynomial::constant(ExactComplex::i(), dims_);
      Generator g = resolve(id, at);
      if (index_of(g) >= dims_)
        throw ParseError("identifier '" + id + "' out of range for dims=" + std::to_string(dims_), at);
      return PhasePolynomial::generator(g, dims_);
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", at);
  }

  static Generator resolve(const std::string& id, std::size_t at) {
    if (id == "x") return Generator::q1;
    if (id == "y") return Generator::q2;
    if (id == "px") return Generator::p1;
    if (id == "py") return Generator::p2;
    if (id.size() == 2 && (id[0] == 'q' || id[0] == 'p') && id[1] >= '0' && id[1] <= '3') {
      int mu = id[1] - '0';
      return id[0] == 'q' ? q_gen(mu) : p_gen(mu);
    }
    throw ParseError("unknown identifier '" + id + "'", at);
  }

  std::string_view text_;
  int dims_;
  std::size_t pos_ = 0;
};

inline std::string monomial_string(const Monomial& m) {
  std::string s;
  for (int k = 0; k < kGeneratorCount; ++k) {
    int e = m.exp[static_cast<std::size_t>(k)];
    if (e == 0) continue;
    if (!s.empty()) s += '*';
    s += generator_name(static_cast<Generator>(k));
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

}  // namespace detail

/// Parses an exact polynomial expression. Identifiers are q0..q3, p0..p3
/// and the planar aliases x, y, px, py (= q1, q2, p1, p2); `i` is the
/// imaginary unit. Throws ParseError with the offending position.
inline PhasePolynomial parse_expression(std::string_view text, int dims = 4) {
  return detail::ExpressionParser(text, dims).parse();
}

/// Canonical text form, e.g. "q0*p0 + 1/2*i". Terms are emitted in graded
/// lexicographic order; parse_expression(to_string(f), f.dims()) == f.
inline std::string to_string(const PhasePolynomial& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    std::string mono = detail::monomial_string(m);
    bool negative = false;
    std::string coeff;
    if (c.is_real() || c.real().is_zero()) {
      // Single-part coefficient: pull the sign out front.
      Rational v = c.is_real() ? c.real() : c.imag();
      negative = v.sign() < 0;
      Rational mag = negative ? -v : v;
      if (c.is_real()) {
        coeff = (mag.is_one() && !mono.empty()) ? "" : mag.to_string();
      } else {
        coeff = mag.is_one() ? "i" : mag.to_string() + "*i";
      }
    } else {
      coeff = c.to_string();
    }
    std::string body = coeff.empty() ? mono : (mono.empty() ? coeff : coeff + "*" + mono);
    if (first) {
      out += negative ? "-" + body : body;
    } else {
      out += negative ? " - " + body : " + " + body;
    }
    first = false;
  }
  return out;
}

}  // namespace sdeq
