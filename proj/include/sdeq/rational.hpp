#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sdeq {

/// Exact rational number.
///
/// Values whose reduced numerator and denominator fit in 64 bits are stored
/// inline; anything larger spills into an arbitrary-precision
/// `cpp_rational`. The representation is canonical (reduced, positive
/// denominator, inline whenever it fits), so structural equality is value
/// equality.
class Rational {
 public:
  using Big = boost::multiprecision::cpp_rational;

  Rational() = default;
  Rational(std::int64_t n) { assign(static_cast<Wide>(n), 1); }  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d) { assign(static_cast<Wide>(n), static_cast<Wide>(d)); }
  explicit Rational(const Big& b) { assign_big(b); }

  /// Parses "123", "-7", "3/4". Throws std::invalid_argument on bad input.
  static Rational from_string(std::string_view text) {
    auto slash = text.find('/');
    auto parse_int = [](std::string_view s) {
      if (s.empty()) throw std::invalid_argument("empty integer literal");
      std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
      if (start == s.size()) throw std::invalid_argument("empty integer literal");
      for (std::size_t k = start; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9') throw std::invalid_argument("bad integer literal: " + std::string(s));
      return boost::multiprecision::cpp_int(std::string(s));
    };
    if (slash == std::string_view::npos) return Rational(Big(parse_int(text)));
    auto n = parse_int(text.substr(0, slash));
    auto d = parse_int(text.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rational(Big(n, d));
  }

  /// Exact conversion of a finite double (every double is a dyadic rational).
  static Rational from_double(double x) {
    if (!(x == x) || x == std::numeric_limits<double>::infinity() ||
        x == -std::numeric_limits<double>::infinity())
      throw std::invalid_argument("non-finite double has no rational value");
    int exp = 0;
    double mant = std::frexp(x, &exp);
    // mant * 2^53 is an integer
    auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
    exp -= 53;
    Big r(m);
    if (exp > 0) {
      r *= Big(boost::multiprecision::cpp_int(1) << exp);
    } else if (exp < 0) {
      r /= Big(boost::multiprecision::cpp_int(1) << (-exp));
    }
    return Rational(r);
  }

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const { return big_ ? boost::multiprecision::denominator(*big_) == 1 : den_ == 1; }
  int sign() const {
    if (big_) return big_->sign();
    return (num_ > 0) - (num_ < 0);
  }

  Big to_big() const { return big_ ? *big_ : Big(num_, den_); }

  double to_double() const {
    if (!big_) return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
    return big_->convert_to<double>();
  }

  std::string to_string() const {
    if (!big_) {
      return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }
    auto n = boost::multiprecision::numerator(*big_);
    auto d = boost::multiprecision::denominator(*big_);
    return d == 1 ? n.str() : n.str() + "/" + d.str();
  }

  Rational operator-() const {
    if (!big_ && num_ != std::numeric_limits<std::int64_t>::min()) {
      Rational r;
      r.num_ = -num_;
      r.den_ = den_;
      return r;
    }
    return Rational(Big(-to_big()));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == 1 && b.den_ == 1) return from_wide(Wide(a.num_) + Wide(b.num_), 1);
      Wide n;
      if (!__builtin_add_overflow(Wide(a.num_) * b.den_, Wide(b.num_) * a.den_, &n))
        return from_wide(n, Wide(a.den_) * b.den_);
    }
    return Rational(Big(a.to_big() + b.to_big()));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == 1 && b.den_ == 1) return from_wide(Wide(a.num_) - Wide(b.num_), 1);
      Wide n;
      if (!__builtin_sub_overflow(Wide(a.num_) * b.den_, Wide(b.num_) * a.den_, &n))
        return from_wide(n, Wide(a.den_) * b.den_);
    }
    return Rational(Big(a.to_big() - b.to_big()));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.num_ == 0 || b.num_ == 0) return Rational();
      return from_wide(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
    }
    return Rational(Big(a.to_big() * b.to_big()));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("rational division by zero");
    if (!a.big_ && !b.big_) return from_wide(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
    return Rational(Big(a.to_big() / b.to_big()));
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical form: inline and spilled values never coincide
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return Wide(a.num_) * b.den_ < Wide(b.num_) * a.den_;
    return a.to_big() < b.to_big();
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  using Wide = __int128;
  using UWide = unsigned __int128;

  static UWide gcd_wide(UWide a, UWide b) {
    while (b != 0) {
      UWide t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_wide(Wide n, Wide d) {
    Rational r;
    r.assign(n, d);
    return r;
  }

  void assign(Wide n, Wide d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n == 0) {
      num_ = 0;
      den_ = 1;
      big_.reset();
      return;
    }
    UWide un = n < 0 ? UWide(-n) : UWide(n);
    UWide g = gcd_wide(un, UWide(d));
    if (g > 1) {
      n /= Wide(g);
      d /= Wide(g);
    }
    constexpr Wide lo = std::numeric_limits<std::int64_t>::min() + Wide(1);
    constexpr Wide hi = std::numeric_limits<std::int64_t>::max();
    if (n >= lo && n <= hi && d <= hi) {
      num_ = static_cast<std::int64_t>(n);
      den_ = static_cast<std::int64_t>(d);
      big_.reset();
      return;
    }
    assign_big(Big(to_cpp_int(n), to_cpp_int(d)));
  }

  static boost::multiprecision::cpp_int to_cpp_int(Wide v) {
    bool neg = v < 0;
    UWide u = neg ? UWide(-v) : UWide(v);
    boost::multiprecision::cpp_int r = static_cast<std::uint64_t>(u >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(u);
    return neg ? boost::multiprecision::cpp_int(-r) : r;
  }

  void assign_big(const Big& b) {
    const auto& n = boost::multiprecision::numerator(b);
    const auto& d = boost::multiprecision::denominator(b);
    constexpr std::int64_t lo = std::numeric_limits<std::int64_t>::min() + 1;
    constexpr std::int64_t hi = std::numeric_limits<std::int64_t>::max();
    if (n >= lo && n <= hi && d <= hi) {
      num_ = n.convert_to<std::int64_t>();
      den_ = d.convert_to<std::int64_t>();
      big_.reset();
    } else {
      num_ = 0;
      den_ = 1;
      big_ = std::make_shared<const Big>(b);
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const Big> big_;
};

/// Exact complex number with rational real and imaginary parts.
class ExactComplex {
 public:
  ExactComplex() = default;
  ExactComplex(Rational re) : re_(std::move(re)) {}  // NOLINT(implicit)
  ExactComplex(std::int64_t re) : re_(re) {}         // NOLINT(implicit)
  ExactComplex(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static ExactComplex i() { return {Rational(0), Rational(1)}; }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }
  bool is_one() const { return re_.is_one() && im_.is_zero(); }

  ExactComplex conj() const { return {re_, -im_}; }
  ExactComplex operator-() const { return {-re_, -im_}; }

  friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
  friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
  friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
    if (a.im_.is_zero()) return {a.re_ * b.re_, a.re_ * b.im_};
    if (b.im_.is_zero()) return {a.re_ * b.re_, a.im_ * b.re_};
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
    Rational n2 = b.re_ * b.re_ + b.im_ * b.im_;
    if (n2.is_zero()) throw std::domain_error("complex division by zero");
    ExactComplex t = a * b.conj();
    return {t.re_ / n2, t.im_ / n2};
  }
  ExactComplex& operator+=(const ExactComplex& o) { return *this = *this + o; }
  ExactComplex& operator-=(const ExactComplex& o) { return *this = *this - o; }
  ExactComplex& operator*=(const ExactComplex& o) { return *this = *this * o; }

  friend bool operator==(const ExactComplex& a, const ExactComplex& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

  /// "a/b", "a/b*i", or "(a/b + c/d*i)". Unit imaginary prints as "i".
  std::string to_string() const {
    if (im_.is_zero()) return re_.to_string();
    auto imag_part = [](const Rational& v) {
      if (v.is_one()) return std::string("i");
      if ((-v).is_one()) return std::string("-i");
      return v.to_string() + "*i";
    };
    if (re_.is_zero()) return imag_part(im_);
    if (im_.sign() < 0) return "(" + re_.to_string() + " - " + imag_part(-im_) + ")";
    return "(" + re_.to_string() + " + " + imag_part(im_) + ")";
  }

 private:
  Rational re_;
  Rational im_;
};

}  // namespace sdeq
