#pragma once

#include "sdeq/errors.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdeq {

using cplx = std::complex<double>;

struct GridAxis {
  std::string name;
  int n = 0;
  double min = 0, max = 0;
  bool periodic = true;

  /// Periodic axes exclude the right endpoint; closed axes include it.
  double spacing() const { return periodic ? (max - min) / n : (max - min) / (n - 1); }
  double coordinate(int j) const { return min + j * spacing(); }
  /// Length of the periodic cell seen by the Fourier transform.
  double period() const { return n * spacing(); }

  friend bool operator==(const GridAxis&, const GridAxis&) = default;
};

/// Uniform grid over 1 to 4 named axes, row-major (axis 0 slowest).
class GridSpec {
 public:
  static constexpr std::size_t kDefaultBudget = std::size_t{1} << 22;

  GridSpec() = default;
  explicit GridSpec(std::vector<GridAxis> axes, std::size_t budget = kDefaultBudget) : axes_(std::move(axes)) {
    if (axes_.empty() || axes_.size() > 4) throw std::invalid_argument("grid must have 1..4 axes");
    std::size_t total = 1;
    for (const auto& a : axes_) {
      if (a.n < 4) throw std::invalid_argument("axis '" + a.name + "' needs at least 4 points");
      if (!(a.max > a.min)) throw std::invalid_argument("axis '" + a.name + "' needs max > min");
      total *= static_cast<std::size_t>(a.n);
      if (total > budget)
        throw std::length_error("grid exceeds the point budget of " + std::to_string(budget));
    }
    for (std::size_t i = 0; i < axes_.size(); ++i)
      for (std::size_t j = i + 1; j < axes_.size(); ++j)
        if (axes_[i].name == axes_[j].name) throw std::invalid_argument("duplicate axis '" + axes_[i].name + "'");
  }

  /// Parses "name:n:min:max[:open],...". Axes are periodic unless marked open.
  static GridSpec parse(const std::string& text, std::size_t budget = kDefaultBudget) {
    std::vector<GridAxis> axes;
    std::stringstream all(text);
    std::string item;
    while (std::getline(all, item, ',')) {
      std::vector<std::string> parts;
      std::stringstream one(item);
      std::string p;
      while (std::getline(one, p, ':')) parts.push_back(p);
      if (parts.size() != 4 && !(parts.size() == 5 && parts[4] == "open"))
        throw std::invalid_argument("grid axis must be name:n:min:max[:open], got '" + item + "'");
      GridAxis a;
      a.name = parts[0];
      try {
        std::size_t used = 0;
        a.n = std::stoi(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("n");
        a.min = std::stod(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("min");
        a.max = std::stod(parts[3], &used);
        if (used != parts[3].size()) throw std::invalid_argument("max");
      } catch (const std::logic_error&) {
        throw std::invalid_argument("malformed numbers in grid axis '" + item + "'");
      }
      a.periodic = parts.size() == 4;
      axes.push_back(a);
    }
    return GridSpec(std::move(axes), budget);
  }

  static GridSpec cube(const std::vector<std::string>& names, int n, double min, double max) {
    std::vector<GridAxis> axes;
    for (const auto& nm : names) axes.push_back({nm, n, min, max, true});
    return GridSpec(std::move(axes));
  }

  int rank() const { return static_cast<int>(axes_.size()); }
  const GridAxis& axis(int k) const {
    if (k < 0 || k >= rank()) throw IndexOutOfRange("grid axis " + std::to_string(k) + " out of range");
    return axes_[static_cast<std::size_t>(k)];
  }
  const std::vector<GridAxis>& axes() const { return axes_; }

  std::optional<int> find(const std::string& name) const {
    for (int k = 0; k < rank(); ++k)
      if (axes_[static_cast<std::size_t>(k)].name == name) return k;
    return std::nullopt;
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (const auto& a : axes_) s *= static_cast<std::size_t>(a.n);
    return s;
  }

  /// Per-axis indices of a flat position.
  std::array<int, 4> unflatten(std::size_t flat) const {
    std::array<int, 4> idx{};
    for (int k = rank() - 1; k >= 0; --k) {
      auto n = static_cast<std::size_t>(axes_[static_cast<std::size_t>(k)].n);
      idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % n);
      flat /= n;
    }
    return idx;
  }

  std::array<double, 4> coordinates(std::size_t flat) const {
    auto idx = unflatten(flat);
    std::array<double, 4> x{};
    for (int k = 0; k < rank(); ++k)
      x[static_cast<std::size_t>(k)] = axes_[static_cast<std::size_t>(k)].coordinate(idx[static_cast<std::size_t>(k)]);
    return x;
  }

  /// Quadrature weight of a flat position (rectangle or trapezoid per axis).
  double weight(std::size_t flat) const {
    auto idx = unflatten(flat);
    double w = 1;
    for (int k = 0; k < rank(); ++k) {
      const auto& a = axes_[static_cast<std::size_t>(k)];
      double h = a.spacing();
      int j = idx[static_cast<std::size_t>(k)];
      w *= (!a.periodic && (j == 0 || j == a.n - 1)) ? h / 2 : h;
    }
    return w;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& a : axes_) {
      std::ostringstream o;
      o.precision(17);
      o << a.name << ':' << a.n << ':' << a.min << ':' << a.max << (a.periodic ? "" : ":open");
      s += (s.empty() ? "" : ",") + o.str();
    }
    return s;
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::vector<GridAxis> axes_;
};

/// Complex samples on a GridSpec.
class Field {
 public:
  Field() = default;
  explicit Field(GridSpec spec) : spec_(std::move(spec)), values_(spec_.size()) {}
  Field(GridSpec spec, std::vector<cplx> values) : spec_(std::move(spec)), values_(std::move(values)) {
    if (values_.size() != spec_.size()) throw DimensionMismatch("field value count does not match grid");
  }

  /// Samples f at every grid point; f receives the coordinates in axis order.
  static Field sample(const GridSpec& spec, const std::function<cplx(const std::array<double, 4>&)>& f) {
    Field r(spec);
    for (std::size_t i = 0; i < r.values_.size(); ++i) r.values_[i] = f(spec.coordinates(i));
    return r;
  }

  const GridSpec& spec() const { return spec_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  double max_abs() const {
    double m = 0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  double max_abs_imag() const {
    double m = 0;
    for (const auto& v : values_) m = std::max(m, std::abs(v.imag()));
    return m;
  }
  bool has_nan() const {
    for (const auto& v : values_)
      if (std::isnan(v.real()) || std::isnan(v.imag())) return true;
    return false;
  }

  Field conj() const {
    Field r = *this;
    for (auto& v : r.values_) v = std::conj(v);
    return r;
  }

  Field& operator+=(const Field& o) {
    require_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    require_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  Field& operator*=(cplx s) {
    for (auto& v : values_) v *= s;
    return *this;
  }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(cplx s, Field a) { return a *= s; }
  /// Pointwise product.
  friend Field operator*(const Field& a, const Field& b) {
    a.require_same(b);
    Field r = a;
    for (std::size_t i = 0; i < r.values_.size(); ++i) r.values_[i] *= b.values_[i];
    return r;
  }

  void require_same(const Field& o) const {
    if (!(spec_ == o.spec_)) throw DimensionMismatch("fields live on different grids");
  }

 private:
  GridSpec spec_;
  std::vector<cplx> values_;
};

/// Field equal to the coordinate of `axis` at every point.
inline Field coordinate_field(const GridSpec& spec, int axis) {
  spec.axis(axis);
  return Field::sample(spec, [axis](const std::array<double, 4>& x) { return cplx(x[static_cast<std::size_t>(axis)]); });
}

/// Quadrature of conj(f) g over the grid.
inline cplx inner_product(const Field& f, const Field& g) {
  f.require_same(g);
  cplx s = 0, c = 0;  // Kahan-compensated
  for (std::size_t i = 0; i < f.size(); ++i) {
    cplx y = f.spec().weight(i) * std::conj(f[i]) * g[i] - c;
    cplx t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

inline double norm(const Field& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }

/// Quadrature of f over the grid.
inline cplx integrate(const Field& f) {
  cplx s = 0, c = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    cplx y = f.spec().weight(i) * f[i] - c;
    cplx t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

}  // namespace sdeq
