#pragma once

#include "sdeq/grid.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sdeq {

/// CSV: header "<axis names...>,re,im", one row per point in storage order,
/// 17 significant digits.
inline void write_csv(std::ostream& os, const Field& f) {
  const GridSpec& spec = f.spec();
  for (const auto& a : spec.axes()) os << a.name << ',';
  os << "re,im\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto x = spec.coordinates(i);
    for (int k = 0; k < spec.rank(); ++k) os << x[static_cast<std::size_t>(k)] << ',';
    os << f[i].real() << ',' << f[i].imag() << '\n';
  }
}

namespace detail {

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw std::runtime_error("truncated field file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace detail

/// Binary dump: "SDEQ", u16 version (1), u16 axis count, per axis
/// (u32 n, f64 min, f64 max), then interleaved re/im f64; little-endian.
inline void write_binary(std::ostream& os, const Field& f) {
  os.write("SDEQ", 4);
  detail::put_le<std::uint16_t>(os, 1);
  detail::put_le<std::uint16_t>(os, static_cast<std::uint16_t>(f.spec().rank()));
  for (const auto& a : f.spec().axes()) {
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(a.n));
    detail::put_le<double>(os, a.min);
    detail::put_le<double>(os, a.max);
  }
  for (const auto& v : f.values()) {
    detail::put_le<double>(os, v.real());
    detail::put_le<double>(os, v.imag());
  }
}

/// Reads a binary dump. Axis names and periodicity are not stored; axes are
/// named a0, a1, ... and take the given periodic flag.
inline Field read_binary(std::istream& is, bool periodic = true) {
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != "SDEQ") throw std::runtime_error("not an SDEQ field file");
  auto version = detail::get_le<std::uint16_t>(is);
  if (version != 1) throw std::runtime_error("unsupported field file version " + std::to_string(version));
  auto rank = detail::get_le<std::uint16_t>(is);
  std::vector<GridAxis> axes;
  for (int k = 0; k < rank; ++k) {
    GridAxis a;
    a.name = "a" + std::to_string(k);
    a.n = static_cast<int>(detail::get_le<std::uint32_t>(is));
    a.min = detail::get_le<double>(is);
    a.max = detail::get_le<double>(is);
    a.periodic = periodic;
    axes.push_back(a);
  }
  GridSpec spec(std::move(axes));
  std::vector<cplx> values(spec.size());
  for (auto& v : values) {
    double re = detail::get_le<double>(is);
    double im = detail::get_le<double>(is);
    v = {re, im};
  }
  return Field(spec, std::move(values));
}

inline void write_field(const std::string& path, const Field& f, const std::string& format) {
  std::ofstream os(path, format == "bin" ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  if (format == "bin") {
    write_binary(os, f);
  } else if (format == "csv") {
    write_csv(os, f);
  } else {
    throw std::invalid_argument("unknown field format '" + format + "'");
  }
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace sdeq
