#pragma once

#include "sdeq/errors.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sdeq {

/// Diagonal Minkowski metric. Entries are +1 or -1 with exactly one
/// timelike entry (index 0, whose sign differs from the three others).
/// Components are stored with upper indices throughout the library; this
/// type is the only place indices are raised or lowered.
class MetricSignature {
 public:
  /// (+,-,-,-), the default.
  constexpr MetricSignature() = default;

  explicit MetricSignature(std::array<int, 4> diag) : diag_(diag) {
    for (int g : diag_)
      if (g != 1 && g != -1) throw std::invalid_argument("metric entries must be +1 or -1");
    if (!(diag_[1] == diag_[2] && diag_[2] == diag_[3] && diag_[0] == -diag_[1]))
      throw std::invalid_argument("metric must have exactly one timelike entry at index 0");
  }

  static constexpr MetricSignature mostly_minus() { return MetricSignature(); }
  static MetricSignature mostly_plus() { return MetricSignature({-1, 1, 1, 1}); }

  /// Parses "+---" or "-+++".
  static MetricSignature parse(std::string_view text) {
    if (text == "+---") return mostly_minus();
    if (text == "-+++") return mostly_plus();
    throw std::invalid_argument("unknown metric '" + std::string(text) + "' (expected +--- or -+++)");
  }

  /// g^{mu mu} (= g_{mu mu} for a diagonal +-1 metric).
  int operator[](int mu) const {
    if (mu < 0 || mu > 3) throw IndexOutOfRange("spacetime index " + std::to_string(mu) + " outside 0..3");
    return diag_[static_cast<std::size_t>(mu)];
  }
  int diag(int mu, int nu) const { return mu == nu ? (*this)[mu] : 0; }
  int determinant() const { return diag_[0] * diag_[1] * diag_[2] * diag_[3]; }
  bool is_mostly_minus() const { return diag_[0] == 1; }

  std::string to_string() const { return is_mostly_minus() ? "+---" : "-+++"; }

  friend bool operator==(const MetricSignature&, const MetricSignature&) = default;

 private:
  std::array<int, 4> diag_{1, -1, -1, -1};
};

inline void check_index(int mu) {
  if (mu < 0 || mu > 3) throw IndexOutOfRange("spacetime index " + std::to_string(mu) + " outside 0..3");
}

}  // namespace sdeq
