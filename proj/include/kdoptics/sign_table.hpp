#pragma once

#include <array>
#include <cstddef>

#include "kdoptics/errors.hpp"

namespace kdoptics {

/// Eigenvalue labels of a two-outcome observable, in storage order.
inline constexpr std::array<int, 2> kSigns{+1, -1};

inline std::size_t sign_index(int label) {
  require(label == 1 || label == -1, "outcome label must be +1 or -1");
  return label == 1 ? 0 : 1;
}

/// 2x2 table indexed by a pair of outcome labels (a, b) in {+1, -1}^2.
template <typename T>
class SignTable {
 public:
  SignTable() = default;

  T& operator()(int a, int b) { return values_[2 * sign_index(a) + sign_index(b)]; }
  const T& operator()(int a, int b) const { return values_[2 * sign_index(a) + sign_index(b)]; }

  T sum() const {
    T total{};
    for (const auto& v : values_) total += v;
    return total;
  }

  const std::array<T, 4>& raw() const { return values_; }

 private:
  std::array<T, 4> values_{};
};

}  // namespace kdoptics
