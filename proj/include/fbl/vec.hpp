#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fbl/common.hpp"

namespace fbl {

using Vector = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double l2_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline void check_finite(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw ValidationError(std::string(what) + ": non-finite entry");
    }
  }
}

inline void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ValidationError(std::string(what) + ": dimension mismatch (got " +
                          std::to_string(got) + ", want " + std::to_string(want) + ")");
  }
}

}  // namespace fbl
