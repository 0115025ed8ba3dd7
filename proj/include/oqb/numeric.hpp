#pragma once

#include <algorithm>
#include <cmath>

namespace oqb {

/// Odd extension of the real power: sign(s) * |s|^r.
///
/// Closed forms built from antiderivatives of |t - c|^k are written with
/// powers of signed differences; this is the reading that stays continuous
/// in the exponent.
inline double signed_pow(double s, double r) {
  if (s == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(s), r), s);
}

/// |x - y| <= tol * max(1, |x|, |y|).
inline bool close_scaled(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace oqb
