#pragma once

#include <cmath>
#include <numbers>

namespace magbloch {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Representative of an angle in [0, 2pi).
inline double wrap_positive(double angle) {
  double r = std::fmod(angle, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

/// Representative of an angle in (-pi, pi].
inline double wrap_symmetric(double angle) {
  const double r = wrap_positive(angle);
  return r > pi ? r - two_pi : r;
}

/// Distance between two angles on the circle, in [0, pi].
inline double angle_distance(double a, double b) { return std::abs(wrap_symmetric(a - b)); }

}  // namespace magbloch
