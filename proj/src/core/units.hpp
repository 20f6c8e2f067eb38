#pragma once

#include <numbers>

namespace imtd {

// Angles cross module boundaries in degrees; trigonometry runs in radians.
inline constexpr double kPi = std::numbers::pi;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace imtd
