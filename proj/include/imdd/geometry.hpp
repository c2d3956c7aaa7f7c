#pragma once

#include <array>
#include <cmath>

#include "imdd/signal_space.hpp"

namespace imdd {

/// Row-major 3x3 matrix.
using Mat3 = std::array<Vec3, 3>;

inline Mat3 identity3() noexcept {
  return {Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}, Vec3{0.0, 0.0, 1.0}};
}

inline Vec3 operator*(const Mat3& m, const Vec3& v) noexcept {
  return {dot(m[0], v), dot(m[1], v), dot(m[2], v)};
}

inline Mat3 operator*(const Mat3& a, const Mat3& b) noexcept {
  Mat3 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    }
  }
  return out;
}

inline Mat3 transpose(const Mat3& m) noexcept {
  Mat3 t{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
  }
  return t;
}

inline double determinant(const Mat3& m) noexcept {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline double norm(const Vec3& v) noexcept { return std::sqrt(dot(v, v)); }

/// Rotation by `angle` about the unit vector `axis` (Rodrigues).
inline Mat3 axis_rotation(const Vec3& axis, double angle) noexcept {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  const double x = axis[0], y = axis[1], z = axis[2];
  return {Vec3{t * x * x + c, t * x * y - s * z, t * x * z + s * y},
          Vec3{t * x * y + s * z, t * y * y + c, t * y * z - s * x},
          Vec3{t * x * z - s * y, t * y * z + s * x, t * z * z + c}};
}

}  // namespace imdd
