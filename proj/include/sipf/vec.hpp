#pragma once

#include <array>
#include <cmath>

namespace sipf {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) {
  a[0] += b[0];
  a[1] += b[1];
  a[2] += b[2];
  return a;
}
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Wrap a coordinate into the centered periodic box [-box/2, box/2).
inline double wrap_coord(double x, double box) {
  double y = std::remainder(x, box);
  if (y >= 0.5 * box) y -= box;  // remainder may return exactly +box/2
  return y;
}

inline Vec3 wrap_point(const Vec3& x, double box) {
  return {wrap_coord(x[0], box), wrap_coord(x[1], box), wrap_coord(x[2], box)};
}

// Minimum-image displacement a - b on the torus of period box.
inline Vec3 min_image(const Vec3& a, const Vec3& b, double box) {
  return wrap_point(a - b, box);
}

}  // namespace sipf
