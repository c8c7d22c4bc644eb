#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace wgns {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Signed area, positive for counterclockwise vertex order.
inline double polygon_signed_area(const std::vector<Vec2>& v) {
  double s = 0.0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) s += cross2(v[i], v[(i + 1) % n]);
  return 0.5 * s;
}

// Area centroid (not the vertex average).
inline Vec2 polygon_centroid(const std::vector<Vec2>& v) {
  const std::size_t n = v.size();
  double a = 0.0;
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % n];
    const double w = cross2(p, q);
    a += w;
    c += w * (p + q);
  }
  return c / (3.0 * a);
}

inline double polygon_diameter(const std::vector<Vec2>& v) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      d2 = std::max(d2, (v[i] - v[j]).squaredNorm());
  return std::sqrt(d2);
}

// Trace-free part: tau - (tr tau / 2) I.
inline Mat2 deviator(const Mat2& t) {
  Mat2 d = t;
  const double half_tr = 0.5 * (t(0, 0) + t(1, 1));
  d(0, 0) -= half_tr;
  d(1, 1) -= half_tr;
  return d;
}

inline double ddot(const Mat2& a, const Mat2& b) { return (a.array() * b.array()).sum(); }

}  // namespace wgns
