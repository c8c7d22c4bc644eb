#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "wgns/geometry.hpp"

namespace wgns {

// Point set with positive weights, exact for polynomials up to `exactness`
// (total degree on cells, one-dimensional degree on edges).
struct QuadratureRule {
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;
  Eigen::VectorXd weights;
  int exactness = 0;

  Eigen::Index size() const { return weights.size(); }
};

// Edge rules also keep the reference coordinate t in [-1,1] along the edge,
// which is what the edge polynomial basis is parameterized by.
struct EdgeQuadratureRule : QuadratureRule {
  Eigen::VectorXd param;
};

namespace detail {

struct GaussNodes {
  Eigen::VectorXd x, w;
};

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the recurrence,
// weights are mu0 * (first eigenvector component)^2.
inline GaussNodes golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& subdiag,
                               double mu0) {
  const Eigen::Index n = diag.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    J(i, i) = diag[i];
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = subdiag[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussNodes g;
  g.x = es.eigenvalues();
  g.w = mu0 * es.eigenvectors().row(0).transpose().array().square();
  return g;
}

// Gauss-Legendre on [-1,1]; n points integrate degree 2n-1 exactly.
inline const GaussNodes& gauss_legendre(int n) {
  static std::map<int, GaussNodes> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n), s(std::max(0, n - 1));
  for (int i = 1; i < n; ++i) s[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
  return cache.emplace(n, golub_welsch(d, s, 2.0)).first->second;
}

// Gauss-Jacobi with weight (1+x) on [-1,1]. Used through the Duffy map where
// the collapsed coordinate contributes a linear Jacobian factor.
inline const GaussNodes& gauss_jacobi_01(int n) {
  static std::map<int, GaussNodes> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw std::invalid_argument("gauss_jacobi_01: need n >= 1");
  Eigen::VectorXd d(n), s(std::max(0, n - 1));
  d[0] = 1.0 / 3.0;
  for (int i = 1; i < n; ++i) {
    d[i] = 1.0 / ((2.0 * i + 1.0) * (2.0 * i + 3.0));
    s[i - 1] = std::sqrt(i * (i + 1.0)) / (2.0 * i + 1.0);
  }
  return cache.emplace(n, golub_welsch(d, s, 2.0)).first->second;
}

inline int points_for_degree(int exactness) { return exactness / 2 + 1; }

}  // namespace detail

// Conical-product rule on the triangle (a,b,c): the square [0,1]^2 is mapped by
// P(u,v) = a + u((1-v)(b-a) + v(c-a)) with Jacobian 2|T| u; the factor u goes
// into a Gauss-Jacobi rule so the product rule stays exact and positive.
inline QuadratureRule triangle_quadrature(const Vec2& a, const Vec2& b, const Vec2& c,
                                          int exactness) {
  const int n = detail::points_for_degree(std::max(exactness, 0));
  const auto& gj = detail::gauss_jacobi_01(n);
  const auto& gl = detail::gauss_legendre(n);
  const double area2 = cross2(b - a, c - a);  // 2 * signed area

  QuadratureRule rule;
  rule.exactness = exactness;
  rule.points.resize(n * n, 2);
  rule.weights.resize(n * n);
  Eigen::Index q = 0;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (1.0 + gj.x[i]);
    const double wu = 0.25 * gj.w[i];  // weight for int_0^1 u g(u) du
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (1.0 + gl.x[j]);
      const double wv = 0.5 * gl.w[j];
      rule.points.row(q) = (a + u * ((1.0 - v) * (b - a) + v * (c - a))).transpose();
      rule.weights[q] = area2 * wu * wv;
      ++q;
    }
  }
  return rule;
}

namespace detail {

inline bool point_in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  const double d1 = cross2(b - a, p - a);
  const double d2 = cross2(c - b, p - b);
  const double d3 = cross2(a - c, p - c);
  return d1 > 0 && d2 > 0 && d3 > 0;
}

// Ear clipping for simple CCW polygons. Only used when the centroid fan fails,
// i.e. for cells that are not star-shaped with respect to their centroid.
inline std::vector<std::array<Vec2, 3>> ear_clip(std::vector<Vec2> poly) {
  std::vector<std::array<Vec2, 3>> tris;
  while (poly.size() > 3) {
    const std::size_t n = poly.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& prev = poly[(i + n - 1) % n];
      const Vec2& cur = poly[i];
      const Vec2& next = poly[(i + 1) % n];
      if (cross2(cur - prev, next - cur) <= 0) continue;  // reflex corner
      bool ear = true;
      for (std::size_t j = 0; j < n && ear; ++j) {
        if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
        if (point_in_triangle(poly[j], prev, cur, next)) ear = false;
      }
      if (!ear) continue;
      tris.push_back({prev, cur, next});
      poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw std::runtime_error("ear_clip: polygon is not simple");
  }
  tris.push_back({poly[0], poly[1], poly[2]});
  return tris;
}

}  // namespace detail

// Rule over a simple CCW polygon: fan triangulation from the centroid when the
// cell is star-shaped with respect to it, ear clipping otherwise.
inline QuadratureRule cell_quadrature(const std::vector<Vec2>& vertices, int exactness) {
  if (vertices.size() < 3) throw std::invalid_argument("cell_quadrature: need >= 3 vertices");

  std::vector<std::array<Vec2, 3>> tris;
  if (vertices.size() == 3) {
    tris.push_back({vertices[0], vertices[1], vertices[2]});
  } else {
    const Vec2 c = polygon_centroid(vertices);
    bool fan_ok = true;
    for (std::size_t i = 0; i < vertices.size() && fan_ok; ++i) {
      const Vec2& p = vertices[i];
      const Vec2& q = vertices[(i + 1) % vertices.size()];
      if (cross2(q - p, c - p) <= 0) fan_ok = false;  // centroid not strictly left of edge
    }
    if (fan_ok) {
      for (std::size_t i = 0; i < vertices.size(); ++i)
        tris.push_back({c, vertices[i], vertices[(i + 1) % vertices.size()]});
    } else {
      tris = detail::ear_clip(vertices);
    }
  }

  std::vector<QuadratureRule> parts;
  Eigen::Index total = 0;
  for (const auto& t : tris) {
    parts.push_back(triangle_quadrature(t[0], t[1], t[2], exactness));
    total += parts.back().size();
  }
  QuadratureRule rule;
  rule.exactness = exactness;
  rule.points.resize(total, 2);
  rule.weights.resize(total);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    rule.points.middleRows(at, p.size()) = p.points;
    rule.weights.segment(at, p.size()) = p.weights;
    at += p.size();
  }
  return rule;
}

inline EdgeQuadratureRule edge_quadrature(const Vec2& p0, const Vec2& p1, int exactness) {
  const int n = detail::points_for_degree(std::max(exactness, 0));
  const auto& gl = detail::gauss_legendre(n);
  const double len = (p1 - p0).norm();

  EdgeQuadratureRule rule;
  rule.exactness = exactness;
  rule.points.resize(n, 2);
  rule.weights.resize(n);
  rule.param.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = gl.x[i];
    rule.param[i] = t;
    rule.points.row(i) = (0.5 * (1.0 - t) * p0 + 0.5 * (1.0 + t) * p1).transpose();
    rule.weights[i] = 0.5 * len * gl.w[i];
  }
  return rule;
}

}  // namespace wgns
