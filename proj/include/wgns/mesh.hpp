#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wgns/geometry.hpp"

namespace wgns {

// Marker for the missing neighbor of a boundary edge.
inline constexpr int kNoCell = -1;

// Conforming polygonal mesh of a two-dimensional domain. Cells are simple
// polygons listed counterclockwise. Every edge stores a fixed unit normal:
// for an interior edge it points from edges[e].left into edges[e].right with
// left < right; for a boundary edge it points out of the domain. Jumps and
// edge unknowns are always interpreted relative to that normal.
struct PolygonalMesh {
  struct Edge {
    int v0 = 0, v1 = 0;       // traversal v0 -> v1 is CCW for the `left` cell
    int left = kNoCell;       // cell the normal points out of
    int right = kNoCell;      // kNoCell on the boundary
    Vec2 normal = Vec2::Zero();
    Vec2 midpoint = Vec2::Zero();
    double length = 0.0;

    bool boundary() const { return right == kNoCell; }
  };

  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cells;  // CCW vertex loops
  std::vector<Edge> edges;

  // Per cell, edge ids aligned with the vertex loop (side i joins vertex i to
  // i+1) and the sign n_e . n_outward on that side (+1 iff the cell is `left`).
  std::vector<std::vector<int>> cell_edges;
  std::vector<std::vector<int>> cell_edge_signs;

  std::vector<double> cell_areas;
  std::vector<Vec2> cell_centroids;
  std::vector<double> cell_diameters;

  double mesh_size = 0.0;    // max cell diameter
  double domain_area = 0.0;  // sum of cell areas

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  std::vector<Vec2> cell_vertex_coords(int c) const {
    std::vector<Vec2> v;
    v.reserve(cells[static_cast<std::size_t>(c)].size());
    for (int id : cells[static_cast<std::size_t>(c)]) v.push_back(vertices[static_cast<std::size_t>(id)]);
    return v;
  }

  Vec2 edge_endpoint(int e, int which) const {
    const Edge& ed = edges[static_cast<std::size_t>(e)];
    return vertices[static_cast<std::size_t>(which == 0 ? ed.v0 : ed.v1)];
  }
};

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

enum class MeshFamilyKind { Triangular, Hexagonal, NonConvex, File };

// A refinement family: `generate_mesh(family, level)` produces meshes whose
// size roughly halves per level. File-backed families have a single level.
struct MeshFamily {
  MeshFamilyKind kind = MeshFamilyKind::Triangular;
  Rect rect;
  std::string path;  // only for File
};

namespace detail {

inline void fail_mesh(const std::string& what) { throw std::runtime_error("mesh: " + what); }

inline bool segments_properly_intersect(const Vec2& a, const Vec2& b, const Vec2& c,
                                        const Vec2& d) {
  const double d1 = cross2(b - a, c - a);
  const double d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c);
  const double d4 = cross2(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace detail

// Builds connectivity and geometry from raw vertex/cell lists and validates:
// CCW simple cells, conforming edges (an interior edge is traversed once in
// each direction), and agreement between the cell area sum and the area
// enclosed by the boundary loop.
inline PolygonalMesh build_mesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells) {
  PolygonalMesh m;
  m.vertices = std::move(vertices);
  m.cells = std::move(cells);
  const int nv = static_cast<int>(m.vertices.size());
  if (m.cells.empty()) detail::fail_mesh("no cells");

  m.cell_edges.resize(m.cells.size());
  m.cell_edge_signs.resize(m.cells.size());
  m.cell_areas.resize(m.cells.size());
  m.cell_centroids.resize(m.cells.size());
  m.cell_diameters.resize(m.cells.size());

  // (min,max) vertex pair -> edge id
  std::map<std::pair<int, int>, int> edge_of;

  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const auto& loop = m.cells[c];
    const std::size_t n = loop.size();
    if (n < 3) detail::fail_mesh("cell " + std::to_string(c) + " has fewer than 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
      if (loop[i] < 0 || loop[i] >= nv)
        detail::fail_mesh("cell " + std::to_string(c) + " references vertex " +
                          std::to_string(loop[i]) + " out of range");
      for (std::size_t j = i + 1; j < n; ++j)
        if (loop[i] == loop[j])
          detail::fail_mesh("cell " + std::to_string(c) + " repeats vertex " +
                            std::to_string(loop[i]));
    }

    const auto coords = m.cell_vertex_coords(static_cast<int>(c));
    const double area = polygon_signed_area(coords);
    if (!(area > 0.0))
      detail::fail_mesh("cell " + std::to_string(c) +
                        " is not counterclockwise or has nonpositive area");
    // Simplicity: no two non-adjacent sides may cross.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        if (detail::segments_properly_intersect(coords[i], coords[(i + 1) % n], coords[j],
                                                coords[(j + 1) % n]))
          detail::fail_mesh("cell " + std::to_string(c) + " is not a simple polygon");
      }

    m.cell_areas[c] = area;
    m.cell_centroids[c] = polygon_centroid(coords);
    m.cell_diameters[c] = polygon_diameter(coords);

    m.cell_edges[c].resize(n);
    m.cell_edge_signs[c].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % n];
      const auto key = std::minmax(a, b);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        PolygonalMesh::Edge e;
        e.v0 = a;
        e.v1 = b;
        e.left = static_cast<int>(c);
        const int id = static_cast<int>(m.edges.size());
        m.edges.push_back(e);
        edge_of.emplace(key, id);
        m.cell_edges[c][i] = id;
      } else {
        PolygonalMesh::Edge& e = m.edges[static_cast<std::size_t>(it->second)];
        if (e.right != kNoCell)
          detail::fail_mesh("edge between vertices " + std::to_string(key.first) + " and " +
                            std::to_string(key.second) + " belongs to more than two cells");
        if (!(e.v0 == b && e.v1 == a))
          detail::fail_mesh("cells " + std::to_string(e.left) + " and " + std::to_string(c) +
                            " traverse a shared edge in the same direction");
        e.right = static_cast<int>(c);
        m.cell_edges[c][i] = it->second;
      }
    }
  }

  // Normal points out of `left`; keep left < right for interior edges.
  for (auto& e : m.edges) {
    if (e.right != kNoCell && e.right < e.left) {
      std::swap(e.left, e.right);
      std::swap(e.v0, e.v1);
    }
    const Vec2 a = m.vertices[static_cast<std::size_t>(e.v0)];
    const Vec2 b = m.vertices[static_cast<std::size_t>(e.v1)];
    const Vec2 t = b - a;
    e.length = t.norm();
    if (!(e.length > 0.0)) detail::fail_mesh("zero-length edge");
    e.normal = Vec2(t.y(), -t.x()) / e.length;
    e.midpoint = 0.5 * (a + b);
  }
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const auto& loop = m.cells[c];
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int id = m.cell_edges[c][i];
      m.cell_edge_signs[c][i] = (m.edges[static_cast<std::size_t>(id)].left == static_cast<int>(c)) ? 1 : -1;
    }
  }

  m.domain_area = 0.0;
  for (double a : m.cell_areas) m.domain_area += a;
  m.mesh_size = *std::max_element(m.cell_diameters.begin(), m.cell_diameters.end());

  // The boundary loop, traversed with the domain on its left, must enclose
  // the same area as the cell sum; catches overlaps and gaps.
  double boundary_area = 0.0;
  for (const auto& e : m.edges)
    if (e.boundary())
      boundary_area += 0.5 * cross2(m.vertices[static_cast<std::size_t>(e.v0)],
                                    m.vertices[static_cast<std::size_t>(e.v1)]);
  if (std::abs(boundary_area - m.domain_area) > 1e-12 * m.domain_area)
    detail::fail_mesh("cell areas are inconsistent with the boundary loop (overlap or gap)");

  return m;
}

namespace detail {

struct LatticePoint {
  std::int64_t p = 0, q = 0;
  friend bool operator==(const LatticePoint& a, const LatticePoint& b) {
    return a.p == b.p && a.q == b.q;
  }
  friend bool operator<(const LatticePoint& a, const LatticePoint& b) {
    return a.p != b.p ? a.p < b.p : a.q < b.q;
  }
};

// Sutherland-Hodgman against an axis-aligned half-plane in integer lattice
// coordinates. All intersections produced by the honeycomb construction are
// lattice points; the division below is exact (guarded by the modulo check).
// `sel` reads the clipped coordinate, `oth` the free one, `make(sel, oth)`
// rebuilds a point.
template <typename Sel, typename Oth, typename MakePoint>
inline std::vector<LatticePoint> clip_halfplane(const std::vector<LatticePoint>& poly,
                                                std::int64_t bound, int keep_sign, Sel sel,
                                                Oth oth, MakePoint make) {
  std::vector<LatticePoint> out;
  const std::size_t n = poly.size();
  auto inside = [&](const LatticePoint& pt) {
    return keep_sign > 0 ? sel(pt) >= bound : sel(pt) <= bound;
  };
  auto intersect = [&](const LatticePoint& s, const LatticePoint& e) {
    const std::int64_t c1 = sel(s), c2 = sel(e);
    const std::int64_t num = oth(s) * (c2 - bound) + oth(e) * (bound - c1);
    const std::int64_t den = c2 - c1;
    if (den == 0 || num % den != 0) fail_mesh("hexagonal clip left the lattice");
    return make(bound, num / den);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const LatticePoint& s = poly[i];
    const LatticePoint& e = poly[(i + 1) % n];
    if (inside(e)) {
      if (!inside(s)) out.push_back(intersect(s, e));
      out.push_back(e);
    } else if (inside(s)) {
      out.push_back(intersect(s, e));
    }
  }
  return out;
}

inline std::vector<LatticePoint> dedup_consecutive(std::vector<LatticePoint> poly) {
  std::vector<LatticePoint> out;
  for (const auto& pt : poly)
    if (out.empty() || !(out.back() == pt)) out.push_back(pt);
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

inline std::int64_t lattice_area2(const std::vector<LatticePoint>& poly) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    s += a.p * b.q - b.p * a.q;
  }
  return s;
}

inline int cells_per_side(int level) {
  if (level < 0) fail_mesh("negative refinement level");
  if (level > 10) fail_mesh("refinement level too large");
  return 4 << level;
}

}  // namespace detail

// n x n grid of squares, each split along the up diagonal. h = sqrt(2)/n on
// the unit square, halving exactly per level.
inline PolygonalMesh generate_triangular(int level, const Rect& r) {
  const int n = detail::cells_per_side(level);
  if (!(r.width() > 0.0 && r.height() > 0.0)) detail::fail_mesh("degenerate rectangle");
  std::vector<Vec2> verts;
  verts.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.emplace_back(r.x0 + r.width() * i / n, r.y0 + r.height() * j / n);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  return build_mesh(std::move(verts), std::move(cells));
}

// Honeycomb clipped to the rectangle. The hexagon side is chosen so that an
// integer number of half-cells fits each direction exactly (no boundary
// slivers, at the price of a few percent of anisotropy); the level-to-size
// rule tracks the geometric sequence 0.2 * (5/33)^(level/3). Row counts are
// advanced by an integer recurrence clamped so consecutive sizes always
// shrink by a factor in [0.45, 0.55], which plain rounding does not ensure.
inline PolygonalMesh generate_hexagonal(int level, const Rect& r) {
  detail::cells_per_side(level);  // range check
  if (!(r.width() > 0.0 && r.height() > 0.0)) detail::fail_mesh("degenerate rectangle");
  const double base = std::min(r.width(), r.height());
  const double grow = std::pow(33.0 / 5.0, 1.0 / 3.0);
  std::int64_t ny = std::max<std::int64_t>(1, std::llround(r.height() / (0.15 * base)));
  for (int l = 0; l < level; ++l) {
    const auto lo = static_cast<std::int64_t>(std::ceil(static_cast<double>(ny) / 0.55));
    const auto hi = std::max(lo, static_cast<std::int64_t>(std::floor(static_cast<double>(ny) / 0.45)));
    ny = std::clamp(static_cast<std::int64_t>(std::llround(static_cast<double>(ny) * grow)), lo,
                    hi);
  }
  const double s = r.height() / (1.5 * static_cast<double>(ny));
  const std::int64_t nx =
      std::max<std::int64_t>(1, std::llround(r.width() / (std::sqrt(3.0) * s)));
  const double a = r.width() / (2.0 * static_cast<double>(nx));

  // Lattice: x = x0 + a*p with p in [0, 2*nx], y = y0 + (s/2)*q with q in [0, 3*ny].
  const std::int64_t pmax = 2 * nx, qmax = 3 * ny;
  std::map<detail::LatticePoint, int> vertex_id;
  std::vector<Vec2> verts;
  std::vector<std::vector<int>> cells;

  auto get_p = [](const detail::LatticePoint& pt) { return pt.p; };
  auto get_q = [](const detail::LatticePoint& pt) { return pt.q; };
  auto make_pq = [](std::int64_t p, std::int64_t q) { return detail::LatticePoint{p, q}; };
  auto make_qp = [](std::int64_t q, std::int64_t p) { return detail::LatticePoint{p, q}; };

  for (std::int64_t j = 0; j <= ny; ++j) {
    const std::int64_t qc = 3 * j;
    const std::int64_t i_end = (j % 2 == 0) ? nx : nx - 1;
    for (std::int64_t i = 0; i <= i_end; ++i) {
      const std::int64_t pc = (j % 2 == 0) ? 2 * i : 2 * i + 1;
      std::vector<detail::LatticePoint> poly = {{pc, qc + 2}, {pc - 1, qc + 1}, {pc - 1, qc - 1},
                                                {pc, qc - 2}, {pc + 1, qc - 1}, {pc + 1, qc + 1}};
      poly = detail::clip_halfplane(poly, 0, +1, get_p, get_q, make_pq);
      poly = detail::clip_halfplane(poly, pmax, -1, get_p, get_q, make_pq);
      poly = detail::clip_halfplane(poly, 0, +1, get_q, get_p, make_qp);
      poly = detail::clip_halfplane(poly, qmax, -1, get_q, get_p, make_qp);
      poly = detail::dedup_consecutive(poly);
      if (poly.size() < 3 || detail::lattice_area2(poly) <= 0) continue;
      std::vector<int> loop;
      loop.reserve(poly.size());
      for (const auto& pt : poly) {
        auto it = vertex_id.find(pt);
        if (it == vertex_id.end()) {
          const int id = static_cast<int>(verts.size());
          verts.emplace_back(r.x0 + a * static_cast<double>(pt.p),
                             r.y0 + 0.5 * s * static_cast<double>(pt.q));
          it = vertex_id.emplace(pt, id).first;
        }
        loop.push_back(it->second);
      }
      cells.push_back(std::move(loop));
    }
  }
  return build_mesh(std::move(verts), std::move(cells));
}

// n x n grid of squares, each split into two non-convex hexagons by the
// zig-zag (0,1/2) -> (1/3,1/2+a) -> (2/3,1/2-a) -> (1,1/2), a = 1/10, in
// square-local coordinates. Both halves are star-shaped with respect to
// their centroids; larger kinks (a >= 0.15) would break that.
inline PolygonalMesh generate_nonconvex(int level, const Rect& r) {
  const int n = detail::cells_per_side(level);
  if (!(r.width() > 0.0 && r.height() > 0.0)) detail::fail_mesh("degenerate rectangle");

  // Square-local template on a lattice of 1/30ths.
  static constexpr std::array<std::array<int, 2>, 6> kLower = {
      {{0, 0}, {30, 0}, {30, 15}, {20, 12}, {10, 18}, {0, 15}}};
  static constexpr std::array<std::array<int, 2>, 6> kUpper = {
      {{0, 15}, {10, 18}, {20, 12}, {30, 15}, {30, 30}, {0, 30}}};

  std::map<detail::LatticePoint, int> vertex_id;
  std::vector<Vec2> verts;
  std::vector<std::vector<int>> cells;
  const double denom = 30.0 * n;

  auto add_cell = [&](int i, int j, const std::array<std::array<int, 2>, 6>& tpl) {
    std::vector<int> loop;
    loop.reserve(6);
    for (const auto& d : tpl) {
      const detail::LatticePoint pt{30LL * i + d[0], 30LL * j + d[1]};
      auto it = vertex_id.find(pt);
      if (it == vertex_id.end()) {
        const int id = static_cast<int>(verts.size());
        verts.emplace_back(r.x0 + r.width() * static_cast<double>(pt.p) / denom,
                           r.y0 + r.height() * static_cast<double>(pt.q) / denom);
        it = vertex_id.emplace(pt, id).first;
      }
      loop.push_back(it->second);
    }
    cells.push_back(std::move(loop));
  };

  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      add_cell(i, j, kLower);
      add_cell(i, j, kUpper);
    }
  return build_mesh(std::move(verts), std::move(cells));
}

}  // namespace wgns
