#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wgns/basis.hpp"
#include "wgns/mesh.hpp"

namespace wgns {

// Global unknown layout for polynomial order k:
//   stress interior:  per cell, 4 tensor components x dim P_k (component-major)
//   stress edge:      per edge, 2 vector components x (k+1) Legendre modes;
//                     the edge tensor is tau_b tensor n_e with n_e the stored
//                     edge normal, so only the vector factor tau_b is stored
//   velocity:         per cell, 2 components x dim P_{k+1}
//   multiplier:       one global slot enforcing mean-free stress trace
// Tensor components are row-major: c = 0:xx 1:xy 2:yx 3:yy.
struct DofMap {
  int k = 0;
  int n_cells = 0, n_edges = 0;
  int dim_pk = 0, dim_pk1 = 0;
  long stress_interior_size = 0, stress_size = 0, velocity_size = 0, size = 0;

  DofMap() = default;
  DofMap(const PolygonalMesh& mesh, int order)
      : k(order),
        n_cells(mesh.n_cells()),
        n_edges(mesh.n_edges()),
        dim_pk(poly_space_dim(order)),
        dim_pk1(poly_space_dim(order + 1)) {
    stress_interior_size = 4L * dim_pk * n_cells;
    stress_size = stress_interior_size + 2L * (k + 1) * n_edges;
    velocity_size = 2L * dim_pk1 * n_cells;
    size = stress_size + velocity_size + 1;
  }

  long stress_interior_offset(int c) const { return 4L * dim_pk * c; }
  long stress_edge_offset(int e) const { return stress_interior_size + 2L * (k + 1) * e; }
  long velocity_offset(int c) const { return stress_size + 2L * dim_pk1 * c; }
  long multiplier_index() const { return stress_size + velocity_size; }

  int stress_cell_block() const { return 4 * dim_pk; }
  int stress_edge_block() const { return 2 * (k + 1); }
  int velocity_block() const { return 2 * dim_pk1; }
};

// Coefficients of a weak tensor (interior + edge unknowns), length stress_size.
struct WGTensorField {
  Eigen::VectorXd coef;
};

// Coefficients of a discontinuous piecewise P_{k+1} vector field, length
// velocity_size; indexed with velocity offsets shifted by -stress_size.
struct DGVectorField {
  Eigen::VectorXd coef;
};

inline CellBasis cell_basis(const PolygonalMesh& mesh, int c, int degree) {
  return CellBasis(degree, mesh.cell_centroids[static_cast<std::size_t>(c)],
                   mesh.cell_diameters[static_cast<std::size_t>(c)]);
}

inline EdgeBasis edge_basis(const PolygonalMesh& mesh, int e, int degree) {
  return EdgeBasis(degree, mesh.edges[static_cast<std::size_t>(e)].length);
}

// Global indices of one cell's stress and velocity unknowns in local order:
// interior tensor block, then one edge block per side (cell side order).
struct CellDofs {
  std::vector<long> stress;
  std::vector<long> velocity;
};

inline CellDofs cell_dofs(const PolygonalMesh& mesh, const DofMap& dm, int c) {
  CellDofs d;
  d.stress.reserve(static_cast<std::size_t>(dm.stress_cell_block()) +
                   mesh.cell_edges[static_cast<std::size_t>(c)].size() *
                       static_cast<std::size_t>(dm.stress_edge_block()));
  const long i0 = dm.stress_interior_offset(c);
  for (int i = 0; i < dm.stress_cell_block(); ++i) d.stress.push_back(i0 + i);
  for (int e : mesh.cell_edges[static_cast<std::size_t>(c)]) {
    const long e0 = dm.stress_edge_offset(e);
    for (int i = 0; i < dm.stress_edge_block(); ++i) d.stress.push_back(e0 + i);
  }
  const long v0 = dm.velocity_offset(c);
  for (int i = 0; i < dm.velocity_block(); ++i) d.velocity.push_back(v0 + i);
  return d;
}

// Interior stress values at points of cell c: one row per point, columns are
// the four tensor components xx, xy, yx, yy.
inline Eigen::MatrixX4d eval_stress_interior(
    const PolygonalMesh& mesh, const DofMap& dm, const WGTensorField& sig, int c,
    const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 2>>& pts) {
  const CellBasis basis = cell_basis(mesh, c, dm.k);
  const Eigen::MatrixXd tab = basis.values(pts);
  Eigen::MatrixX4d out(pts.rows(), 4);
  const long o = dm.stress_interior_offset(c);
  for (int comp = 0; comp < 4; ++comp)
    out.col(comp) = tab * sig.coef.segment(o + comp * dm.dim_pk, dm.dim_pk);
  return out;
}

// Edge stress vector tau_b at edge parameters t (relative to the global edge
// direction v0 -> v1); columns are the two vector components.
inline Eigen::MatrixX2d eval_stress_edge(const PolygonalMesh& mesh, const DofMap& dm,
                                         const WGTensorField& sig, int e,
                                         const Eigen::Ref<const Eigen::VectorXd>& t) {
  const EdgeBasis basis = edge_basis(mesh, e, dm.k);
  const Eigen::MatrixXd tab = basis.values(t);
  Eigen::MatrixX2d out(t.size(), 2);
  const long o = dm.stress_edge_offset(e);
  for (int comp = 0; comp < 2; ++comp)
    out.col(comp) = tab * sig.coef.segment(o + comp * (dm.k + 1), dm.k + 1);
  return out;
}

inline Eigen::MatrixX2d eval_velocity(
    const PolygonalMesh& mesh, const DofMap& dm, const DGVectorField& u, int c,
    const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 2>>& pts) {
  const CellBasis basis = cell_basis(mesh, c, dm.k + 1);
  const Eigen::MatrixXd tab = basis.values(pts);
  Eigen::MatrixX2d out(pts.rows(), 2);
  const long o = dm.velocity_offset(c) - dm.stress_size;
  for (int comp = 0; comp < 2; ++comp)
    out.col(comp) = tab * u.coef.segment(o + comp * dm.dim_pk1, dm.dim_pk1);
  return out;
}

// Jump [v] = v_left - v_right across edge e (v_left on the boundary) at
// physical points `pts` on the edge.
inline Eigen::MatrixX2d eval_velocity_jump(
    const PolygonalMesh& mesh, const DofMap& dm, const DGVectorField& u, int e,
    const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 2>>& pts) {
  const auto& ed = mesh.edges[static_cast<std::size_t>(e)];
  Eigen::MatrixX2d j = eval_velocity(mesh, dm, u, ed.left, pts);
  if (!ed.boundary()) j -= eval_velocity(mesh, dm, u, ed.right, pts);
  return j;
}

}  // namespace wgns
