#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

#include "wgns/dofs.hpp"
#include "wgns/quadrature.hpp"

namespace wgns {

inline Eigen::MatrixXd cell_mass_matrix(const CellBasis& basis, const QuadratureRule& quad) {
  const Eigen::MatrixXd tab = basis.values(quad.points);
  return tab.transpose() * quad.weights.asDiagonal() * tab;
}

namespace detail {

inline Eigen::LLT<Eigen::MatrixXd> factor_mass(const Eigen::MatrixXd& mass) {
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("projection: cell mass matrix is not SPD (degenerate cell?)");
  return llt;
}

}  // namespace detail

// L2 projection onto P_degree(K) of a scalar function. `quad` must be exact
// for (2*degree) to make the Gram matrix exact; the data moments use the same
// rule, so pick its exactness from the data being projected.
template <typename F>
Eigen::VectorXd project_cell_scalar(const PolygonalMesh& mesh, int c, int degree,
                                    const QuadratureRule& quad, F&& func) {
  const CellBasis basis = cell_basis(mesh, c, degree);
  const Eigen::MatrixXd tab = basis.values(quad.points);
  Eigen::VectorXd fvals(quad.size());
  for (Eigen::Index q = 0; q < quad.size(); ++q) fvals[q] = func(Vec2(quad.points.row(q).transpose()));
  const Eigen::MatrixXd mass = tab.transpose() * quad.weights.asDiagonal() * tab;
  const Eigen::VectorXd rhs = tab.transpose() * quad.weights.cwiseProduct(fvals);
  return detail::factor_mass(mass).solve(rhs);
}

// Legendre projection of a scalar function onto P_degree(e); diagonal Gram.
template <typename F>
Eigen::VectorXd project_edge_scalar(const PolygonalMesh& mesh, int e, int degree,
                                    const EdgeQuadratureRule& quad, F&& func) {
  const EdgeBasis basis = edge_basis(mesh, e, degree);
  const Eigen::MatrixXd tab = basis.values(quad.param);
  Eigen::VectorXd fvals(quad.size());
  for (Eigen::Index q = 0; q < quad.size(); ++q) fvals[q] = func(Vec2(quad.points.row(q).transpose()));
  Eigen::VectorXd coef = tab.transpose() * quad.weights.cwiseProduct(fvals);
  for (int m = 0; m <= degree; ++m) coef[m] /= basis.norm2(m);
  return coef;
}

// Projection of a vector field onto the piecewise P_{k+1} velocity space.
template <typename F>
DGVectorField project_velocity(const PolygonalMesh& mesh, const DofMap& dm, F&& func,
                               int exactness) {
  DGVectorField u;
  u.coef.resize(dm.velocity_size);
  for (int c = 0; c < dm.n_cells; ++c) {
    const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), exactness);
    for (int comp = 0; comp < 2; ++comp) {
      const Eigen::VectorXd coef = project_cell_scalar(
          mesh, c, dm.k + 1, quad, [&](const Vec2& x) { return func(x)[comp]; });
      u.coef.segment(dm.velocity_offset(c) - dm.stress_size + comp * dm.dim_pk1, dm.dim_pk1) =
          coef;
    }
  }
  return u;
}

// Weak interpolant of a smooth tensor field: componentwise L2 projection onto
// P_k(K) in cell interiors and Legendre projection of sigma * n_e onto
// P_k(e)^2 on edges (n_e the stored edge normal).
template <typename F>
WGTensorField project_stress(const PolygonalMesh& mesh, const DofMap& dm, F&& func,
                             int exactness) {
  WGTensorField sig;
  sig.coef.resize(dm.stress_size);
  for (int c = 0; c < dm.n_cells; ++c) {
    const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), exactness);
    const long o = dm.stress_interior_offset(c);
    for (int comp = 0; comp < 4; ++comp) {
      const Eigen::VectorXd coef =
          project_cell_scalar(mesh, c, dm.k, quad,
                              [&](const Vec2& x) { return func(x)(comp >> 1, comp & 1); });
      sig.coef.segment(o + comp * dm.dim_pk, dm.dim_pk) = coef;
    }
  }
  for (int e = 0; e < dm.n_edges; ++e) {
    const auto& ed = mesh.edges[static_cast<std::size_t>(e)];
    const EdgeQuadratureRule quad =
        edge_quadrature(mesh.edge_endpoint(e, 0), mesh.edge_endpoint(e, 1), exactness);
    const long o = dm.stress_edge_offset(e);
    for (int comp = 0; comp < 2; ++comp) {
      const Eigen::VectorXd coef = project_edge_scalar(
          mesh, e, dm.k, quad,
          [&](const Vec2& x) { return (func(x) * ed.normal)[comp]; });
      sig.coef.segment(o + comp * (dm.k + 1), dm.k + 1) = coef;
    }
  }
  return sig;
}

}  // namespace wgns
