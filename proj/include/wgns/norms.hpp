#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "wgns/dofs.hpp"
#include "wgns/forms.hpp"
#include "wgns/quadrature.hpp"

namespace wgns {

// L2 norm of the interior stress component (all four tensor entries).
inline double stress_interior_l2(const PolygonalMesh& mesh, const DofMap& dm,
                                 const WGTensorField& sig) {
  double s2 = 0.0;
  for (int c = 0; c < dm.n_cells; ++c) {
    const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), 2 * dm.k);
    const Eigen::MatrixX4d v = eval_stress_interior(mesh, dm, sig, c, quad.points);
    s2 += (v.array().square().rowwise().sum() * quad.weights.array()).sum();
  }
  return std::sqrt(s2);
}

// L^p norm of the Euclidean magnitude of a piecewise polynomial vector field.
// Exact for p = 2 and p = 4 when the rule degree covers p*(k+1).
inline double velocity_lp(const PolygonalMesh& mesh, const DofMap& dm, const DGVectorField& u,
                          double p) {
  const int ex = static_cast<int>(std::ceil(p)) * (dm.k + 1) + 2;
  double s = 0.0;
  for (int c = 0; c < dm.n_cells; ++c) {
    const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), ex);
    const Eigen::MatrixX2d v = eval_velocity(mesh, dm, u, c, quad.points);
    const Eigen::ArrayXd mag2 = v.array().square().rowwise().sum();
    s += (mag2.pow(0.5 * p) * quad.weights.array()).sum();
  }
  return std::pow(s, 1.0 / p);
}

// Mesh-dependent stress norm: ||tau_0||_0^2 + stabilizer, unit weights.
inline double stress_discrete_norm(const PolygonalMesh& mesh, const DofMap& dm,
                                   const WGTensorField& sig, int exactness) {
  double s2 = 0.0;
  for (int c = 0; c < dm.n_cells; ++c) {
    const Eigen::VectorXd y = gather_local_stress(mesh, dm, c, sig);
    const Eigen::MatrixXd S = local_stabilizer(mesh, dm, c, exactness);
    s2 += y.dot(S * y);
    const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), 2 * dm.k);
    const Eigen::MatrixX4d v = eval_stress_interior(mesh, dm, sig, c, quad.points);
    s2 += (v.array().square().rowwise().sum() * quad.weights.array()).sum();
  }
  return std::sqrt(s2);
}

// Broken H1 norm of the velocity: cellwise |v|_1^2 plus h_e^{-1} times the
// squared L2 norms of the degree-k edge projections of the jumps.
inline double velocity_discrete_norm(const PolygonalMesh& mesh, const DofMap& dm,
                                     const DGVectorField& u) {
  double s2 = 0.0;
  for (int c = 0; c < dm.n_cells; ++c) {
    const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), 2 * dm.k);
    const auto grad = cell_basis(mesh, c, dm.k + 1).gradients(quad.points);
    const long o = dm.velocity_offset(c) - dm.stress_size;
    for (int w = 0; w < 2; ++w) {
      const Eigen::VectorXd coef = u.coef.segment(o + w * dm.dim_pk1, dm.dim_pk1);
      s2 += ((grad[0] * coef).array().square() * quad.weights.array()).sum();
      s2 += ((grad[1] * coef).array().square() * quad.weights.array()).sum();
    }
  }
  for (int e = 0; e < dm.n_edges; ++e) {
    const auto& ed = mesh.edges[static_cast<std::size_t>(e)];
    const EdgeQuadratureRule quad =
        edge_quadrature(mesh.edge_endpoint(e, 0), mesh.edge_endpoint(e, 1), 2 * (dm.k + 1));
    const EdgeBasis eb = edge_basis(mesh, e, dm.k);
    const Eigen::MatrixXd lvals = eb.values(quad.param);
    const Eigen::MatrixX2d jump = eval_velocity_jump(mesh, dm, u, e, quad.points);
    for (int w = 0; w < 2; ++w) {
      Eigen::VectorXd mom = lvals.transpose() * quad.weights.cwiseProduct(jump.col(w));
      for (int m = 0; m <= dm.k; ++m) s2 += mom[m] * mom[m] / eb.norm2(m) / ed.length;
    }
  }
  return std::sqrt(s2);
}

}  // namespace wgns
