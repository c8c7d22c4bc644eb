#pragma once

#include <Eigen/Dense>

#include "wgns/dofs.hpp"
#include "wgns/projection.hpp"
#include "wgns/quadrature.hpp"

namespace wgns {

// Moment matrix R of the weak divergence against the vector P_{k+1}(K) basis:
// for a weak tensor tau with local coefficients y (interior block then one
// edge block per side),
//   (div_w tau, zeta_i)_K = (R y)_i
//                        = -(tau_0, grad zeta_i)_K + sum_e s_e <tau_b, zeta_i>_e
// with s_e = n_e . n_outward on that side. Rows are component-major over the
// vector P_{k+1} basis. This is also the element matrix of the divergence
// form (tau, v) -> (div_w tau, v)_K, since v runs over the same basis.
inline Eigen::MatrixXd stress_divergence_moments(const PolygonalMesh& mesh, const DofMap& dm,
                                                 int c, int exactness) {
  const auto& sides = mesh.cell_edges[static_cast<std::size_t>(c)];
  const int n_sides = static_cast<int>(sides.size());
  const int nloc = dm.stress_cell_block() + n_sides * dm.stress_edge_block();
  const CellBasis bk = cell_basis(mesh, c, dm.k);
  const CellBasis bk1 = cell_basis(mesh, c, dm.k + 1);

  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(2 * dm.dim_pk1, nloc);

  const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), exactness);
  const Eigen::MatrixXd val_k = bk.values(quad.points);
  const auto grad_k1 = bk1.gradients(quad.points);

  // -(m_j E_{pq}, grad zeta)_K couples component (p,q) with d/dq of the test
  // component p.
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      const Eigen::MatrixXd blk =
          grad_k1[q].transpose() * quad.weights.asDiagonal() * val_k;  // (dim_pk1 x dim_pk)
      R.block(p * dm.dim_pk1, (2 * p + q) * dm.dim_pk, dm.dim_pk1, dm.dim_pk) -= blk;
    }

  for (int side = 0; side < n_sides; ++side) {
    const int e = sides[static_cast<std::size_t>(side)];
    const double sgn = mesh.cell_edge_signs[static_cast<std::size_t>(c)][static_cast<std::size_t>(side)];
    const EdgeQuadratureRule equad =
        edge_quadrature(mesh.edge_endpoint(e, 0), mesh.edge_endpoint(e, 1), exactness);
    const Eigen::MatrixXd lvals = edge_basis(mesh, e, dm.k).values(equad.param);
    const Eigen::MatrixXd k1vals = bk1.values(equad.points);
    const Eigen::MatrixXd blk =
        sgn * (k1vals.transpose() * equad.weights.asDiagonal() * lvals);  // (dim_pk1 x k+1)
    const int col0 = dm.stress_cell_block() + side * dm.stress_edge_block();
    for (int v = 0; v < 2; ++v)
      R.block(v * dm.dim_pk1, col0 + v * (dm.k + 1), dm.dim_pk1, dm.k + 1) += blk;
  }
  return R;
}

// Weak divergence as a P_{k+1}(K)^2 polynomial: coefficient matrix
// D = (M_{k+1})^{-1} R, component-major rows like the velocity layout.
inline Eigen::MatrixXd weak_divergence_matrix(const PolygonalMesh& mesh, const DofMap& dm, int c,
                                              int exactness) {
  const Eigen::MatrixXd R = stress_divergence_moments(mesh, dm, c, exactness);
  const QuadratureRule quad =
      cell_quadrature(mesh.cell_vertex_coords(c), 2 * (dm.k + 1));
  const Eigen::MatrixXd mass = cell_mass_matrix(cell_basis(mesh, c, dm.k + 1), quad);
  const auto llt = detail::factor_mass(mass);
  Eigen::MatrixXd D(R.rows(), R.cols());
  for (int v = 0; v < 2; ++v)
    D.middleRows(v * dm.dim_pk1, dm.dim_pk1) =
        llt.solve(R.middleRows(v * dm.dim_pk1, dm.dim_pk1));
  return D;
}

// Gathers the local stress coefficients of cell c in local order.
inline Eigen::VectorXd gather_local_stress(const PolygonalMesh& mesh, const DofMap& dm, int c,
                                           const WGTensorField& sig) {
  const CellDofs d = cell_dofs(mesh, dm, c);
  Eigen::VectorXd y(static_cast<Eigen::Index>(d.stress.size()));
  for (std::size_t i = 0; i < d.stress.size(); ++i)
    y[static_cast<Eigen::Index>(i)] = sig.coef[d.stress[i]];
  return y;
}

// Coefficients (component-major, P_{k+1} basis of cell c) of div_w sigma_h.
inline Eigen::VectorXd weak_divergence_coeffs(const PolygonalMesh& mesh, const DofMap& dm, int c,
                                              const WGTensorField& sig, int exactness) {
  return weak_divergence_matrix(mesh, dm, c, exactness) * gather_local_stress(mesh, dm, c, sig);
}

}  // namespace wgns
