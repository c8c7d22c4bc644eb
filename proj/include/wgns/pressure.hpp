#pragma once

#include <Eigen/Dense>

#include "wgns/dofs.hpp"
#include "wgns/projection.hpp"

namespace wgns {

// Piecewise polynomial pressure, one coefficient row per cell in the scaled
// monomial basis of `degree`.
struct PressureField {
  int degree = 0;
  Eigen::MatrixXd coef;  // n_cells x dim P_degree

  Eigen::VectorXd values(const PolygonalMesh& mesh, int c,
                         const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 2>>& pts)
      const {
    return cell_basis(mesh, c, degree).values(pts) * coef.row(c).transpose();
  }
};

// Recovers the pressure from the stress trace,
//   p_h = -1/2 (tr sigma_0h + tr(u_h tensor u_h)) - r_h,
//   r_h = -1/(2|O|) int |u_h|^2,
// an exact piecewise polynomial of degree 2(k+1) (the quadratic velocity term
// dominates). The convective parts are dropped in Stokes mode. Zero mean is
// inherited from the mean-free stress trace, not enforced separately.
inline PressureField postprocess_pressure(const PolygonalMesh& mesh, const DofMap& dm,
                                          const WGTensorField& sigma, const DGVectorField& u,
                                          bool convective) {
  PressureField ph;
  ph.degree = convective ? 2 * (dm.k + 1) : dm.k;
  const int dim = poly_space_dim(ph.degree);
  ph.coef.resize(dm.n_cells, dim);

  double r_h = 0.0;
  if (convective) {
    double energy = 0.0;
    for (int c = 0; c < dm.n_cells; ++c) {
      const QuadratureRule quad =
          cell_quadrature(mesh.cell_vertex_coords(c), 2 * (dm.k + 1));
      const Eigen::MatrixX2d uv = eval_velocity(mesh, dm, u, c, quad.points);
      energy += (uv.array().square().rowwise().sum() * quad.weights.array()).sum();
    }
    r_h = -energy / (2.0 * mesh.domain_area);
  }

  for (int c = 0; c < dm.n_cells; ++c) {
    // Projection at doubled exactness reproduces the polynomial exactly.
    const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), 2 * ph.degree + 2);
    Eigen::MatrixX4d sig = eval_stress_interior(mesh, dm, sigma, c, quad.points);
    Eigen::VectorXd pvals = -0.5 * (sig.col(0) + sig.col(3));
    if (convective) {
      const Eigen::MatrixX2d uv = eval_velocity(mesh, dm, u, c, quad.points);
      pvals -= 0.5 * uv.array().square().rowwise().sum().matrix();
      pvals.array() -= r_h;
    }
    const CellBasis basis = cell_basis(mesh, c, ph.degree);
    const Eigen::MatrixXd tab = basis.values(quad.points);
    const Eigen::MatrixXd mass = tab.transpose() * quad.weights.asDiagonal() * tab;
    const Eigen::VectorXd rhs = tab.transpose() * quad.weights.cwiseProduct(pvals);
    ph.coef.row(c) = detail::factor_mass(mass).solve(rhs).transpose();
  }
  return ph;
}

inline double pressure_integral(const PolygonalMesh& mesh, const PressureField& ph) {
  double s = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), ph.degree);
    s += quad.weights.dot(ph.values(mesh, c, quad.points));
  }
  return s;
}

}  // namespace wgns
