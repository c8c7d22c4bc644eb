#pragma once

#include <Eigen/Dense>
#include <functional>

#include "wgns/dofs.hpp"
#include "wgns/quadrature.hpp"
#include "wgns/weak_divergence.hpp"

namespace wgns {

struct ProblemConfig {
  double nu = 0.1;             // viscosity
  double rho = 1.0;            // stabilization weight
  Eigen::VectorXd rho_per_cell;  // optional per-cell override (size n_cells)
  int k = 0;                   // polynomial order of the stress space
  bool convection = true;      // false: drop the trilinear term (Stokes)
  int form_exactness = -1;     // quadrature degree for bilinear forms
  int data_exactness = -1;     // quadrature degree for data terms and norms

  int form_ex() const { return form_exactness >= 0 ? form_exactness : 2 * k + 4; }
  int data_ex() const { return data_exactness >= 0 ? data_exactness : 2 * k + 6; }
  double cell_rho(int c) const {
    return rho_per_cell.size() > 0 ? rho_per_cell[c] : rho;
  }
};

// Body force and Dirichlet velocity data.
struct ProblemData {
  std::function<Vec2(const Vec2&)> f;
  std::function<Vec2(const Vec2&)> g;
};

// int_boundary g . n; must vanish for a divergence-free velocity field.
inline double boundary_flux(const PolygonalMesh& mesh, const std::function<Vec2(const Vec2&)>& g,
                            int exactness) {
  double flux = 0.0;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const auto& ed = mesh.edges[static_cast<std::size_t>(e)];
    if (!ed.boundary()) continue;
    const EdgeQuadratureRule quad =
        edge_quadrature(mesh.edge_endpoint(e, 0), mesh.edge_endpoint(e, 1), exactness);
    for (Eigen::Index q = 0; q < quad.size(); ++q)
      flux += quad.weights[q] * g(Vec2(quad.points.row(q).transpose())).dot(ed.normal);
  }
  return flux;
}

// Stabilizer h_K <(tau_0 - tau_b) n, (zeta_0 - zeta_b) n>_{dK}, unit weight.
// Symmetric positive semidefinite; rows/cols in local stress order.
inline Eigen::MatrixXd local_stabilizer(const PolygonalMesh& mesh, const DofMap& dm, int c,
                                        int exactness) {
  const auto& sides = mesh.cell_edges[static_cast<std::size_t>(c)];
  const int n_sides = static_cast<int>(sides.size());
  const int nloc = dm.stress_cell_block() + n_sides * dm.stress_edge_block();
  const CellBasis bk = cell_basis(mesh, c, dm.k);
  const double hK = mesh.cell_diameters[static_cast<std::size_t>(c)];

  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nloc, nloc);
  for (int side = 0; side < n_sides; ++side) {
    const int e = sides[static_cast<std::size_t>(side)];
    const double sgn = mesh.cell_edge_signs[static_cast<std::size_t>(c)][static_cast<std::size_t>(side)];
    const auto& ed = mesh.edges[static_cast<std::size_t>(e)];
    const Vec2 n_out = sgn * ed.normal;
    const EdgeQuadratureRule quad =
        edge_quadrature(mesh.edge_endpoint(e, 0), mesh.edge_endpoint(e, 1), exactness);
    const Eigen::MatrixXd kvals = bk.values(quad.points);
    const Eigen::MatrixXd lvals = edge_basis(mesh, e, dm.k).values(quad.param);
    const Eigen::Index np = quad.size();

    // Trace difference (tau_0 - tau_b) n_out, one table per vector component.
    std::array<Eigen::MatrixXd, 2> tr{Eigen::MatrixXd::Zero(np, nloc),
                                      Eigen::MatrixXd::Zero(np, nloc)};
    for (int comp = 0; comp < 4; ++comp) {
      const int p = comp >> 1, q = comp & 1;
      tr[p].middleCols(comp * dm.dim_pk, dm.dim_pk) = n_out[q] * kvals;
    }
    const int col0 = dm.stress_cell_block() + side * dm.stress_edge_block();
    for (int v = 0; v < 2; ++v)
      tr[v].middleCols(col0 + v * (dm.k + 1), dm.k + 1) = -sgn * lvals;

    for (int v = 0; v < 2; ++v)
      S += hK * (tr[v].transpose() * quad.weights.asDiagonal() * tr[v]);
  }
  return S;
}

// A_h restricted to the cell: (1/nu)(tau_0^d, zeta_0^d)_K + rho_K * stabilizer.
inline Eigen::MatrixXd local_A(const PolygonalMesh& mesh, const DofMap& dm, int c, double nu,
                               double rho_c, int exactness) {
  const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), exactness);
  const Eigen::MatrixXd mass = cell_mass_matrix(cell_basis(mesh, c, dm.k), quad);

  Eigen::MatrixXd A = rho_c * local_stabilizer(mesh, dm, c, exactness);
  // E_c^d : E_c'^d pairing of the four tensor components.
  Eigen::Matrix4d K;
  K << 0.5, 0, 0, -0.5,
       0, 1, 0, 0,
       0, 0, 1, 0,
       -0.5, 0, 0, 0.5;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (K(a, b) != 0.0)
        A.block(a * dm.dim_pk, b * dm.dim_pk, dm.dim_pk, dm.dim_pk) += (K(a, b) / nu) * mass;
  return A;
}

// Divergence form element matrix: rows velocity test dofs, cols stress dofs.
inline Eigen::MatrixXd local_B(const PolygonalMesh& mesh, const DofMap& dm, int c,
                               int exactness) {
  return stress_divergence_moments(mesh, dm, c, exactness);
}

// Convection coupling (1/nu)((z tensor v)^d, tau_0)_K for a frozen transport
// field z. Rows: interior stress dofs only; cols: velocity dofs.
inline Eigen::MatrixXd local_C(const PolygonalMesh& mesh, const DofMap& dm, int c, double nu,
                               const DGVectorField& z, int exactness) {
  const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), exactness);
  const CellBasis bk = cell_basis(mesh, c, dm.k);
  const CellBasis bk1 = cell_basis(mesh, c, dm.k + 1);
  const Eigen::MatrixXd val_k = bk.values(quad.points);
  const Eigen::MatrixXd val_k1 = bk1.values(quad.points);
  const Eigen::MatrixX2d zval = eval_velocity(mesh, dm, z, c, quad.points);

  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(dm.stress_cell_block(), dm.velocity_block());
  // [(z tensor phi)^d]_{pq} = z_p phi_q - 0.5 delta_pq (z . phi)
  for (int comp = 0; comp < 4; ++comp) {
    const int p = comp >> 1, q = comp & 1;
    for (int w = 0; w < 2; ++w) {
      Eigen::VectorXd factor = Eigen::VectorXd::Zero(quad.size());
      if (q == w) factor += zval.col(p);
      if (p == q) factor -= 0.5 * zval.col(w);
      if (factor.isZero(0.0)) continue;
      C.block(comp * dm.dim_pk, w * dm.dim_pk1, dm.dim_pk, dm.dim_pk1) +=
          (1.0 / nu) *
          (val_k.transpose() * (quad.weights.cwiseProduct(factor)).asDiagonal() * val_k1);
    }
  }
  return C;
}

// Boundary functional <g, tau_b>_e on a boundary edge (its normal points out
// of the domain, so the edge unknown pairs with g directly).
inline Eigen::VectorXd local_G(const PolygonalMesh& mesh, const DofMap& dm, int e,
                               const std::function<Vec2(const Vec2&)>& g, int exactness) {
  const EdgeQuadratureRule quad =
      edge_quadrature(mesh.edge_endpoint(e, 0), mesh.edge_endpoint(e, 1), exactness);
  const Eigen::MatrixXd lvals = edge_basis(mesh, e, dm.k).values(quad.param);
  Eigen::MatrixX2d gval(quad.size(), 2);
  for (Eigen::Index q = 0; q < quad.size(); ++q)
    gval.row(q) = g(Vec2(quad.points.row(q).transpose())).transpose();
  Eigen::VectorXd G(dm.stress_edge_block());
  for (int v = 0; v < 2; ++v)
    G.segment(v * (dm.k + 1), dm.k + 1) =
        lvals.transpose() * quad.weights.cwiseProduct(gval.col(v));
  return G;
}

// Load functional -(f, v)_K against the velocity basis.
inline Eigen::VectorXd local_F(const PolygonalMesh& mesh, const DofMap& dm, int c,
                               const std::function<Vec2(const Vec2&)>& f, int exactness) {
  const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), exactness);
  const Eigen::MatrixXd val_k1 = cell_basis(mesh, c, dm.k + 1).values(quad.points);
  Eigen::MatrixX2d fval(quad.size(), 2);
  for (Eigen::Index q = 0; q < quad.size(); ++q)
    fval.row(q) = f(Vec2(quad.points.row(q).transpose())).transpose();
  Eigen::VectorXd F(dm.velocity_block());
  for (int w = 0; w < 2; ++w)
    F.segment(w * dm.dim_pk1, dm.dim_pk1) =
        -(val_k1.transpose() * quad.weights.cwiseProduct(fval.col(w)));
  return F;
}

// int_K tr(tau_0) against the interior stress dofs (xx and yy rows).
inline Eigen::VectorXd local_trace(const PolygonalMesh& mesh, const DofMap& dm, int c,
                                   int exactness) {
  const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), exactness);
  const Eigen::MatrixXd val_k = cell_basis(mesh, c, dm.k).values(quad.points);
  const Eigen::VectorXd moments = val_k.transpose() * quad.weights;
  Eigen::VectorXd t = Eigen::VectorXd::Zero(dm.stress_cell_block());
  t.segment(0, dm.dim_pk) = moments;               // xx
  t.segment(3 * dm.dim_pk, dm.dim_pk) = moments;   // yy
  return t;
}

}  // namespace wgns
