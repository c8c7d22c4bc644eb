#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wgns/assembly.hpp"
#include "wgns/forms.hpp"

namespace wgns {

struct StabilityReport {
  long dofs = 0;        // full system size including the multiplier
  double beta = 0.0;    // discrete inf-sup constant of the divergence form
  double alpha = 0.0;   // coercivity of A_h on the constraint kernel
  int kernel_dim = 0;
};

// Small dense eigenvalue probes of the discrete stability constants:
//   beta^2  = min eig of (B M_H^{-1} B^T) y = lambda M_1 y
//   alpha   = min eig of (Z^T A Z) y = lambda (Z^T M_H Z) y,
// where M_H, M_1 are the Gram matrices of the mesh-dependent stress and
// velocity norms and Z spans the null space of the constraint rows [B; t^T]
// (without the trace row the constant-identity direction would sit in the
// kernel with A_h = 0 and the probe would be vacuous). Dense linear algebra:
// intended for guarded small meshes only.
inline StabilityReport stability_probe(const PolygonalMesh& mesh, const ProblemConfig& config) {
  const DofMap dm(mesh, config.k);
  const int fex = config.form_ex();
  const long S = dm.stress_size, V = dm.velocity_size;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(S, S);
  Eigen::MatrixXd MH = Eigen::MatrixXd::Zero(S, S);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(V, S);
  Eigen::VectorXd t = Eigen::VectorXd::Zero(S);

  for (int c = 0; c < dm.n_cells; ++c) {
    const CellDofs d = cell_dofs(mesh, dm, c);
    const Eigen::MatrixXd Aloc = local_A(mesh, dm, c, config.nu, config.cell_rho(c), fex);
    const Eigen::MatrixXd Sloc = local_stabilizer(mesh, dm, c, fex);
    const Eigen::MatrixXd Bloc = local_B(mesh, dm, c, fex);
    const Eigen::VectorXd tloc = local_trace(mesh, dm, c, fex);
    const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), 2 * dm.k);
    const Eigen::MatrixXd mass = cell_mass_matrix(cell_basis(mesh, c, dm.k), quad);

    const int ns = static_cast<int>(d.stress.size());
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b) {
        A(d.stress[a], d.stress[b]) += Aloc(a, b);
        MH(d.stress[a], d.stress[b]) += Sloc(a, b);
      }
    for (int comp = 0; comp < 4; ++comp)
      for (int i = 0; i < dm.dim_pk; ++i)
        for (int j = 0; j < dm.dim_pk; ++j)
          MH(d.stress[comp * dm.dim_pk + i], d.stress[comp * dm.dim_pk + j]) += mass(i, j);
    for (int a = 0; a < static_cast<int>(d.velocity.size()); ++a)
      for (int b = 0; b < ns; ++b)
        B(d.velocity[a] - dm.stress_size, d.stress[b]) += Bloc(a, b);
    for (int a = 0; a < dm.stress_cell_block(); ++a) t[d.stress[a]] += tloc[a];
  }

  // Velocity Gram of the broken H1 norm: cell gradients plus scaled jumps.
  Eigen::MatrixXd M1 = Eigen::MatrixXd::Zero(V, V);
  for (int c = 0; c < dm.n_cells; ++c) {
    const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), 2 * dm.k);
    const auto grad = cell_basis(mesh, c, dm.k + 1).gradients(quad.points);
    const Eigen::MatrixXd stiff = grad[0].transpose() * quad.weights.asDiagonal() * grad[0] +
                                  grad[1].transpose() * quad.weights.asDiagonal() * grad[1];
    const long o = dm.velocity_offset(c) - dm.stress_size;
    for (int w = 0; w < 2; ++w)
      M1.block(o + w * dm.dim_pk1, o + w * dm.dim_pk1, dm.dim_pk1, dm.dim_pk1) += stiff;
  }
  for (int e = 0; e < dm.n_edges; ++e) {
    const auto& ed = mesh.edges[static_cast<std::size_t>(e)];
    const EdgeQuadratureRule quad =
        edge_quadrature(mesh.edge_endpoint(e, 0), mesh.edge_endpoint(e, 1), 2 * (dm.k + 1));
    const EdgeBasis eb = edge_basis(mesh, e, dm.k);
    const Eigen::MatrixXd lvals = eb.values(quad.param);
    // Projection moments of the traces of both neighbors, jump = L - R.
    const int ncols = ed.boundary() ? dm.dim_pk1 : 2 * dm.dim_pk1;
    Eigen::MatrixXd tr(quad.size(), ncols);
    tr.leftCols(dm.dim_pk1) = cell_basis(mesh, ed.left, dm.k + 1).values(quad.points);
    if (!ed.boundary())
      tr.rightCols(dm.dim_pk1) = -cell_basis(mesh, ed.right, dm.k + 1).values(quad.points);
    Eigen::MatrixXd mom = lvals.transpose() * quad.weights.asDiagonal() * tr;  // (k+1) x ncols
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(ncols, ncols);
    for (int m = 0; m <= dm.k; ++m)
      gram += mom.row(m).transpose() * mom.row(m) / eb.norm2(m);
    gram /= ed.length;
    std::vector<long> cols;
    for (int w = 0; w < 2; ++w) {
      cols.clear();
      const long oL = dm.velocity_offset(ed.left) - dm.stress_size + w * dm.dim_pk1;
      for (int i = 0; i < dm.dim_pk1; ++i) cols.push_back(oL + i);
      if (!ed.boundary()) {
        const long oR = dm.velocity_offset(ed.right) - dm.stress_size + w * dm.dim_pk1;
        for (int i = 0; i < dm.dim_pk1; ++i) cols.push_back(oR + i);
      }
      for (int a = 0; a < ncols; ++a)
        for (int b = 0; b < ncols; ++b) M1(cols[a], cols[b]) += gram(a, b);
    }
  }

  StabilityReport rep;
  rep.dofs = dm.size;

  // inf-sup: generalized smallest eigenvalue of the Schur complement.
  Eigen::LLT<Eigen::MatrixXd> mh(MH);
  if (mh.info() != Eigen::Success)
    throw std::runtime_error("stability: stress Gram matrix is not SPD");
  const Eigen::MatrixXd G = B * mh.solve(B.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(G, M1);
  if (ges.info() != Eigen::Success)
    throw std::runtime_error("stability: inf-sup eigenproblem failed");
  rep.beta = std::sqrt(std::max(0.0, ges.eigenvalues().minCoeff()));

  // Coercivity on the kernel of [B; t^T].
  Eigen::MatrixXd constraints(V + 1, S);
  constraints.topRows(V) = B;
  constraints.row(V) = t.transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(constraints);
  const Eigen::MatrixXd Z = lu.kernel();
  rep.kernel_dim = static_cast<int>(Z.cols());
  if (rep.kernel_dim == 0) {
    rep.alpha = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  const Eigen::MatrixXd Asym = 0.5 * (A + A.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gek(
      (Z.transpose() * Asym * Z).eval(), (Z.transpose() * MH * Z).eval());
  if (gek.info() != Eigen::Success)
    throw std::runtime_error("stability: kernel eigenproblem failed");
  rep.alpha = gek.eigenvalues().minCoeff();
  return rep;
}

}  // namespace wgns
