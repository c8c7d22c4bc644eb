#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <bit>
#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wgns/forms.hpp"
#include "wgns/norms.hpp"

namespace wgns {

// Monolithic linearized system
//   [ A   B^T + C_z   t ] [sigma ]   [G]
//   [ B   0           0 ] [u     ] = [F]
//   [ t^T 0           0 ] [lambda]   [0]
// where C_z carries the convection term frozen at the transport field z and
// t enforces the mean-free stress trace.
struct SaddleSystem {
  Eigen::SparseMatrix<double> mat;
  Eigen::VectorXd rhs;
  DofMap dofs;
};

namespace detail {

// Entries are summed in a canonical order (column, row, value bit pattern) so
// the assembled matrix does not depend on cell traversal or insertion order.
struct RawEntry {
  long row, col;
  double val;
};

inline std::uint64_t value_rank(double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  // Flip so that the total order matches numeric order; ties are irrelevant.
  return (bits & 0x8000000000000000ULL) ? ~bits : bits ^ 0x8000000000000000ULL;
}

inline Eigen::SparseMatrix<double> build_sparse(long rows, long cols,
                                                std::vector<RawEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const RawEntry& a, const RawEntry& b) {
    if (a.col != b.col) return a.col < b.col;
    if (a.row != b.row) return a.row < b.row;
    return value_rank(a.val) < value_rank(b.val);
  });
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size();) {
    double sum = 0.0;
    const std::size_t start = i;
    while (i < entries.size() && entries[i].row == entries[start].row &&
           entries[i].col == entries[start].col) {
      sum += entries[i].val;
      ++i;
    }
    trip.emplace_back(static_cast<int>(entries[start].row),
                      static_cast<int>(entries[start].col), sum);
  }
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

}  // namespace detail

inline SaddleSystem assemble(const PolygonalMesh& mesh, const ProblemConfig& config,
                             const ProblemData& data, const DGVectorField& z) {
  SaddleSystem sys;
  sys.dofs = DofMap(mesh, config.k);
  const DofMap& dm = sys.dofs;
  const long mult = dm.multiplier_index();
  const int fex = config.form_ex();
  const int dex = config.data_ex();

  // One-time compatibility warning; the scheme still solves (the multiplier
  // absorbs the defect) but accuracy degrades for incompatible data.
  const double flux = boundary_flux(mesh, data.g, dex);
  if (std::abs(flux) > 1e-10)
    std::cerr << "warning: boundary data is not mass-free, int g.n = " << flux << "\n";

  std::vector<detail::RawEntry> entries;
  sys.rhs = Eigen::VectorXd::Zero(dm.size);

  for (int c = 0; c < dm.n_cells; ++c) {
    const CellDofs d = cell_dofs(mesh, dm, c);
    const Eigen::MatrixXd A = local_A(mesh, dm, c, config.nu, config.cell_rho(c), fex);
    const Eigen::MatrixXd B = local_B(mesh, dm, c, fex);
    const Eigen::VectorXd t = local_trace(mesh, dm, c, fex);
    const int ns = static_cast<int>(d.stress.size());
    const int nv = static_cast<int>(d.velocity.size());

    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b)
        if (A(a, b) != 0.0) entries.push_back({d.stress[a], d.stress[b], A(a, b)});
    for (int a = 0; a < nv; ++a)
      for (int b = 0; b < ns; ++b)
        if (B(a, b) != 0.0) {
          entries.push_back({d.velocity[a], d.stress[b], B(a, b)});
          entries.push_back({d.stress[b], d.velocity[a], B(a, b)});  // B^T in stress rows
        }
    for (int a = 0; a < dm.stress_cell_block(); ++a)
      if (t[a] != 0.0) {
        entries.push_back({d.stress[a], mult, t[a]});
        entries.push_back({mult, d.stress[a], t[a]});
      }
    if (config.convection) {
      const Eigen::MatrixXd C = local_C(mesh, dm, c, config.nu, z, fex);
      for (int a = 0; a < dm.stress_cell_block(); ++a)
        for (int b = 0; b < nv; ++b)
          if (C(a, b) != 0.0) entries.push_back({d.stress[a], d.velocity[b], C(a, b)});
    }

    const Eigen::VectorXd F = local_F(mesh, dm, c, data.f, dex);
    for (int a = 0; a < nv; ++a) sys.rhs[d.velocity[a]] += F[a];
  }

  for (int e = 0; e < dm.n_edges; ++e) {
    if (!mesh.edges[static_cast<std::size_t>(e)].boundary()) continue;
    const Eigen::VectorXd G = local_G(mesh, dm, e, data.g, dex);
    const long o = dm.stress_edge_offset(e);
    for (int a = 0; a < dm.stress_edge_block(); ++a) sys.rhs[o + a] += G[a];
  }

  sys.mat = detail::build_sparse(dm.size, dm.size, entries);
  return sys;
}

struct LinearSolution {
  WGTensorField sigma;
  DGVectorField u;
  double lambda = 0.0;
};

namespace detail {

inline std::string block_name(const DofMap& dm, long idx) {
  if (idx < dm.stress_size) return "stress";
  if (idx < dm.stress_size + dm.velocity_size) return "velocity";
  return "multiplier";
}

}  // namespace detail

// Direct sparse solve with a residual check. Throws with the offending block
// named if the matrix is structurally or numerically singular.
inline LinearSolution solve_linear(const SaddleSystem& sys) {
  const long n = sys.mat.rows();
  std::vector<bool> col_hit(static_cast<std::size_t>(n), false),
      row_hit(static_cast<std::size_t>(n), false);
  for (int j = 0; j < sys.mat.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.mat, j); it; ++it)
      if (it.value() != 0.0) {
        col_hit[static_cast<std::size_t>(it.col())] = true;
        row_hit[static_cast<std::size_t>(it.row())] = true;
      }
  for (long i = 0; i < n; ++i)
    if (!col_hit[static_cast<std::size_t>(i)] || !row_hit[static_cast<std::size_t>(i)])
      throw std::runtime_error("solve: structurally singular system, empty row or column in the " +
                               detail::block_name(sys.dofs, i) + " block (index " +
                               std::to_string(i) + ")");

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(sys.mat);
  lu.factorize(sys.mat);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve: factorization failed (" + lu.lastErrorMessage() + ")");
  const Eigen::VectorXd x = lu.solve(sys.rhs);
  if (lu.info() != Eigen::Success) throw std::runtime_error("solve: backsubstitution failed");

  const double resid = (sys.mat * x - sys.rhs).lpNorm<Eigen::Infinity>();
  const double tol = 1e-9 * (1.0 + sys.rhs.lpNorm<Eigen::Infinity>());
  if (!(resid <= tol))
    throw std::runtime_error("solve: residual " + std::to_string(resid) +
                             " exceeds tolerance " + std::to_string(tol));

  LinearSolution sol;
  sol.sigma.coef = x.head(sys.dofs.stress_size);
  sol.u.coef = x.segment(sys.dofs.stress_size, sys.dofs.velocity_size);
  sol.lambda = x[sys.dofs.multiplier_index()];
  return sol;
}

}  // namespace wgns
