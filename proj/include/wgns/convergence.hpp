#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "wgns/manufactured.hpp"
#include "wgns/norms.hpp"
#include "wgns/picard.hpp"
#include "wgns/pressure.hpp"
#include "wgns/weak_divergence.hpp"

namespace wgns {

struct ErrorNorms {
  double e_sigma = 0.0;  // ||sigma - sigma_0h||_0 + ||div sigma - div_w sigma_h||_{0,4/3}
  double e_u = 0.0;      // ||u - u_h||_{0,4}
  double e_p = 0.0;      // ||p - p_h||_0
};

// Measures the solution against the manufactured fields. The divergence part
// uses div sigma = -f analytically, so no exact third derivatives are needed.
inline ErrorNorms error_norms(const PolygonalMesh& mesh, const DofMap& dm,
                              const ManufacturedCase& mc, const WGTensorField& sigma,
                              const DGVectorField& u, const PressureField& ph, int exactness) {
  ErrorNorms err;
  double s2 = 0.0, s43 = 0.0, u4 = 0.0, p2 = 0.0;
  for (int c = 0; c < dm.n_cells; ++c) {
    const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), exactness);
    const Eigen::MatrixX4d sig_h = eval_stress_interior(mesh, dm, sigma, c, quad.points);
    const Eigen::MatrixX2d u_h = eval_velocity(mesh, dm, u, c, quad.points);
    const Eigen::VectorXd p_h = ph.values(mesh, c, quad.points);

    const Eigen::VectorXd div_coef = weak_divergence_coeffs(mesh, dm, c, sigma, exactness);
    const Eigen::MatrixXd val_k1 = cell_basis(mesh, c, dm.k + 1).values(quad.points);
    Eigen::MatrixX2d div_h(quad.size(), 2);
    for (int w = 0; w < 2; ++w)
      div_h.col(w) = val_k1 * div_coef.segment(w * dm.dim_pk1, dm.dim_pk1);

    for (Eigen::Index q = 0; q < quad.size(); ++q) {
      const Vec2 x(quad.points.row(q).transpose());
      const double wq = quad.weights[q];
      const Mat2 sig_x = mc.sigma(x);
      double fr2 = 0.0;
      for (int comp = 0; comp < 4; ++comp) {
        const double d = sig_x(comp >> 1, comp & 1) - sig_h(q, comp);
        fr2 += d * d;
      }
      s2 += wq * fr2;
      const Vec2 ddiv = -mc.f(x) - Vec2(div_h.row(q).transpose());
      s43 += wq * std::pow(ddiv.squaredNorm(), 2.0 / 3.0);
      const Vec2 du = mc.u(x) - Vec2(u_h.row(q).transpose());
      u4 += wq * du.squaredNorm() * du.squaredNorm();
      const double dp = mc.p(x) - p_h[q];
      p2 += wq * dp * dp;
    }
  }
  err.e_sigma = std::sqrt(s2) + std::pow(s43, 0.75);
  err.e_u = std::pow(u4, 0.25);
  err.e_p = std::sqrt(p2);
  return err;
}

struct LevelResult {
  int level = 0;
  double h = 0.0;
  long dofs = 0;
  int iterations = 0;
  bool converged = false;
  ErrorNorms err;
  double proj_sigma_norm = 0.0;  // ||P_h sigma - sigma_h||_{H,h}
  double proj_u_norm = 0.0;      // ||P_h u - u_h||_{1,h}
};

struct ConvergenceReport {
  std::string family;
  int k = 0;
  std::vector<LevelResult> levels;
  std::vector<double> r_sigma, r_u, r_p;  // NaN on the first level
};

// r = log(e_coarse/e_fine) / log(h_coarse/h_fine) per consecutive pair;
// undefined (NaN) without a predecessor or when an error vanishes.
inline double convergence_rate(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !(h_coarse > 0.0) || !(h_fine > 0.0) ||
      h_coarse == h_fine)
    return std::numeric_limits<double>::quiet_NaN();
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

inline void compute_rates(ConvergenceReport& rep) {
  const std::size_t n = rep.levels.size();
  rep.r_sigma.assign(n, std::numeric_limits<double>::quiet_NaN());
  rep.r_u.assign(n, std::numeric_limits<double>::quiet_NaN());
  rep.r_p.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < n; ++i) {
    const auto& a = rep.levels[i - 1];
    const auto& b = rep.levels[i];
    rep.r_sigma[i] = convergence_rate(a.err.e_sigma, b.err.e_sigma, a.h, b.h);
    rep.r_u[i] = convergence_rate(a.err.e_u, b.err.e_u, a.h, b.h);
    rep.r_p[i] = convergence_rate(a.err.e_p, b.err.e_p, a.h, b.h);
  }
}

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string fmt_rate(double r) {
  return std::isnan(r) ? std::string("nan") : fmt("%.6f", r);
}

}  // namespace detail

// CSV schema: level,h,e_sigma,r_sigma,e_u,r_u,e_p,r_p,iters,dofs
inline void write_report_csv(const ConvergenceReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("report: cannot write '" + path + "'");
  out << "level,h,e_sigma,r_sigma,e_u,r_u,e_p,r_p,iters,dofs\n";
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    const auto& L = rep.levels[i];
    out << L.level << ',' << detail::fmt("%.10e", L.h) << ','
        << detail::fmt("%.10e", L.err.e_sigma) << ',' << detail::fmt_rate(rep.r_sigma[i]) << ','
        << detail::fmt("%.10e", L.err.e_u) << ',' << detail::fmt_rate(rep.r_u[i]) << ','
        << detail::fmt("%.10e", L.err.e_p) << ',' << detail::fmt_rate(rep.r_p[i]) << ','
        << L.iterations << ',' << L.dofs << '\n';
  }
}

inline void write_report_markdown(const ConvergenceReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("report: cannot write '" + path + "'");
  out << "# Convergence, " << rep.family << " family, k = " << rep.k << "\n\n";
  out << "| level | h | e(sigma) | r(sigma) | e(u) | r(u) | e(p) | r(p) | iters | dofs |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|\n";
  auto rate = [](double r) { return std::isnan(r) ? std::string("-") : detail::fmt("%.4f", r); };
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    const auto& L = rep.levels[i];
    out << "| " << L.level << " | " << detail::fmt("%.4e", L.h) << " | "
        << detail::fmt("%.5e", L.err.e_sigma) << " | " << rate(rep.r_sigma[i]) << " | "
        << detail::fmt("%.5e", L.err.e_u) << " | " << rate(rep.r_u[i]) << " | "
        << detail::fmt("%.5e", L.err.e_p) << " | " << rate(rep.r_p[i]) << " | " << L.iterations
        << " | " << L.dofs << " |\n";
  }
}

// Companion log-log plot script; reads only the emitted CSV.
inline void write_plot_script(const std::string& csv_name, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("report: cannot write '" + path + "'");
  out << "#!/usr/bin/env python3\n"
         "import csv\n"
         "import matplotlib.pyplot as plt\n\n"
         "rows = list(csv.DictReader(open('" << csv_name << "')))\n"
         "h = [float(r['h']) for r in rows]\n"
         "for key, label in [('e_sigma', 'e(sigma)'), ('e_u', 'e(u)'), ('e_p', 'e(p)')]:\n"
         "    plt.loglog(h, [float(r[key]) for r in rows], 'o-', label=label)\n"
         "plt.gca().invert_xaxis()\n"
         "plt.xlabel('h')\n"
         "plt.ylabel('error')\n"
         "plt.grid(True, which='both', alpha=0.3)\n"
         "plt.legend()\n"
         "plt.tight_layout()\n"
         "plt.savefig('" << csv_name << ".png', dpi=150)\n";
}

// Distances of the solution to the weak interpolants of the exact fields, in
// the mesh-dependent norms; these should superconverge relative to the plain
// approximation error.
inline void projection_distances(const PolygonalMesh& mesh, const DofMap& dm,
                                 const ManufacturedCase& mc, const WGTensorField& sigma,
                                 const DGVectorField& u, int exactness, LevelResult& out) {
  const WGTensorField proj_sig =
      project_stress(mesh, dm, [&](const Vec2& x) { return mc.sigma(x); }, exactness);
  const DGVectorField proj_u =
      project_velocity(mesh, dm, [&](const Vec2& x) { return mc.u(x); }, exactness);
  WGTensorField dsig;
  dsig.coef = proj_sig.coef - sigma.coef;
  DGVectorField du;
  du.coef = proj_u.coef - u.coef;
  out.proj_sigma_norm = stress_discrete_norm(mesh, dm, dsig, exactness);
  out.proj_u_norm = velocity_discrete_norm(mesh, dm, du);
}

}  // namespace wgns
