#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wgns/convergence.hpp"
#include "wgns/mesh_io.hpp"

using namespace wgns;

namespace {

const MeshFamily kHex{MeshFamilyKind::Hexagonal, Rect{0, 0, 1, 1}, ""};

PressureField project_pressure(const PolygonalMesh& mesh, int degree,
                               const std::function<double(const Vec2&)>& p) {
  PressureField ph;
  ph.degree = degree;
  ph.coef.resize(mesh.n_cells(), poly_space_dim(degree));
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), 2 * degree + 6);
    ph.coef.row(c) = project_cell_scalar(mesh, c, degree, quad, p).transpose();
  }
  return ph;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

ConvergenceReport synthetic_report() {
  ConvergenceReport rep;
  rep.family = "synthetic";
  rep.k = 0;
  for (int i = 0; i < 2; ++i) {
    LevelResult lr;
    lr.level = i;
    lr.h = i == 0 ? 0.5 : 0.25;
    lr.dofs = 100 + i;
    lr.iterations = 7;
    lr.err.e_sigma = i == 0 ? 1.0 : 0.5;   // rate 1
    lr.err.e_u = i == 0 ? 1.0 : 0.25;      // rate 2
    lr.err.e_p = i == 0 ? 0.125 : 0.03125; // rate 2
    rep.levels.push_back(lr);
  }
  compute_rates(rep);
  return rep;
}

}  // namespace

TEST_CASE("experimental rate arithmetic") {
  // published row: e = 1.27585 at h = 0.2, e' = 0.688337 at h' = 1/9
  REQUIRE(convergence_rate(1.27585, 0.688337, 0.2, 1.0 / 9.0) ==
          Catch::Approx(1.04985).epsilon(2e-5));
  REQUIRE(convergence_rate(1.0, 1.0, 0.5, 0.25) == 0.0);
  REQUIRE(convergence_rate(1.0, 0.25, 0.5, 0.25) == Catch::Approx(2.0).epsilon(1e-14));
  REQUIRE(std::isnan(convergence_rate(0.0, 0.25, 0.5, 0.25)));
  REQUIRE(std::isnan(convergence_rate(1.0, 0.0, 0.5, 0.25)));
  REQUIRE(std::isnan(convergence_rate(1.0, 0.5, 0.25, 0.25)));
}

TEST_CASE("rates are undefined markers on the first level") {
  ConvergenceReport rep = synthetic_report();
  REQUIRE(rep.r_sigma.size() == 2);
  REQUIRE(std::isnan(rep.r_sigma[0]));
  REQUIRE(std::isnan(rep.r_u[0]));
  REQUIRE(std::isnan(rep.r_p[0]));
  REQUIRE(rep.r_sigma[1] == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(rep.r_u[1] == Catch::Approx(2.0).epsilon(1e-12));
  REQUIRE(rep.r_p[1] == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("error norms of projected exact fields are at projection accuracy") {
  const PolygonalMesh mesh = generate_mesh(kHex, 1);
  const ManufacturedCase mc = benchmark_flow(0.1, true);
  const int k = 0;
  const DofMap dm(mesh, k);

  const WGTensorField sig =
      project_stress(mesh, dm, [&](const Vec2& x) { return mc.sigma(x); }, 2 * k + 8);
  const DGVectorField u =
      project_velocity(mesh, dm, [&](const Vec2& x) { return mc.u(x); }, 2 * k + 8);
  const PressureField ph = project_pressure(mesh, 2 * (k + 1), mc.p);

  const ErrorNorms err = error_norms(mesh, dm, mc, sig, u, ph, 2 * k + 8);
  // h ~ 0.104, so interior L2 distances sit at the h^(k+1) projection scale
  REQUIRE(err.e_u < 0.02);
  REQUIRE(err.e_p < 0.05);
  REQUIRE(err.e_sigma > 0.0);

  SECTION("doubling the quadrature moves the norms by less than 0.1%") {
    const ErrorNorms err2 = error_norms(mesh, dm, mc, sig, u, ph, 2 * (2 * k + 8));
    REQUIRE(std::abs(err2.e_sigma - err.e_sigma) < 1e-3 * err.e_sigma);
    REQUIRE(std::abs(err2.e_u - err.e_u) < 1e-3 * err.e_u);
    REQUIRE(std::abs(err2.e_p - err.e_p) < 1e-3 * err.e_p);
  }

  SECTION("projection distances vanish against the same projections") {
    LevelResult lr;
    projection_distances(mesh, dm, mc, sig, u, 2 * k + 8, lr);
    REQUIRE(lr.proj_sigma_norm < 1e-12);
    REQUIRE(lr.proj_u_norm < 1e-12);
  }
}

TEST_CASE("report writers emit the pinned formats") {
  const ConvergenceReport rep = synthetic_report();
  const auto dir = std::filesystem::temp_directory_path();
  const std::string csv = (dir / "wgns_report_test.csv").string();
  const std::string md = (dir / "wgns_report_test.md").string();
  const std::string py = (dir / "wgns_report_test.py").string();

  write_report_csv(rep, csv);
  const auto lines = read_lines(csv);
  REQUIRE(lines.size() == 3);
  REQUIRE(lines[0] == "level,h,e_sigma,r_sigma,e_u,r_u,e_p,r_p,iters,dofs");
  REQUIRE(lines[1].substr(0, 2) == "0,");
  REQUIRE(lines[1].find(",nan,") != std::string::npos);  // undefined first-level rate
  // second level carries numeric rates and the iteration/DOF tail
  REQUIRE(lines[2].find("1.000000") != std::string::npos);
  REQUIRE(lines[2].find("2.000000") != std::string::npos);
  REQUIRE(lines[2].substr(lines[2].size() - 6) == ",7,101");

  write_report_markdown(rep, md);
  const auto mdl = read_lines(md);
  REQUIRE(mdl.size() >= 5);
  REQUIRE(mdl[2] == "| level | h | e(sigma) | r(sigma) | e(u) | r(u) | e(p) | r(p) | iters | dofs |");
  REQUIRE(mdl[4].find("| - |") != std::string::npos);

  write_plot_script("wgns_report_test.csv", py);
  std::ifstream in(py);
  std::stringstream ss;
  ss << in.rdbuf();
  REQUIRE(ss.str().find("wgns_report_test.csv") != std::string::npos);
  REQUIRE(ss.str().find("loglog") != std::string::npos);

  std::filesystem::remove(csv);
  std::filesystem::remove(md);
  std::filesystem::remove(py);
}
