// Command line driver: manufactured convergence studies, single solves,
// lid-driven cavity runs, and stability probes on polygonal meshes.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wgns/convergence.hpp"
#include "wgns/mesh_io.hpp"
#include "wgns/stability.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitGuard = 4;

constexpr int kProbeMaxLevels = 2;
constexpr long kProbeMaxDofs = 4000;

struct Options {
  std::string family = "triangular";
  int levels = 4;
  int k = 0;
  double nu = 0.1;
  double rho = 1.0;
  double tol = 1e-6;
  int max_iter = 100;
  std::string out = ".";
  std::vector<std::string> formats = {"csv"};
  bool nu_given = false;
};

struct FamilySpec {
  wgns::MeshFamily family;
  std::string label;
};

FamilySpec parse_family(const std::string& name) {
  FamilySpec fs;
  fs.family.rect = wgns::Rect{0.0, 0.0, 1.0, 1.0};
  if (name == "triangular") {
    fs.family.kind = wgns::MeshFamilyKind::Triangular;
    fs.label = "triangular";
  } else if (name == "hexagonal") {
    fs.family.kind = wgns::MeshFamilyKind::Hexagonal;
    fs.label = "hexagonal";
  } else if (name == "nonconvex") {
    fs.family.kind = wgns::MeshFamilyKind::NonConvex;
    fs.label = "nonconvex";
  } else if (name.rfind("file:", 0) == 0) {
    fs.family.kind = wgns::MeshFamilyKind::File;
    fs.family.path = name.substr(5);
    fs.label = "file";
    if (fs.family.path.empty()) throw CLI::ValidationError("--family", "file: needs a path");
  } else {
    throw CLI::ValidationError("--family", "unknown family '" + name + "'");
  }
  return fs;
}

wgns::ProblemConfig make_config(const Options& opt) {
  wgns::ProblemConfig config;
  config.k = opt.k;
  config.nu = opt.nu;
  config.rho = opt.rho;
  return config;
}

bool wants(const Options& opt, const std::string& fmt) {
  for (const auto& f : opt.formats)
    if (f == fmt) return true;
  return false;
}

std::string num_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

wgns::PolygonalMesh make_level_mesh(const FamilySpec& fs, int level) {
  return wgns::generate_mesh(fs.family, fs.family.kind == wgns::MeshFamilyKind::File ? 0 : level);
}

int run_convergence(const Options& opt) {
  const FamilySpec fs = parse_family(opt.family);
  wgns::ProblemConfig config = make_config(opt);
  const wgns::ManufacturedCase mc = wgns::benchmark_flow(config.nu);
  std::filesystem::create_directories(opt.out);

  wgns::ConvergenceReport rep;
  rep.family = fs.label;
  rep.k = opt.k;
  const int n_levels = fs.family.kind == wgns::MeshFamilyKind::File ? 1 : opt.levels;
  bool all_converged = true;

  for (int level = 0; level < n_levels; ++level) {
    const wgns::PolygonalMesh mesh = make_level_mesh(fs, level);
    const wgns::DofMap dm(mesh, opt.k);
    const wgns::SolverState state =
        wgns::picard_solve(mesh, config, mc.data(), opt.tol, opt.max_iter);

    wgns::LevelResult lr;
    lr.level = level;
    lr.h = mesh.mesh_size;
    lr.dofs = dm.size;
    lr.iterations = state.iterations;
    lr.converged = state.converged;
    if (!state.converged) {
      std::cerr << "error: iteration did not converge on level " << level << " ("
                << state.iterations << " iterations)\n";
      all_converged = false;
      rep.levels.push_back(lr);
      break;
    }
    const wgns::PressureField ph =
        wgns::postprocess_pressure(mesh, dm, state.sigma, state.u, config.convection);
    lr.err = wgns::error_norms(mesh, dm, mc, state.sigma, state.u, ph, config.data_ex());
    wgns::projection_distances(mesh, dm, mc, state.sigma, state.u, config.data_ex(), lr);
    rep.levels.push_back(lr);
    std::printf("level %d  h %.4e  dofs %ld  iters %d  e_sigma %.5e  e_u %.5e  e_p %.5e\n",
                level, lr.h, lr.dofs, lr.iterations, lr.err.e_sigma, lr.err.e_u, lr.err.e_p);
  }
  wgns::compute_rates(rep);

  const std::string stem = opt.out + "/convergence_" + fs.label + "_k" + std::to_string(opt.k);
  if (wants(opt, "csv")) {
    wgns::write_report_csv(rep, stem + ".csv");
    wgns::write_plot_script("convergence_" + fs.label + "_k" + std::to_string(opt.k) + ".csv",
                            opt.out + "/plot_convergence_" + fs.label + "_k" +
                                std::to_string(opt.k) + ".py");
    std::ofstream diag(stem + "_diagnostics.csv");
    diag << "level,h,proj_sigma_Hh,proj_u_1h\n";
    for (const auto& L : rep.levels) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%d,%.10e,%.10e,%.10e\n", L.level, L.h, L.proj_sigma_norm,
                    L.proj_u_norm);
      diag << buf;
    }
  }
  if (wants(opt, "md")) wgns::write_report_markdown(rep, stem + ".md");
  return all_converged ? kExitOk : kExitNoConvergence;
}

void write_field_cloud(const wgns::PolygonalMesh& mesh, const wgns::DofMap& dm,
                       const wgns::SolverState& state, const wgns::PressureField& ph,
                       const std::string& path) {
  std::ofstream out(path);
  out << "x,y,u1,u2,p\n";
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Eigen::Matrix<double, 1, 2> pt = mesh.cell_centroids[c].transpose();
    const Eigen::MatrixX2d uv = wgns::eval_velocity(mesh, dm, state.u, c, pt);
    const Eigen::VectorXd pv = ph.values(mesh, c, pt);
    char buf[200];
    std::snprintf(buf, sizeof buf, "%.10e,%.10e,%.10e,%.10e,%.10e\n", pt(0, 0), pt(0, 1),
                  uv(0, 0), uv(0, 1), pv[0]);
    out << buf;
  }
}

int run_solve(const Options& opt) {
  const FamilySpec fs = parse_family(opt.family);
  wgns::ProblemConfig config = make_config(opt);
  const wgns::ManufacturedCase mc = wgns::benchmark_flow(config.nu);
  std::filesystem::create_directories(opt.out);

  const int level = std::max(0, opt.levels - 1);
  const wgns::PolygonalMesh mesh = make_level_mesh(fs, level);
  const wgns::DofMap dm(mesh, opt.k);
  const wgns::SolverState state =
      wgns::picard_solve(mesh, config, mc.data(), opt.tol, opt.max_iter);
  if (!state.converged) {
    std::cerr << "error: iteration did not converge (" << state.iterations << " iterations)\n";
    return kExitNoConvergence;
  }
  const wgns::PressureField ph =
      wgns::postprocess_pressure(mesh, dm, state.sigma, state.u, config.convection);
  const wgns::ErrorNorms err =
      wgns::error_norms(mesh, dm, mc, state.sigma, state.u, ph, config.data_ex());

  const std::string stem = opt.out + "/solve_" + fs.label + "_k" + std::to_string(opt.k);
  std::ofstream out(stem + ".csv");
  out << "level,h,e_sigma,e_u,e_p,iters,dofs\n";
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d,%.10e,%.10e,%.10e,%.10e,%d,%ld\n", level, mesh.mesh_size,
                err.e_sigma, err.e_u, err.e_p, state.iterations, dm.size);
  out << buf;
  write_field_cloud(mesh, dm, state, ph, stem + "_fields.csv");
  std::printf("h %.4e  dofs %ld  iters %d  e_sigma %.5e  e_u %.5e  e_p %.5e\n", mesh.mesh_size,
              dm.size, state.iterations, err.e_sigma, err.e_u, err.e_p);
  return kExitOk;
}

int run_cavity_one(const Options& opt, const FamilySpec& fs, double nu) {
  wgns::ProblemConfig config = make_config(opt);
  config.nu = nu;
  const int level = std::max(0, opt.levels - 1);
  const wgns::PolygonalMesh mesh = make_level_mesh(fs, level);
  const wgns::DofMap dm(mesh, opt.k);

  const double y_top = fs.family.rect.y1;
  wgns::ProblemData data;
  data.f = [](const wgns::Vec2&) { return wgns::Vec2::Zero().eval(); };
  data.g = [y_top](const wgns::Vec2& x) {
    return std::abs(x.y() - y_top) < 1e-12 ? wgns::Vec2(1.0, 0.0) : wgns::Vec2(0.0, 0.0);
  };

  const wgns::SolverState state = wgns::picard_solve(mesh, config, data, opt.tol, opt.max_iter);
  if (!state.converged) {
    std::cerr << "error: cavity iteration did not converge at nu = " << nu << "\n";
    return kExitNoConvergence;
  }
  const wgns::PressureField ph =
      wgns::postprocess_pressure(mesh, dm, state.sigma, state.u, config.convection);

  // Boundary consistency along the lid: the Dirichlet value is imposed
  // weakly, so report how close the trace comes to (1,0).
  double lid_len = 0.0, lid_dev = 0.0, max_u1 = 0.0;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const auto& ed = mesh.edges[e];
    if (!ed.boundary() || std::abs(ed.midpoint.y() - y_top) > 1e-12) continue;
    const wgns::EdgeQuadratureRule quad =
        wgns::edge_quadrature(mesh.edge_endpoint(e, 0), mesh.edge_endpoint(e, 1), 2 * opt.k + 6);
    const Eigen::MatrixX2d uv = wgns::eval_velocity(mesh, dm, state.u, ed.left, quad.points);
    for (Eigen::Index q = 0; q < quad.size(); ++q) {
      lid_dev += quad.weights[q] * (wgns::Vec2(uv.row(q).transpose()) - wgns::Vec2(1.0, 0.0)).norm();
      max_u1 = std::max(max_u1, uv(q, 0));
    }
    lid_len += ed.length;
  }
  const double lid_l1 = lid_dev / lid_len;

  std::filesystem::create_directories(opt.out);
  const std::string tag = num_label(nu);
  write_field_cloud(mesh, dm, state, ph, opt.out + "/cavity_nu" + tag + ".csv");
  std::ofstream sum(opt.out + "/cavity_nu" + tag + "_summary.csv");
  sum << "nu,h,dofs,iters,max_lid_u1,lid_l1_dev\n";
  char buf[200];
  std::snprintf(buf, sizeof buf, "%g,%.10e,%ld,%d,%.10e,%.10e\n", nu, mesh.mesh_size, dm.size,
                state.iterations, max_u1, lid_l1);
  sum << buf;
  std::printf("cavity nu %g  h %.4e  iters %d  max lid u1 %.4f  lid deviation %.4f\n", nu,
              mesh.mesh_size, state.iterations, max_u1, lid_l1);
  return kExitOk;
}

int run_cavity(const Options& opt) {
  const FamilySpec fs = parse_family(opt.family);
  std::vector<double> nus = opt.nu_given ? std::vector<double>{opt.nu}
                                         : std::vector<double>{1.0, 0.01};
  for (double nu : nus) {
    const int rc = run_cavity_one(opt, fs, nu);
    if (rc != kExitOk) return rc;
  }
  return kExitOk;
}

int run_probe(const Options& opt) {
  const FamilySpec fs = parse_family(opt.family);
  const int n_levels = fs.family.kind == wgns::MeshFamilyKind::File ? 1 : opt.levels;
  if (n_levels > kProbeMaxLevels) {
    std::cerr << "refusing: stability probes are dense, at most " << kProbeMaxLevels
              << " levels allowed (got " << n_levels << ")\n";
    return kExitGuard;
  }
  wgns::ProblemConfig config = make_config(opt);

  struct Row {
    int level;
    double h, beta, alpha;
    long dofs;
    int kernel;
  };
  std::vector<Row> rows;
  for (int level = 0; level < n_levels; ++level) {
    const wgns::PolygonalMesh mesh = make_level_mesh(fs, level);
    const wgns::DofMap dm(mesh, opt.k);
    if (dm.size > kProbeMaxDofs) {
      std::cerr << "refusing: probe needs " << dm.size << " unknowns on level " << level
                << ", guard is " << kProbeMaxDofs << "\n";
      return kExitGuard;
    }
    const wgns::StabilityReport rep = wgns::stability_probe(mesh, config);
    rows.push_back({level, mesh.mesh_size, rep.beta, rep.alpha, rep.dofs, rep.kernel_dim});
    std::printf("level %d  h %.4e  dofs %ld  beta %.6e  alpha %.6e  kernel dim %d\n", level,
                mesh.mesh_size, rep.dofs, rep.beta, rep.alpha, rep.kernel_dim);
  }
  std::filesystem::create_directories(opt.out);
  std::ofstream out(opt.out + "/stability_" + fs.label + "_k" + std::to_string(opt.k) + ".csv");
  out << "level,h,dofs,beta,alpha,kernel_dim\n";
  for (const auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d,%.10e,%ld,%.10e,%.10e,%d\n", r.level, r.h, r.dofs, r.beta,
                  r.alpha, r.kernel);
    out << buf;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak Galerkin pseudostress-velocity solver for stationary "
               "incompressible Navier-Stokes on polygonal meshes"};
  app.require_subcommand(1);

  // The options are shared by every subcommand, so they live on the main app;
  // subcommands fall through so "wgns convergence --family ..." also parses.
  // This keeps config files flat key=value (CLI11 only reads the config of
  // the top-level app).
  Options opt;
  app.set_config("--config", "", "Read options from a key=value file");
  app.add_option("--family", opt.family,
                 "Mesh family: triangular | hexagonal | nonconvex | file:<path>")
      ->capture_default_str();
  app.add_option("--levels", opt.levels, "Number of refinement levels")
      ->check(CLI::Range(1, 16))
      ->capture_default_str();
  app.add_option("-k", opt.k, "Polynomial order of the stress space")
      ->check(CLI::Range(0, 2))
      ->capture_default_str();
  app.add_option("--nu", opt.nu, "Viscosity")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--rho", opt.rho, "Stabilization weight")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tol", opt.tol, "Fixed-point stopping tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-iter", opt.max_iter, "Fixed-point iteration cap")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  app.add_option("--out", opt.out, "Output directory")->capture_default_str();
  app.add_option("--format", opt.formats, "Report formats (csv, md)")
      ->check(CLI::IsMember({"csv", "md"}))
      ->capture_default_str();

  CLI::App* conv = app.add_subcommand("convergence", "Manufactured-solution refinement study");
  CLI::App* solve = app.add_subcommand("solve", "Single manufactured solve on one mesh");
  CLI::App* cavity = app.add_subcommand("cavity", "Lid-driven cavity benchmark");
  CLI::App* probe = app.add_subcommand("probe-stability", "Inf-sup and coercivity probes");
  for (CLI::App* cmd : {conv, solve, cavity, probe}) cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  opt.nu_given = app.count("--nu") > 0;

  try {
    if (conv->parsed()) return run_convergence(opt);
    if (solve->parsed()) return run_solve(opt);
    if (cavity->parsed()) return run_cavity(opt);
    if (probe->parsed()) return run_probe(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
