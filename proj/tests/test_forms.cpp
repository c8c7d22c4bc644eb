#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wgns/forms.hpp"
#include "wgns/mesh_io.hpp"
#include "wgns/norms.hpp"
#include "wgns/projection.hpp"

using namespace wgns;

namespace {

const MeshFamily kHex{MeshFamilyKind::Hexagonal, Rect{0, 0, 1, 1}, ""};

Mat2 random_poly_tensor_at(const Eigen::Matrix<double, 4, 6>& c, int k, const Vec2& x) {
  // per component: c0 + c1 x + c2 y + c3 x^2 + c4 xy + c5 y^2, truncated to k
  Mat2 m;
  for (int comp = 0; comp < 4; ++comp) {
    double v = c(comp, 0);
    if (k >= 1) v += c(comp, 1) * x.x() + c(comp, 2) * x.y();
    if (k >= 2)
      v += c(comp, 3) * x.x() * x.x() + c(comp, 4) * x.x() * x.y() + c(comp, 5) * x.y() * x.y();
    m(comp >> 1, comp & 1) = v;
  }
  return m;
}

}  // namespace

TEST_CASE("stabilizer is SPSD and vanishes exactly on smooth interpolants") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const PolygonalMesh mesh = generate_mesh(kHex, 0);
  for (int k : {0, 1, 2}) {
    const DofMap dm(mesh, k);
    Eigen::Matrix<double, 4, 6> c;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 6; ++j) c(i, j) = dist(rng);
    auto sfn = [&](const Vec2& x) { return random_poly_tensor_at(c, k, x); };
    const WGTensorField sig = project_stress(mesh, dm, sfn, 2 * k + 2);
    for (int cell : {0, 5, 12}) {
      const Eigen::MatrixXd S = local_stabilizer(mesh, dm, cell, 2 * k + 2);
      REQUIRE((S - S.transpose()).lpNorm<Eigen::Infinity>() < 1e-13);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
      REQUIRE(es.eigenvalues().minCoeff() > -1e-13);
      const Eigen::VectorXd y = gather_local_stress(mesh, dm, cell, sig);
      REQUIRE(y.dot(S * y) < 1e-13);  // interior trace equals edge unknowns
      // ... but a random discrete tensor is penalized
      Eigen::VectorXd z = y;
      z[0] += 1.0;
      REQUIRE(z.dot(S * z) > 1e-8);
    }
  }
}

TEST_CASE("viscous form matches the deviator pairing on interpolants") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const PolygonalMesh mesh = generate_mesh(kHex, 0);
  const double nu = 0.37;
  for (int k : {0, 1, 2}) {
    const DofMap dm(mesh, k);
    Eigen::Matrix<double, 4, 6> ca, cb;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 6; ++j) {
        ca(i, j) = dist(rng);
        cb(i, j) = dist(rng);
      }
    auto sa = [&](const Vec2& x) { return random_poly_tensor_at(ca, k, x); };
    auto sb = [&](const Vec2& x) { return random_poly_tensor_at(cb, k, x); };
    const WGTensorField siga = project_stress(mesh, dm, sa, 2 * k + 2);
    const WGTensorField sigb = project_stress(mesh, dm, sb, 2 * k + 2);
    for (int cell : {1, 8}) {
      const Eigen::MatrixXd A = local_A(mesh, dm, cell, nu, 1.0, 2 * k + 2);
      REQUIRE((A - A.transpose()).lpNorm<Eigen::Infinity>() < 1e-12);
      const Eigen::VectorXd ya = gather_local_stress(mesh, dm, cell, siga);
      const Eigen::VectorXd yb = gather_local_stress(mesh, dm, cell, sigb);

      const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(cell), 2 * k + 2);
      double want = 0.0;
      for (Eigen::Index q = 0; q < quad.size(); ++q) {
        const Vec2 x(quad.points.row(q).transpose());
        want += quad.weights[q] * ddot(deviator(sa(x)), deviator(sb(x))) / nu;
      }
      REQUIRE(ya.dot(A * yb) == Catch::Approx(want).epsilon(1e-11).margin(1e-13));
    }
  }
}

TEST_CASE("stabilization weight scales only the penalty part") {
  const PolygonalMesh mesh = generate_mesh(kHex, 0);
  const DofMap dm(mesh, 1);
  const Eigen::MatrixXd a1 = local_A(mesh, dm, 2, 0.5, 1.0, 6);
  const Eigen::MatrixXd a3 = local_A(mesh, dm, 2, 0.5, 3.0, 6);
  const Eigen::MatrixXd S = local_stabilizer(mesh, dm, 2, 6);
  REQUIRE((a3 - a1 - 2.0 * S).lpNorm<Eigen::Infinity>() < 1e-12);

  ProblemConfig cfg;
  cfg.rho = 2.0;
  REQUIRE(cfg.cell_rho(5) == 2.0);
  cfg.rho_per_cell = Eigen::VectorXd::LinSpaced(mesh.n_cells(), 0.0, 1.0);
  REQUIRE(cfg.cell_rho(5) == Catch::Approx(5.0 / (mesh.n_cells() - 1.0)));
}

TEST_CASE("convection coupling matches the deviator of the dyadic product") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const PolygonalMesh mesh = generate_mesh(kHex, 0);
  const double nu = 2.5;
  for (int k : {0, 1}) {
    const DofMap dm(mesh, k);
    auto zfn = [k](const Vec2& x) {
      return k == 0 ? Vec2(1 - x.y(), x.x()) : Vec2(x.x() * x.y(), 2 - x.x() * x.x());
    };
    const DGVectorField z = project_velocity(mesh, dm, zfn, 2 * (k + 1) + 2);

    WGTensorField sig;
    sig.coef = Eigen::VectorXd::Zero(dm.stress_size);
    for (Eigen::Index i = 0; i < sig.coef.size(); ++i) sig.coef[i] = dist(rng);
    DGVectorField v;
    v.coef = Eigen::VectorXd::Zero(dm.velocity_size);
    for (Eigen::Index i = 0; i < v.coef.size(); ++i) v.coef[i] = dist(rng);

    const int ex = 3 * k + 4;
    for (int cell : {0, 7}) {
      const Eigen::MatrixXd C = local_C(mesh, dm, cell, nu, z, ex);
      const Eigen::VectorXd ys =
          gather_local_stress(mesh, dm, cell, sig).head(dm.stress_cell_block());
      const Eigen::VectorXd yv =
          v.coef.segment(dm.velocity_offset(cell) - dm.stress_size, dm.velocity_block());

      const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(cell), ex);
      const Eigen::MatrixX4d s0 = eval_stress_interior(mesh, dm, sig, cell, quad.points);
      const Eigen::MatrixX2d vv = eval_velocity(mesh, dm, v, cell, quad.points);
      double want = 0.0;
      for (Eigen::Index q = 0; q < quad.size(); ++q) {
        const Vec2 x(quad.points.row(q).transpose());
        const Mat2 dyad = zfn(x) * Vec2(vv.row(q).transpose()).transpose();
        Mat2 s;
        s << s0(q, 0), s0(q, 1), s0(q, 2), s0(q, 3);
        want += quad.weights[q] * ddot(deviator(dyad), s) / nu;
      }
      REQUIRE(ys.dot(C * yv) == Catch::Approx(want).epsilon(1e-11).margin(1e-13));
    }
  }
}

TEST_CASE("boundary and load functionals have closed forms for constants") {
  const PolygonalMesh mesh = generate_mesh(kHex, 0);
  const DofMap dm(mesh, 1);

  int e_bdry = -1;
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (mesh.edges[static_cast<std::size_t>(e)].boundary()) {
      e_bdry = e;
      break;
    }
  REQUIRE(e_bdry >= 0);
  const double len = mesh.edges[static_cast<std::size_t>(e_bdry)].length;
  const Eigen::VectorXd G =
      local_G(mesh, dm, e_bdry, [](const Vec2&) { return Vec2(2.0, -3.0); }, 4);
  REQUIRE(G.size() == 4);
  REQUIRE(G[0] == Catch::Approx(2.0 * len));
  REQUIRE(G[1] == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(G[2] == Catch::Approx(-3.0 * len));
  REQUIRE(G[3] == Catch::Approx(0.0).margin(1e-14));

  const int cell = 4;
  const double area = mesh.cell_areas[cell];
  const Eigen::VectorXd F =
      local_F(mesh, dm, cell, [](const Vec2&) { return Vec2(0.5, 1.5); }, 4);
  // pair against the constant velocity field (1,1): coefficient 1 on both
  // constant-mode slots
  Eigen::VectorXd ones = Eigen::VectorXd::Zero(dm.velocity_block());
  ones[0] = ones[dm.dim_pk1] = 1.0;
  REQUIRE(ones.dot(F) == Catch::Approx(-(0.5 + 1.5) * area).epsilon(1e-12));

  // trace functional on the interpolant of a constant tensor
  auto sfn = [](const Vec2&) {
    Mat2 m;
    m << 4.0, 1.0, -2.0, -1.5;
    return m;
  };
  const WGTensorField sig = project_stress(mesh, dm, sfn, 4);
  const Eigen::VectorXd t = local_trace(mesh, dm, cell, 4);
  const Eigen::VectorXd y =
      gather_local_stress(mesh, dm, cell, sig).head(dm.stress_cell_block());
  REQUIRE(t.dot(y) == Catch::Approx((4.0 - 1.5) * area).epsilon(1e-12));
}

TEST_CASE("boundary flux integral detects incompatible Dirichlet data") {
  const PolygonalMesh mesh = generate_mesh(kHex, 1);
  REQUIRE(boundary_flux(mesh, [](const Vec2&) { return Vec2(1.0, 0.0); }, 4) ==
          Catch::Approx(0.0).margin(1e-13));
  REQUIRE(boundary_flux(mesh, [](const Vec2& x) { return Vec2(x.x(), x.y()); }, 4) ==
          Catch::Approx(2.0).epsilon(1e-12));  // div = 2 on the unit square
}

TEST_CASE("discrete norms reduce to closed forms on simple fields") {
  const PolygonalMesh mesh = generate_mesh(kHex, 1);
  for (int k : {0, 1}) {
    const DofMap dm(mesh, k);

    auto sfn = [](const Vec2&) {
      Mat2 m;
      m << 1.0, 2.0, -1.0, 0.5;
      return m;
    };
    const WGTensorField sig = project_stress(mesh, dm, sfn, 2 * k + 2);
    const double fro = std::sqrt(1.0 + 4.0 + 1.0 + 0.25);
    REQUIRE(stress_interior_l2(mesh, dm, sig) == Catch::Approx(fro).epsilon(1e-12));
    // stabilizer contributes nothing for an interpolated smooth tensor
    REQUIRE(stress_discrete_norm(mesh, dm, sig, 2 * k + 2) ==
            Catch::Approx(fro).epsilon(1e-10));

    // constant field: gradients and interior jumps vanish, but every boundary
    // edge keeps its full trace, each contributing h_e^{-1} * |u|^2 * h_e
    int nb = 0;
    for (const auto& e : mesh.edges) nb += e.boundary() ? 1 : 0;
    auto cfn = [](const Vec2&) { return Vec2(2.0, -3.0); };
    const DGVectorField uc = project_velocity(mesh, dm, cfn, 2 * (k + 1) + 2);
    REQUIRE(velocity_discrete_norm(mesh, dm, uc) ==
            Catch::Approx(std::sqrt(13.0 * nb)).epsilon(1e-10));
    REQUIRE(velocity_lp(mesh, dm, uc, 4.0) > 0.0);

    // constant-per-cell alternating field: all of the norm is in the jumps
    DGVectorField w;
    w.coef = Eigen::VectorXd::Zero(dm.velocity_size);
    for (int c = 0; c < mesh.n_cells(); ++c)
      w.coef[dm.velocity_offset(c) - dm.stress_size] = (c % 2 == 0) ? 1.0 : -1.0;
    REQUIRE(velocity_discrete_norm(mesh, dm, w) > 0.5);
  }

  // linear field on the structured triangulation, k = 1 so edge traces are
  // reproduced: norm^2 = int |grad u|^2 + sum_bdry h_e^{-1} int_e |u|^2
  //           = 14 + n * (1/3 + 34/3 + 13/3 + 10/3) with n edges per side
  const PolygonalMesh tri =
      generate_mesh({MeshFamilyKind::Triangular, Rect{0, 0, 1, 1}, ""}, 0);
  const DofMap dmt(tri, 1);
  auto ufn = [](const Vec2& x) { return Vec2(x.x() - 2 * x.y(), 3 * x.y()); };
  const DGVectorField u = project_velocity(tri, dmt, ufn, 6);
  int per_side = 0;
  for (const auto& e : tri.edges)
    per_side += (e.boundary() && std::abs(e.midpoint.y()) < 1e-12) ? 1 : 0;
  REQUIRE(velocity_discrete_norm(tri, dmt, u) ==
          Catch::Approx(std::sqrt(14.0 + per_side * 58.0 / 3.0)).epsilon(1e-10));
}

TEST_CASE("Lp velocity norm matches analytic values") {
  const PolygonalMesh mesh = generate_mesh(kHex, 0);
  const DofMap dm(mesh, 0);
  // u = (x, 0): ||u||_{L4}^4 = int x^4 = 1/5; ||u||_{L2}^2 = 1/3
  const DGVectorField u =
      project_velocity(mesh, dm, [](const Vec2& x) { return Vec2(x.x(), 0.0); }, 6);
  REQUIRE(velocity_lp(mesh, dm, u, 4.0) == Catch::Approx(std::pow(0.2, 0.25)).epsilon(1e-12));
  REQUIRE(velocity_lp(mesh, dm, u, 2.0) == Catch::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
}
