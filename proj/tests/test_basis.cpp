#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wgns/basis.hpp"
#include "wgns/mesh_io.hpp"
#include "wgns/projection.hpp"
#include "wgns/quadrature.hpp"

using namespace wgns;

TEST_CASE("cell basis ordering and values") {
  const CellBasis basis(2, Vec2(0.5, 0.25), 2.0);
  REQUIRE(basis.size() == 6);
  const std::pair<int, int> expected[] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (int i = 0; i < 6; ++i) REQUIRE(basis.exponents(i) == expected[i]);

  Eigen::Matrix<double, 1, 2> pt;
  pt << 1.5, 1.25;  // scaled coordinates (0.5, 0.5)
  const Eigen::MatrixXd vals = basis.values(pt);
  REQUIRE(vals(0, 0) == Catch::Approx(1.0));
  REQUIRE(vals(0, 1) == Catch::Approx(0.5));
  REQUIRE(vals(0, 2) == Catch::Approx(0.5));
  REQUIRE(vals(0, 3) == Catch::Approx(0.25));
  REQUIRE(vals(0, 4) == Catch::Approx(0.25));
  REQUIRE(vals(0, 5) == Catch::Approx(0.25));
}

TEST_CASE("cell basis gradients agree with central differences") {
  const CellBasis basis(3, Vec2(-0.2, 0.7), 0.37);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double eps = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Matrix<double, 1, 2> p;
    p << dist(rng), dist(rng);
    Eigen::Matrix<double, 1, 2> px0 = p, px1 = p, py0 = p, py1 = p;
    px0(0, 0) -= eps;
    px1(0, 0) += eps;
    py0(0, 1) -= eps;
    py1(0, 1) += eps;
    const auto grad = basis.gradients(p);
    const Eigen::MatrixXd fdx = (basis.values(px1) - basis.values(px0)) / (2 * eps);
    const Eigen::MatrixXd fdy = (basis.values(py1) - basis.values(py0)) / (2 * eps);
    for (int i = 0; i < basis.size(); ++i) {
      REQUIRE(grad[0](0, i) == Catch::Approx(fdx(0, i)).margin(1e-7));
      REQUIRE(grad[1](0, i) == Catch::Approx(fdy(0, i)).margin(1e-7));
    }
  }
}

TEST_CASE("edge Legendre basis is orthogonal with known norms") {
  const double len = 0.3718;
  const EdgeBasis basis(4, len);
  const EdgeQuadratureRule rule = edge_quadrature(Vec2(0, 0), Vec2(len, 0), 2 * 4 + 1);
  const Eigen::MatrixXd vals = basis.values(rule.param);
  const Eigen::MatrixXd gram = vals.transpose() * rule.weights.asDiagonal() * vals;
  for (int m = 0; m < basis.size(); ++m)
    for (int n = 0; n < basis.size(); ++n) {
      const double expected = (m == n) ? basis.norm2(m) : 0.0;
      REQUIRE(gram(m, n) == Catch::Approx(expected).margin(1e-14));
    }
  REQUIRE(basis.norm2(0) == Catch::Approx(len));
  REQUIRE(basis.norm2(2) == Catch::Approx(len / 5.0));
}

TEST_CASE("scaled monomial mass matrices stay well conditioned on generated cells") {
  for (const MeshFamilyKind kind : {MeshFamilyKind::Hexagonal, MeshFamilyKind::NonConvex}) {
    const PolygonalMesh mesh = generate_mesh({kind, Rect{0, 0, 1, 1}, ""}, 1);
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const CellBasis basis = cell_basis(mesh, c, 3);
      const QuadratureRule quad = cell_quadrature(mesh.cell_vertex_coords(c), 6);
      const Eigen::MatrixXd mass = cell_mass_matrix(basis, quad);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mass);
      REQUIRE(es.eigenvalues().minCoeff() > 0);
      REQUIRE(es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() < 1e8);
    }
  }
}
