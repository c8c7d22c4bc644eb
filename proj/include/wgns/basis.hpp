#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "wgns/geometry.hpp"

namespace wgns {

inline int poly_space_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }

// Scaled monomials ((x - xK)/hK)^ax * ((y - yK)/hK)^ay on a cell, ordered by
// total degree and, within a degree, by decreasing x exponent:
//   1; X, Y; X^2, XY, Y^2; ...
// The scaling keeps Gram matrices well conditioned uniformly under refinement.
class CellBasis {
 public:
  CellBasis(int degree, const Vec2& center, double scale)
      : degree_(degree), center_(center), scale_(scale) {
    exps_.reserve(poly_space_dim(degree));
    for (int d = 0; d <= degree; ++d)
      for (int iy = 0; iy <= d; ++iy) exps_.emplace_back(d - iy, iy);
  }

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exps_.size()); }
  const Vec2& center() const { return center_; }
  double scale() const { return scale_; }
  std::pair<int, int> exponents(int i) const { return exps_[static_cast<std::size_t>(i)]; }

  // Value table, one row per point, one column per basis function.
  Eigen::MatrixXd values(const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 2>>& pts)
      const {
    const Eigen::Index np = pts.rows();
    Eigen::MatrixXd powx(np, degree_ + 1), powy(np, degree_ + 1);
    fill_powers(pts, powx, powy);
    Eigen::MatrixXd tab(np, size());
    for (int i = 0; i < size(); ++i)
      tab.col(i) = powx.col(exps_[i].first).cwiseProduct(powy.col(exps_[i].second));
    return tab;
  }

  // Gradient tables d/dx and d/dy, same layout as values().
  std::array<Eigen::MatrixXd, 2> gradients(
      const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 2>>& pts) const {
    const Eigen::Index np = pts.rows();
    Eigen::MatrixXd powx(np, degree_ + 1), powy(np, degree_ + 1);
    fill_powers(pts, powx, powy);
    std::array<Eigen::MatrixXd, 2> g{Eigen::MatrixXd::Zero(np, size()),
                                     Eigen::MatrixXd::Zero(np, size())};
    const double inv_h = 1.0 / scale_;
    for (int i = 0; i < size(); ++i) {
      const auto [ax, ay] = exps_[static_cast<std::size_t>(i)];
      if (ax > 0)
        g[0].col(i) = (ax * inv_h) * powx.col(ax - 1).cwiseProduct(powy.col(ay));
      if (ay > 0)
        g[1].col(i) = (ay * inv_h) * powx.col(ax).cwiseProduct(powy.col(ay - 1));
    }
    return g;
  }

 private:
  void fill_powers(const Eigen::Ref<const Eigen::Matrix<double, Eigen::Dynamic, 2>>& pts,
                   Eigen::MatrixXd& powx, Eigen::MatrixXd& powy) const {
    const Eigen::ArrayXd sx = (pts.col(0).array() - center_.x()) / scale_;
    const Eigen::ArrayXd sy = (pts.col(1).array() - center_.y()) / scale_;
    powx.col(0).setOnes();
    powy.col(0).setOnes();
    for (int d = 1; d <= degree_; ++d) {
      powx.col(d) = powx.col(d - 1).array() * sx;
      powy.col(d) = powy.col(d - 1).array() * sy;
    }
  }

  int degree_;
  Vec2 center_;
  double scale_;
  std::vector<std::pair<int, int>> exps_;
};

// Legendre polynomials in the arclength parameter t in [-1,1] of an edge.
// Orthogonal on the edge: int_e L_m L_n ds = delta_mn * |e| / (2m+1).
class EdgeBasis {
 public:
  EdgeBasis(int degree, double edge_length) : degree_(degree), length_(edge_length) {}

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }

  Eigen::MatrixXd values(const Eigen::Ref<const Eigen::VectorXd>& t) const {
    const Eigen::Index np = t.size();
    Eigen::MatrixXd tab(np, size());
    tab.col(0).setOnes();
    if (degree_ >= 1) tab.col(1) = t;
    for (int m = 1; m < degree_; ++m)
      tab.col(m + 1) =
          ((2.0 * m + 1.0) * t.cwiseProduct(tab.col(m)) - m * tab.col(m - 1)) / (m + 1.0);
    return tab;
  }

  // int_e L_m^2 ds
  double norm2(int m) const { return length_ / (2.0 * m + 1.0); }

 private:
  int degree_;
  double length_;
};

}  // namespace wgns
