#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "wgns/forms.hpp"
#include "wgns/quadrature.hpp"

namespace wgns {

// A manufactured stationary flow on a rectangle. The pseudostress is
//   sigma = nu grad(u) - [u tensor u] - (p + r) I,  r = -1/(2|O|) int |u|^2,
// with the convective parts dropped when `convective` is false. The body
// force and boundary data are derived from the closures, so the triple
// (f, g, exact fields) is consistent by construction.
struct ManufacturedCase {
  Rect rect;
  double nu = 0.1;
  bool convective = true;
  double r_u = 0.0;  // mean-trace shift, fixed at construction

  std::function<Vec2(const Vec2&)> u;
  std::function<Mat2(const Vec2&)> grad_u;   // (grad u)_{ij} = d_j u_i
  std::function<Vec2(const Vec2&)> laplace_u;
  std::function<double(const Vec2&)> p;
  std::function<Vec2(const Vec2&)> grad_p;

  Vec2 f(const Vec2& x) const {
    Vec2 val = -nu * laplace_u(x) + grad_p(x);
    if (convective) val += grad_u(x) * u(x);  // (u . grad) u
    return val;
  }

  Mat2 sigma(const Vec2& x) const {
    Mat2 s = nu * grad_u(x);
    const double shift = p(x) + r_u;
    s(0, 0) -= shift;
    s(1, 1) -= shift;
    if (convective) {
      const Vec2 uv = u(x);
      s -= uv * uv.transpose();
    }
    return s;
  }

  Vec2 g(const Vec2& x) const { return u(x); }

  ProblemData data() const {
    return {[this](const Vec2& x) { return f(x); }, [this](const Vec2& x) { return g(x); }};
  }
};

namespace detail {

// int_rect |u|^2 with a fixed 64x64 panel Gauss rule; accurate to roundoff
// for smooth fields and independent of any mesh.
inline double rect_velocity_energy(const Rect& r, const std::function<Vec2(const Vec2&)>& u) {
  const int panels = 64, npt = 10;
  const auto& gl = gauss_legendre(npt);
  const double hx = r.width() / panels, hy = r.height() / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i)
    for (int j = 0; j < panels; ++j) {
      const double cx = r.x0 + (i + 0.5) * hx, cy = r.y0 + (j + 0.5) * hy;
      for (int a = 0; a < npt; ++a)
        for (int b = 0; b < npt; ++b) {
          const Vec2 x(cx + 0.5 * hx * gl.x[a], cy + 0.5 * hy * gl.x[b]);
          s += 0.25 * hx * hy * gl.w[a] * gl.w[b] * u(x).squaredNorm();
        }
    }
  return s;
}

}  // namespace detail

inline void finalize_case(ManufacturedCase& mc) {
  mc.r_u = mc.convective
               ? -detail::rect_velocity_energy(mc.rect, mc.u) /
                     (2.0 * mc.rect.width() * mc.rect.height())
               : 0.0;
}

// Smooth benchmark flow on the unit square:
//   u1 = x^2 e^{-x} (1+y) (2 sin(1+y) + (1+y) cos(1+y))
//   u2 = x (x-2) e^{-x} (1+y)^2 sin(1+y)
//   p  = sin(2 pi x) sin(2 pi y)
// Divergence-free with u = 0 on the left edge; p has zero mean.
inline ManufacturedCase benchmark_flow(double nu, bool convective = true) {
  ManufacturedCase mc;
  mc.rect = Rect{0.0, 0.0, 1.0, 1.0};
  mc.nu = nu;
  mc.convective = convective;

  // Separable factors: u1 = X(x) W(t), u2 = Z(x) V(t) with t = 1 + y,
  // Z = -X' and V' = W, which is what makes div u vanish.
  auto X = [](double x) { return x * x * std::exp(-x); };
  auto Xp = [](double x) { return (2.0 * x - x * x) * std::exp(-x); };
  auto Xpp = [](double x) { return (2.0 - 4.0 * x + x * x) * std::exp(-x); };
  auto Xppp = [](double x) { return (-6.0 + 6.0 * x - x * x) * std::exp(-x); };
  auto W = [](double t) { return 2.0 * t * std::sin(t) + t * t * std::cos(t); };
  auto Wp = [](double t) {
    return 2.0 * std::sin(t) + 4.0 * t * std::cos(t) - t * t * std::sin(t);
  };
  auto Wpp = [](double t) {
    return 6.0 * std::cos(t) - 6.0 * t * std::sin(t) - t * t * std::cos(t);
  };
  auto V = [](double t) { return t * t * std::sin(t); };

  mc.u = [=](const Vec2& xy) {
    const double t = 1.0 + xy.y();
    return Vec2(X(xy.x()) * W(t), -Xp(xy.x()) * V(t));
  };
  mc.grad_u = [=](const Vec2& xy) {
    const double x = xy.x(), t = 1.0 + xy.y();
    Mat2 g;
    g(0, 0) = Xp(x) * W(t);
    g(0, 1) = X(x) * Wp(t);
    g(1, 0) = -Xpp(x) * V(t);
    g(1, 1) = -Xp(x) * W(t);  // V' = W
    return g;
  };
  mc.laplace_u = [=](const Vec2& xy) {
    const double x = xy.x(), t = 1.0 + xy.y();
    return Vec2(Xpp(x) * W(t) + X(x) * Wpp(t), -Xppp(x) * V(t) - Xp(x) * Wp(t));
  };

  const double two_pi = 2.0 * std::numbers::pi;
  mc.p = [=](const Vec2& xy) { return std::sin(two_pi * xy.x()) * std::sin(two_pi * xy.y()); };
  mc.grad_p = [=](const Vec2& xy) {
    return Vec2(two_pi * std::cos(two_pi * xy.x()) * std::sin(two_pi * xy.y()),
                two_pi * std::sin(two_pi * xy.x()) * std::cos(two_pi * xy.y()));
  };

  finalize_case(mc);
  return mc;
}

}  // namespace wgns
