#include "gradshop/integrate.hpp"

#include <cmath>
#include <numbers>

namespace gradshop {

GradientField apply_diff(const SurfaceGrid& z) {
  const Matrix& Z = z.values();
  const Index m = Z.rows(), n = Z.cols();
  Matrix gx = Matrix::Zero(m, n);
  Matrix gy = Matrix::Zero(m, n);
  if (n > 1) gx.leftCols(n - 1) = Z.rightCols(n - 1) - Z.leftCols(n - 1);
  if (m > 1) gy.topRows(m - 1) = Z.bottomRows(m - 1) - Z.topRows(m - 1);
  return GradientField(std::move(gx), std::move(gy));
}

SurfaceGrid apply_diff_adjoint(const GradientField& g) {
  const Index m = g.rows(), n = g.cols();
  Matrix out = Matrix::Zero(m, n);
  // D^T maps u to (-u_0, u_0 - u_1, ..., u_{k-3} - u_{k-2}, u_{k-2}); the
  // last entry of u is ignored because D's last row is zero.
  if (n > 1) {
    const auto gx = g.gx().leftCols(n - 1);
    out.leftCols(n - 1) -= gx;
    out.rightCols(n - 1) += gx;
  }
  if (m > 1) {
    const auto gy = g.gy().topRows(m - 1);
    out.topRows(m - 1) -= gy;
    out.bottomRows(m - 1) += gy;
  }
  return SurfaceGrid(std::move(out));
}

namespace {

struct Residual {
  Matrix rx;
  Matrix ry;
};

Residual residual(const SurfaceGrid& z, const GradientField& g) {
  require_same_dims(z, g, "least-squares residual");
  const GradientField az = apply_diff(z);
  return {az.gx() - g.gx(), az.gy() - g.gy()};
}

}  // namespace

double ls_objective(const SurfaceGrid& z, const GradientField& g) {
  const Residual r = residual(z, g);
  return 0.5 * (r.rx.squaredNorm() + r.ry.squaredNorm());
}

SurfaceGrid ls_gradient(const SurfaceGrid& z, const GradientField& g) {
  Residual r = residual(z, g);
  return apply_diff_adjoint(GradientField(std::move(r.rx), std::move(r.ry)));
}

Matrix dct_matrix(Index n) {
  Matrix c(n, n);
  const double s0 = std::sqrt(1.0 / static_cast<double>(n));
  const double s = std::sqrt(2.0 / static_cast<double>(n));
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < n; ++j) {
      c(k, j) = (k == 0 ? s0 : s) *
                std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) *
                         static_cast<double>(k) / static_cast<double>(n));
    }
  }
  return c;
}

SurfaceGrid integrate_dct(const GradientField& g) {
  const Index m = g.rows(), n = g.cols();
  if (m < 2 || n < 2) {
    throw DimensionError("integrate_dct: need at least 2x2 grid");
  }
  const Matrix cm = dct_matrix(m);
  const Matrix cn = dct_matrix(n);

  // Normal equations A^T A z = A^T v, diagonal in the DCT-II basis.
  const Matrix rhs = apply_diff_adjoint(g).values();
  Matrix coeffs = cm * rhs * cn.transpose();

  auto eig = [](Index k, Index size) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(k) /
                              (2.0 * static_cast<double>(size)));
    return 4.0 * s * s;
  };
  Vector em(m), en(n);
  for (Index k = 0; k < m; ++k) em(k) = eig(k, m);
  for (Index k = 0; k < n; ++k) en(k) = eig(k, n);

  for (Index l = 0; l < n; ++l) {
    for (Index k = 0; k < m; ++k) {
      if (k == 0 && l == 0) {
        coeffs(k, l) = 0.0;
      } else {
        coeffs(k, l) /= em(k) + en(l);
      }
    }
  }
  return SurfaceGrid(cm.transpose() * coeffs * cn).mean_anchored();
}

}  // namespace gradshop
