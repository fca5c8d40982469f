#include "gradshop/field.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace gradshop {

bool all_finite(const Matrix& m) { return m.allFinite(); }

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw DomainError(std::string(what) + ": non-finite value");
  }
}

void require_nonempty(Index rows, Index cols, const char* what) {
  if (rows < 1 || cols < 1) {
    throw DimensionError(std::string(what) + ": empty grid");
  }
}

}  // namespace

SurfaceGrid::SurfaceGrid(Index rows, Index cols) {
  require_nonempty(rows, cols, "SurfaceGrid");
  values_ = Matrix::Zero(rows, cols);
}

SurfaceGrid::SurfaceGrid(Matrix values) : values_(std::move(values)) {
  require_nonempty(values_.rows(), values_.cols(), "SurfaceGrid");
  require_finite(values_, "SurfaceGrid");
}

SurfaceGrid SurfaceGrid::from_vec(Index rows, Index cols, const Vector& v) {
  if (v.size() != rows * cols) {
    throw DimensionError("SurfaceGrid::from_vec: size mismatch");
  }
  return SurfaceGrid(Eigen::Map<const Matrix>(v.data(), rows, cols));
}

Vector SurfaceGrid::vec() const {
  return Eigen::Map<const Vector>(values_.data(), values_.size());
}

SurfaceGrid SurfaceGrid::mean_anchored() const {
  return SurfaceGrid(values_.array() - values_.mean());
}

GradientField::GradientField(Index rows, Index cols) {
  require_nonempty(rows, cols, "GradientField");
  gx_ = Matrix::Zero(rows, cols);
  gy_ = Matrix::Zero(rows, cols);
}

GradientField::GradientField(Matrix gx, Matrix gy)
    : gx_(std::move(gx)), gy_(std::move(gy)) {
  require_nonempty(gx_.rows(), gx_.cols(), "GradientField");
  require_same_dims(gx_, gy_, "GradientField");
  require_finite(gx_, "GradientField gx");
  require_finite(gy_, "GradientField gy");
}

Vector GradientField::stacked() const {
  Vector v(2 * gx_.size());
  v.head(gx_.size()) = Eigen::Map<const Vector>(gx_.data(), gx_.size());
  v.tail(gy_.size()) = Eigen::Map<const Vector>(gy_.data(), gy_.size());
  return v;
}

double GradientField::norm() const {
  return std::sqrt(gx_.squaredNorm() + gy_.squaredNorm());
}

NormalMap::NormalMap(Matrix n1, Matrix n2, Matrix n3, double nz_min)
    : NormalMap(std::move(n1), std::move(n2), std::move(n3),
                BoolMatrix::Constant(0, 0, false), nz_min) {}

NormalMap::NormalMap(Matrix n1, Matrix n2, Matrix n3, BoolMatrix degenerate,
                     double nz_min)
    : n1_(std::move(n1)), n2_(std::move(n2)), n3_(std::move(n3)) {
  require_nonempty(n1_.rows(), n1_.cols(), "NormalMap");
  require_same_dims(n1_, n2_, "NormalMap");
  require_same_dims(n1_, n3_, "NormalMap");
  if (degenerate.size() == 0) {
    degenerate = BoolMatrix::Constant(n1_.rows(), n1_.cols(), false);
  }
  require_same_dims(n1_, degenerate, "NormalMap mask");
  degenerate_ = std::move(degenerate);

  for (Index c = 0; c < n1_.cols(); ++c) {
    for (Index r = 0; r < n1_.rows(); ++r) {
      const double a = n1_(r, c), b = n2_(r, c), z = n3_(r, c);
      const double len = std::sqrt(a * a + b * b + z * z);
      bool bad = degenerate_(r, c) || !std::isfinite(len) || len <= 1e-12;
      if (!bad && z / len < nz_min) bad = true;
      if (bad) {
        degenerate_(r, c) = true;
        n1_(r, c) = 0.0;
        n2_(r, c) = 0.0;
        n3_(r, c) = 1.0;
      } else {
        n1_(r, c) = a / len;
        n2_(r, c) = b / len;
        n3_(r, c) = z / len;
      }
    }
  }
}

void PatchConfig::validate() const {
  if (patch_h < 1 || patch_w < 1 || stride < 1) {
    throw ConfigError("PatchConfig: patch sizes and stride must be positive");
  }
  if (stride > std::min(patch_h, patch_w)) {
    throw ConfigError("PatchConfig: stride exceeds patch size");
  }
}

}  // namespace gradshop
