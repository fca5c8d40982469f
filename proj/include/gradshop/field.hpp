#pragma once

// Grid-valued data shared by every stage of the pipeline.
//
// Conventions: pixel spacing is 1 in both axes, the row index grows with y
// and the column index with x. Vectorization stacks columns (Eigen's native
// column-major order), so gx differences neighbouring columns and gy
// neighbouring rows.

#include "gradshop/errors.hpp"

#include <Eigen/Dense>

#include <string>

namespace gradshop {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Dense m x n height map. Immutable once built; all values finite.
class SurfaceGrid {
 public:
  /// Zero surface.
  SurfaceGrid(Index rows, Index cols);
  explicit SurfaceGrid(Matrix values);

  /// Inverse of vec(): reshapes a column-stacked vector.
  static SurfaceGrid from_vec(Index rows, Index cols, const Vector& v);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  double operator()(Index r, Index c) const { return values_(r, c); }

  /// Column-stacked copy of the values.
  Vector vec() const;

  double mean() const { return values_.mean(); }
  /// Copy shifted so that its mean is zero.
  SurfaceGrid mean_anchored() const;

 private:
  Matrix values_;
};

/// Target derivatives (gx along columns, gy along rows) of a surface.
class GradientField {
 public:
  GradientField(Index rows, Index cols);
  GradientField(Matrix gx, Matrix gy);

  Index rows() const { return gx_.rows(); }
  Index cols() const { return gx_.cols(); }
  const Matrix& gx() const { return gx_; }
  const Matrix& gy() const { return gy_; }

  /// [vec(gx); vec(gy)].
  Vector stacked() const;
  /// Frobenius norm of the stacked field.
  double norm() const;

 private:
  Matrix gx_;
  Matrix gy_;
};

/// Per-pixel unit normals plus a mask of pixels where no normal exists.
///
/// Construction normalizes the input vectors. A pixel whose vector has
/// norm <= 1e-12 or whose normalized z component is below `nz_min` is
/// marked degenerate and stored as (0, 0, 1).
class NormalMap {
 public:
  static constexpr double kDefaultNzMin = 1e-6;

  NormalMap(Matrix n1, Matrix n2, Matrix n3, double nz_min = kDefaultNzMin);
  NormalMap(Matrix n1, Matrix n2, Matrix n3, BoolMatrix degenerate,
            double nz_min = kDefaultNzMin);

  Index rows() const { return n1_.rows(); }
  Index cols() const { return n1_.cols(); }
  const Matrix& n1() const { return n1_; }
  const Matrix& n2() const { return n2_; }
  const Matrix& n3() const { return n3_; }
  const BoolMatrix& degenerate() const { return degenerate_; }
  Eigen::Vector3d at(Index r, Index c) const {
    return {n1_(r, c), n2_(r, c), n3_(r, c)};
  }
  Index degenerate_count() const { return degenerate_.count(); }

 private:
  Matrix n1_;
  Matrix n2_;
  Matrix n3_;
  BoolMatrix degenerate_;
};

/// Overlapping square-ish patch geometry.
struct PatchConfig {
  Index patch_h = 8;
  Index patch_w = 8;
  Index stride = 2;
  bool clamp_boundary = true;

  Index patch_dim() const { return patch_h * patch_w; }
  /// Throws ConfigError unless sizes are positive and stride fits the patch.
  void validate() const;
};

/// True iff both objects have identical row and column counts.
template <class A, class B>
bool validate_dims(const A& a, const B& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

bool all_finite(const Matrix& m);

/// Throws DimensionError naming `what` when dimensions differ.
template <class A, class B>
void require_same_dims(const A& a, const B& b, const char* what) {
  if (!validate_dims(a, b)) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + ")");
  }
}

}  // namespace gradshop
