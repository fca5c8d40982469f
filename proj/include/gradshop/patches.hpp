#pragma once

// Overlapping patch operators. Patch j is the patch_h x patch_w block whose
// top-left pixel is origin j; inside a patch, pixels are vectorized
// column-major, matching the layout of the dictionary atoms.

#include "gradshop/dictionary.hpp"
#include "gradshop/field.hpp"

#include <utility>
#include <vector>

namespace gradshop {

struct PatchOrigin {
  Index row = 0;
  Index col = 0;
  friend bool operator==(const PatchOrigin&, const PatchOrigin&) = default;
};

/// (patch_h * patch_w) x count matrix of vectorized patches.
class PatchMatrix {
 public:
  explicit PatchMatrix(Matrix data) : data_(std::move(data)) {}

  Index patch_dim() const { return data_.rows(); }
  Index count() const { return data_.cols(); }
  const Matrix& data() const { return data_; }

 private:
  Matrix data_;
};

/// Origins {0, s, 2s, ...} per axis, plus dim - patch when clamping and the
/// last aligned origin leaves pixels uncovered. Row-major lexicographic order.
std::vector<PatchOrigin> patch_indices(Index rows, Index cols,
                                       const PatchConfig& cfg);

/// Origins along one axis.
std::vector<Index> axis_origins(Index dim, Index patch, Index stride,
                                bool clamp);

PatchMatrix extract_patches(const SurfaceGrid& z, const PatchConfig& cfg);

/// Scatter-add of every patch column back to its origin (adjoint of extract).
SurfaceGrid accumulate_patches(const PatchMatrix& pm, const PatchConfig& cfg,
                               Index rows, Index cols);

/// Number of patches covering each pixel.
SurfaceGrid coverage_counts(const PatchConfig& cfg, Index rows, Index cols);

/// Separable orthonormal 2-D DCT-II atoms ordered by ascending total
/// frequency; atom 0 is the constant. Rejects natoms > patch_h * patch_w.
Dictionary dct_dictionary(Index patch_h, Index patch_w, Index natoms);

}  // namespace gradshop
