#pragma once

// Lambertian photometric stereo with known distant lights, and the
// normal <-> gradient conversion p = n1/n3, q = n2/n3.

#include "gradshop/field.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gradshop {

/// L >= 3 unit light directions (rows of an L x 3 matrix), rank 3.
class LightingSet {
 public:
  static constexpr double kWarnCondition = 1e6;

  /// Normalizes every row. Throws DomainError for L < 3, zero rows or rank
  /// deficiency; warns on stderr when the condition number exceeds 1e6.
  explicit LightingSet(Eigen::MatrixX3d directions);

  Index count() const { return directions_.rows(); }
  const Eigen::MatrixX3d& directions() const { return directions_; }
  double condition_number() const { return condition_; }

 private:
  Eigen::MatrixX3d directions_;
  double condition_ = 0.0;
};

/// L images of identical size with finite, nonnegative intensities.
class ImageStack {
 public:
  explicit ImageStack(std::vector<Matrix> images);

  Index count() const { return static_cast<Index>(images_.size()); }
  Index rows() const { return images_.front().rows(); }
  Index cols() const { return images_.front().cols(); }
  const std::vector<Matrix>& images() const { return images_; }

 private:
  std::vector<Matrix> images_;
};

/// Signs applied when turning p, q into target derivatives:
/// gx = flip_x ? -p : p, gy = flip_y ? -q : q.
struct SignConvention {
  bool flip_x = true;
  bool flip_y = false;
};

struct NormalOptions {
  double nz_min = NormalMap::kDefaultNzMin;
  /// When > 0, intensities <= this value are excluded from the per-pixel
  /// solve (shadow rejection). Pixels left with fewer than 3 usable
  /// lights are degenerate. Off by default.
  double shadow_threshold = 0.0;
};

/// Per-pixel least squares min_g ||L g - I||; normal = g / ||g||.
NormalMap estimate_normals(const ImageStack& images, const LightingSet& lights,
                           const NormalOptions& opts = {});

/// Degenerate pixels map to a zero gradient.
GradientField normals_to_gradients(const NormalMap& normals,
                                   const SignConvention& conv = {});

/// Inverse of normals_to_gradients: n proportional to (p, q, 1).
NormalMap gradients_to_normals(const GradientField& g,
                               const SignConvention& conv = {});

/// intensity = albedo * max(0, n . l) with normals from the forward
/// differences of z under `conv`.
ImageStack render_lambertian(const SurfaceGrid& z, const LightingSet& lights,
                             double albedo, const SignConvention& conv = {});

/// Adds Gaussian noise at an exact stack-wide SNR (see add_noise_snr), then
/// clamps negative intensities to zero.
ImageStack add_image_noise_snr(const ImageStack& images, double snr_db,
                               std::uint64_t seed);

}  // namespace gradshop
