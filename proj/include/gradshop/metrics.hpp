#pragma once

#include "gradshop/field.hpp"

#include <optional>

namespace gradshop {

/// Gaussian-window SSIM parameters. The defaults are the canonical
/// 11 x 11, sigma 1.5, K1 = 0.01, K2 = 0.03 settings.
struct SsimConfig {
  Index window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  /// Dynamic range L; nullopt means max - min of the reference.
  std::optional<double> dynamic_range;
  /// Subtract each input's mean first.
  bool align = true;

  void validate() const;
};

/// Mean of the local SSIM map over every window position that fits
/// entirely inside the grid (no padding).
double ssim(const SurfaceGrid& candidate, const SurfaceGrid& reference,
            const SsimConfig& cfg = {});

/// Local SSIM map, (rows - window + 1) x (cols - window + 1).
Matrix ssim_map(const SurfaceGrid& candidate, const SurfaceGrid& reference,
                const SsimConfig& cfg = {});

/// Normalized window weights (sum to 1).
Matrix gaussian_window(Index size, double sigma);

/// RMS difference after removing each grid's mean.
double rmse_aligned(const SurfaceGrid& candidate,
                    const SurfaceGrid& reference);

}  // namespace gradshop
