#pragma once

// Synthetic ground-truth surfaces with analytic gradients, and Gaussian
// noise injection at an exactly realized SNR.
//
// Both surfaces live on [-1, 1]^2 sampled at x_j = -1 + 2 j / (cols - 1),
// y_i = -1 + 2 i / (rows - 1). Gradients are returned per pixel (chain rule
// through the sampling), so that they integrate back to the sampled heights
// with unit grid spacing.
//
//   tent: a * max(0, 1 - max(|x|, |y|))
//   vase: a * sqrt(max(0, r(y)^2 - x^2)),  r(y) = 0.4 + 0.3 (1 - y^2)(1 + y/2)

#include "gradshop/field.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace gradshop {

enum class SurfaceKind { tent, vase };

SurfaceKind parse_surface_kind(std::string_view name);
std::string_view to_string(SurfaceKind kind);

struct SynthSpec {
  SurfaceKind kind = SurfaceKind::tent;
  Index rows = 128;
  Index cols = 128;
  double amplitude = 1.0;
};

struct SyntheticSurface {
  SurfaceGrid surface;
  GradientField gradients;
};

/// Height and exact partial derivatives at the grid points. On tent creases
/// the midpoint of the one-sided derivatives is used.
SyntheticSurface make_surface(const SynthSpec& spec);

/// Continuous surface value at (x, y) in [-1, 1]^2.
double surface_value(SurfaceKind kind, double amplitude, double x, double y);

/// g + n, with n i.i.d. Gaussian from a seeded generator rescaled so that
/// 20 log10(||g|| / ||n||) equals snr_db exactly (norms over the stacked
/// field). Throws DomainError when g is identically zero.
GradientField add_noise_snr(const GradientField& g, double snr_db,
                            std::uint64_t seed);

/// Same rule applied jointly to a list of matrices.
std::vector<Matrix> add_noise_snr(std::span<const Matrix> signal,
                                  double snr_db, std::uint64_t seed);

/// 20 log10(||signal|| / ||noisy - signal||) over the stacked matrices.
double realized_snr_db(std::span<const Matrix> signal,
                       std::span<const Matrix> noisy);

}  // namespace gradshop
