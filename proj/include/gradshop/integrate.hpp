#pragma once

// Discrete least-squares surface integration.
//
// A = [D_n (x) I_m ; I_n (x) D_m] where D_k is the k x k forward-difference
// matrix whose last row is zero. In grid form A z is the pair
// (Z D_n^T, D_m Z), so gradient fields keep the shape of the surface and the
// last column of gx / last row of gy are never constrained.

#include "gradshop/field.hpp"

namespace gradshop {

/// Forward differences: gx(i,j) = Z(i,j+1) - Z(i,j), gy(i,j) = Z(i+1,j) - Z(i,j),
/// zero in the last column / row respectively.
GradientField apply_diff(const SurfaceGrid& z);

/// A^T applied to a stacked gradient field (a negative divergence).
SurfaceGrid apply_diff_adjoint(const GradientField& g);

/// 0.5 * ||A z - v||^2.
double ls_objective(const SurfaceGrid& z, const GradientField& g);

/// A^T (A z - v).
SurfaceGrid ls_gradient(const SurfaceGrid& z, const GradientField& g);

/// Zero-mean minimizer of ||A z - v||^2.
///
/// A^T A is the Neumann Laplacian, which the orthonormal type-II DCT
/// diagonalizes exactly; the constant mode (eigenvalue zero) is set to zero.
/// Requires at least 2 rows and 2 columns.
SurfaceGrid integrate_dct(const GradientField& g);

/// Orthonormal n x n DCT-II matrix: C(k, j) = s_k cos(pi (j + 1/2) k / n).
Matrix dct_matrix(Index n);

}  // namespace gradshop
