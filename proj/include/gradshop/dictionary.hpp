#pragma once

#include "gradshop/field.hpp"

namespace gradshop {

/// atom_dim x K matrix of unit-norm atoms (tolerance 1e-10).
class Dictionary {
 public:
  static constexpr double kNormTolerance = 1e-10;

  explicit Dictionary(Matrix atoms);

  Index atom_dim() const { return atoms_.rows(); }
  Index natoms() const { return atoms_.cols(); }
  const Matrix& atoms() const { return atoms_; }
  auto atom(Index i) const { return atoms_.col(i); }

 private:
  Matrix atoms_;
};

/// K x c code matrix; column j codes patch j. Every |entry| <= bound.
class SparseCodes {
 public:
  static constexpr double kDefaultBound = 1e6;

  /// All-zero codes.
  SparseCodes(Index natoms, Index count, double bound = kDefaultBound);
  SparseCodes(Matrix codes, double bound);

  Index natoms() const { return codes_.rows(); }
  Index count() const { return codes_.cols(); }
  const Matrix& codes() const { return codes_; }
  double bound() const { return bound_; }
  Index nonzeros() const { return (codes_.array() != 0.0).count(); }

 private:
  Matrix codes_;
  double bound_;
};

}  // namespace gradshop
