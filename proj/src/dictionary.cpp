#include "gradshop/dictionary.hpp"

#include <cmath>
#include <utility>

namespace gradshop {

Dictionary::Dictionary(Matrix atoms) : atoms_(std::move(atoms)) {
  if (atoms_.size() == 0) throw DimensionError("Dictionary: empty");
  if (!atoms_.allFinite()) throw DomainError("Dictionary: non-finite atom");
  for (Index i = 0; i < atoms_.cols(); ++i) {
    if (std::abs(atoms_.col(i).norm() - 1.0) > kNormTolerance) {
      throw DomainError("Dictionary: atom " + std::to_string(i) +
                        " is not unit norm");
    }
  }
}

SparseCodes::SparseCodes(Index natoms, Index count, double bound)
    : codes_(Matrix::Zero(natoms, count)), bound_(bound) {
  if (!(bound > 0.0)) throw ConfigError("SparseCodes: bound must be > 0");
}

SparseCodes::SparseCodes(Matrix codes, double bound)
    : codes_(std::move(codes)), bound_(bound) {
  if (!(bound > 0.0)) throw ConfigError("SparseCodes: bound must be > 0");
  if (!codes_.allFinite()) throw DomainError("SparseCodes: non-finite code");
  if (codes_.size() > 0 && codes_.cwiseAbs().maxCoeff() > bound_) {
    throw DomainError("SparseCodes: code exceeds bound");
  }
}

}  // namespace gradshop
