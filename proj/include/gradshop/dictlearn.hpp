#pragma once

// Block coordinate descent for
//
//   min_{D,B} ||P - D B||_F^2 + mu^2 ||B||_0
//   s.t. ||d_i||_2 = 1, ||b_j||_inf <= a.
//
// With everything but row i of B fixed, the minimizer is a hard threshold of
// E_i^T d_i at mu, where E_i = P - D B + d_i b_i^T. With everything but atom
// d_i fixed it is E_i b_i normalized. Both updates are exact, so the
// objective never increases.

#include "gradshop/dictionary.hpp"
#include "gradshop/patches.hpp"

#include <cstdint>
#include <functional>

namespace gradshop {

/// What to do with an atom whose code row is entirely zero.
enum class AtomReset {
  keep,    // leave the atom as is
  dc,      // replace with the constant atom
  random,  // replace with a seeded random unit vector
};

enum class SweepOrder {
  codes_then_atoms,  // every code row, then every atom
  interleaved,       // row i then atom i, for i = 0..K-1
};

struct SweepOptions {
  double mu = 0.01;
  double bound = SparseCodes::kDefaultBound;
  AtomReset reset = AtomReset::keep;
  SweepOrder order = SweepOrder::codes_then_atoms;
  std::uint64_t seed = 0;
  /// Called after every row update and every atom update with the current
  /// atoms and codes. Intended for instrumentation in tests.
  std::function<void(const Matrix& atoms, const Matrix& codes)> observer;
};

struct DictLearnStats {
  double objective = 0.0;  // ||P - DB||_F^2 + mu^2 ||B||_0 after the sweep
  double sparsity = 0.0;   // fraction of nonzero codes
  Index atoms_reset = 0;
};

struct SweepResult {
  Dictionary dictionary;
  SparseCodes codes;
  DictLearnStats stats;
};

/// out_t = 0 if |corr_t| <= mu, else sign(corr_t) * min(|corr_t|, bound).
Vector sparse_code_row(const Vector& correlations, double mu, double bound);

/// weighted_residual normalized, or the constant atom when its norm is
/// <= 1e-12.
Vector update_atom(const Vector& weighted_residual);

/// ||P - D B||_F^2 + mu^2 ||B||_0.
double dictionary_objective(const PatchMatrix& patches, const Dictionary& dict,
                            const SparseCodes& codes, double mu);

/// One pass over all K (row, atom) blocks.
SweepResult soup_dil_sweep(const PatchMatrix& patches, Dictionary dict,
                           SparseCodes codes, const SweepOptions& opts);

}  // namespace gradshop
