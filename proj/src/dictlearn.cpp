#include "gradshop/dictlearn.hpp"

#include <cmath>
#include <random>
#include <string>

namespace gradshop {

Vector sparse_code_row(const Vector& correlations, double mu, double bound) {
  Vector out(correlations.size());
  for (Index t = 0; t < correlations.size(); ++t) {
    const double c = correlations(t);
    const double mag = std::abs(c);
    out(t) = mag <= mu ? 0.0 : std::copysign(std::min(mag, bound), c);
  }
  return out;
}

Vector update_atom(const Vector& weighted_residual) {
  const double nrm = weighted_residual.norm();
  if (nrm > 1e-12) return weighted_residual / nrm;
  const Index dim = weighted_residual.size();
  return Vector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
}

double dictionary_objective(const PatchMatrix& patches, const Dictionary& dict,
                            const SparseCodes& codes, double mu) {
  if (patches.patch_dim() != dict.atom_dim() ||
      dict.natoms() != codes.natoms() || codes.count() != patches.count()) {
    throw DimensionError("dictionary_objective: shape mismatch");
  }
  const Matrix resid = patches.data() - dict.atoms() * codes.codes();
  return resid.squaredNorm() + mu * mu * static_cast<double>(codes.nonzeros());
}

namespace {

class Sweeper {
 public:
  Sweeper(const Matrix& p, Matrix d, Matrix b, const SweepOptions& opts)
      : p_(p), d_(std::move(d)), b_(std::move(b)), opts_(opts),
        rng_(opts.seed) {}

  void run() {
    if (opts_.order == SweepOrder::codes_then_atoms) {
      codes_pass();
      atoms_pass();
    } else {
      for (Index i = 0; i < d_.cols(); ++i) {
        update_row(i, p_.transpose() * d_.col(i) -
                          b_.transpose() * (d_.transpose() * d_.col(i)));
        const Vector bi = b_.row(i).transpose();
        update_atom_at(i, p_ * bi - d_ * (b_ * bi), bi.squaredNorm());
      }
    }
  }

  Matrix& atoms() { return d_; }
  Matrix& codes() { return b_; }
  Index resets() const { return resets_; }

 private:
  // D fixed: P^T D and D^T D are computed once for the pass.
  void codes_pass() {
    const Matrix ptd = p_.transpose() * d_;
    const Matrix gram = d_.transpose() * d_;
    for (Index i = 0; i < d_.cols(); ++i) {
      update_row(i, ptd.col(i) - b_.transpose() * gram.col(i));
    }
  }

  // B fixed: P B^T and B B^T are computed once for the pass.
  void atoms_pass() {
    const Matrix pbt = p_ * b_.transpose();
    const Matrix bbt = b_ * b_.transpose();
    for (Index i = 0; i < d_.cols(); ++i) {
      update_atom_at(i, pbt.col(i) - d_ * bbt.col(i), bbt(i, i));
    }
  }

  // `pt_minus_btdt` is P^T d_i - B^T D^T d_i, so E_i^T d_i adds back
  // b_i (d_i^T d_i).
  void update_row(Index i, const Vector& pt_minus_btdt) {
    const Vector corr =
        pt_minus_btdt + b_.row(i).transpose() * d_.col(i).squaredNorm();
    b_.row(i) = sparse_code_row(corr, opts_.mu, opts_.bound).transpose();
    notify();
  }

  // `p_minus_db` is P b_i - D B b_i, so E_i b_i adds back d_i ||b_i||^2.
  void update_atom_at(Index i, const Vector& p_minus_db, double bi_sq) {
    if (bi_sq == 0.0) {
      switch (opts_.reset) {
        case AtomReset::keep:
          break;
        case AtomReset::dc:
          d_.col(i) = update_atom(Vector::Zero(d_.rows()));
          ++resets_;
          break;
        case AtomReset::random: {
          std::normal_distribution<double> gauss;
          Vector v(d_.rows());
          for (Index t = 0; t < v.size(); ++t) v(t) = gauss(rng_);
          d_.col(i) = update_atom(v);
          ++resets_;
          break;
        }
      }
    } else {
      d_.col(i) = update_atom(p_minus_db + d_.col(i) * bi_sq);
    }
    notify();
  }

  void notify() {
    if (opts_.observer) opts_.observer(d_, b_);
  }

  const Matrix& p_;
  Matrix d_;
  Matrix b_;
  const SweepOptions& opts_;
  std::mt19937_64 rng_;
  Index resets_ = 0;
};

}  // namespace

SweepResult soup_dil_sweep(const PatchMatrix& patches, Dictionary dict,
                           SparseCodes codes, const SweepOptions& opts) {
  if (!(opts.mu > 0.0)) throw ConfigError("soup_dil_sweep: mu must be > 0");
  if (!(opts.bound > 0.0)) {
    throw ConfigError("soup_dil_sweep: bound must be > 0");
  }
  if (patches.patch_dim() != dict.atom_dim() ||
      dict.natoms() != codes.natoms() || codes.count() != patches.count()) {
    throw DimensionError(
        "soup_dil_sweep: shape mismatch (patches " +
        std::to_string(patches.patch_dim()) + "x" +
        std::to_string(patches.count()) + ", dictionary " +
        std::to_string(dict.atom_dim()) + "x" + std::to_string(dict.natoms()) +
        ", codes " + std::to_string(codes.natoms()) + "x" +
        std::to_string(codes.count()) + ")");
  }

  Sweeper sweeper(patches.data(), dict.atoms(), codes.codes(), opts);
  sweeper.run();

  Dictionary out_dict(std::move(sweeper.atoms()));
  SparseCodes out_codes(std::move(sweeper.codes()), opts.bound);
  DictLearnStats stats;
  stats.objective = dictionary_objective(patches, out_dict, out_codes, opts.mu);
  stats.sparsity = out_codes.count() == 0
                       ? 0.0
                       : static_cast<double>(out_codes.nonzeros()) /
                             static_cast<double>(out_codes.codes().size());
  stats.atoms_reset = sweeper.resets();
  return {std::move(out_dict), std::move(out_codes), stats};
}

}  // namespace gradshop
