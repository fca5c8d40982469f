#include "gradshop/dls.hpp"

#include "gradshop/integrate.hpp"
#include "gradshop/patches.hpp"

#include <cmath>
#include <iostream>

namespace gradshop {

void DlsConfig::validate() const {
  if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
  if (!(mu > 0.0)) throw ConfigError("mu must be > 0");
  if (!(bound_a > 0.0)) throw ConfigError("bound_a must be > 0");
  if (!(tau > 0.0)) throw ConfigError("tau must be > 0");
  if (tau > 0.125) {
    if (!allow_large_tau) {
      throw ConfigError("tau > 1/8 exceeds the step-size bound; set "
                        "allow_large_tau to override");
    }
    std::cerr << "warning: tau = " << tau
              << " > 1/8, monotone descent is not guaranteed\n";
  }
  if (outer_iters < 0) throw ConfigError("outer_iters must be >= 0");
  if (prox_steps_per_outer < 1) {
    throw ConfigError("prox_steps_per_outer must be >= 1");
  }
  if (sweeps_per_outer < 1) throw ConfigError("sweeps_per_outer must be >= 1");
  if (!(rel_tol >= 0.0)) throw ConfigError("rel_tol must be >= 0");
  if (natoms < 1) throw ConfigError("natoms must be >= 1");
  patch.validate();
}

namespace {

void require_consistent(const SurfaceGrid& z, const GradientField& g,
                        const Dictionary& dict, const SparseCodes& codes,
                        const DlsConfig& cfg, Index npatches) {
  require_same_dims(z, g, "joint objective");
  if (dict.atom_dim() != cfg.patch.patch_dim() ||
      codes.natoms() != dict.natoms() || codes.count() != npatches) {
    throw DimensionError("dictionary / codes do not match the patch layout");
  }
}

// State that stays fixed while (D, B) is fixed: the diagonal of the prox
// system and the accumulated dictionary fit sum_j P_j^T D b_j.
struct ProxSystem {
  Matrix diag;
  Matrix rhs_patch;  // 2 tau lambda sum_j P_j^T D b_j
  double tau;
};

ProxSystem make_prox_system(const Dictionary& dict, const SparseCodes& codes,
                            const DlsConfig& cfg, Index rows, Index cols) {
  const double w = 2.0 * cfg.tau * cfg.lambda;
  const SurfaceGrid cover = coverage_counts(cfg.patch, rows, cols);
  const SurfaceGrid fit = accumulate_patches(
      PatchMatrix(dict.atoms() * codes.codes()), cfg.patch, rows, cols);
  return {(1.0 + w * cover.values().array()).matrix(), w * fit.values(),
          cfg.tau};
}

SurfaceGrid prox_step(const ProxSystem& sys, const SurfaceGrid& z,
                      const GradientField& g) {
  const Matrix zt = z.values() - sys.tau * ls_gradient(z, g).values();
  return SurfaceGrid(
      ((zt + sys.rhs_patch).array() / sys.diag.array()).matrix());
}

}  // namespace

ObjectiveTerms joint_objective_terms(const SurfaceGrid& z,
                                     const GradientField& g,
                                     const Dictionary& dict,
                                     const SparseCodes& codes,
                                     const DlsConfig& cfg) {
  const PatchMatrix pm = extract_patches(z, cfg.patch);
  require_consistent(z, g, dict, codes, cfg, pm.count());
  ObjectiveTerms t;
  t.data = ls_objective(z, g);
  t.patch_fit = (pm.data() - dict.atoms() * codes.codes()).squaredNorm();
  t.l0 = codes.nonzeros();
  t.total = t.data + cfg.lambda * (t.patch_fit + cfg.mu * cfg.mu *
                                                     static_cast<double>(t.l0));
  return t;
}

double joint_objective(const SurfaceGrid& z, const GradientField& g,
                       const Dictionary& dict, const SparseCodes& codes,
                       const DlsConfig& cfg) {
  return joint_objective_terms(z, g, dict, codes, cfg).total;
}

SurfaceGrid z_prox_step(const SurfaceGrid& z, const GradientField& g,
                        const Dictionary& dict, const SparseCodes& codes,
                        const DlsConfig& cfg) {
  const Index npatches = static_cast<Index>(
      patch_indices(z.rows(), z.cols(), cfg.patch).size());
  require_consistent(z, g, dict, codes, cfg, npatches);
  return prox_step(make_prox_system(dict, codes, cfg, z.rows(), z.cols()), z,
                   g);
}

DlsResult dls_reconstruct(const GradientField& g, const DlsConfig& cfg) {
  cfg.validate();
  const Index rows = g.rows(), cols = g.cols();
  if (rows < cfg.patch.patch_h || cols < cfg.patch.patch_w) {
    throw DimensionError("dls_reconstruct: grid smaller than patch");
  }
  if (rows < 2 || cols < 2) {
    throw DimensionError("dls_reconstruct: need at least 2x2 grid");
  }

  SurfaceGrid z = integrate_dct(g);
  Dictionary dict =
      dct_dictionary(cfg.patch.patch_h, cfg.patch.patch_w, cfg.natoms);
  const Index npatches =
      static_cast<Index>(patch_indices(rows, cols, cfg.patch).size());
  SparseCodes codes(cfg.natoms, npatches, cfg.bound_a);

  SweepOptions sweep;
  sweep.mu = cfg.mu;
  sweep.bound = cfg.bound_a;
  sweep.reset = cfg.atom_reset;
  sweep.order = cfg.sweep_order;

  auto record = [&](int iter, double rel_change) {
    const ObjectiveTerms t = joint_objective_terms(z, g, dict, codes, cfg);
    return DlsTraceRow{iter, t.total, t.data, t.patch_fit, t.l0, rel_change};
  };

  DlsTrace trace;
  trace.push_back(record(0, 0.0));

  for (int it = 1; it <= cfg.outer_iters; ++it) {
    const PatchMatrix patches = extract_patches(z, cfg.patch);
    for (int s = 0; s < cfg.sweeps_per_outer; ++s) {
      // Distinct, reproducible stream per sweep for seeded atom resets.
      sweep.seed = cfg.seed + static_cast<std::uint64_t>(it) * 1000003u +
                   static_cast<std::uint64_t>(s);
      SweepResult res = soup_dil_sweep(patches, std::move(dict),
                                       std::move(codes), sweep);
      dict = std::move(res.dictionary);
      codes = std::move(res.codes);
    }

    const Matrix z_prev = z.values();
    const ProxSystem sys = make_prox_system(dict, codes, cfg, rows, cols);
    for (int k = 0; k < cfg.prox_steps_per_outer; ++k) {
      z = prox_step(sys, z, g);
    }

    const double prev_norm = z_prev.norm();
    const double change = (z.values() - z_prev).norm();
    const double rel = prev_norm > 0.0 ? change / prev_norm
                                       : (change > 0.0 ? INFINITY : 0.0);
    trace.push_back(record(it, rel));
    if (rel < cfg.rel_tol) break;
  }

  return {z.mean_anchored(), std::move(dict), std::move(codes),
          std::move(trace)};
}

}  // namespace gradshop
