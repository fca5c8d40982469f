#pragma once

// Joint integration and patch sparse coding:
//
//   min_{z,D,B} 1/2 ||A z - v||^2
//               + lambda (sum_j ||P_j z - D b_j||^2 + mu^2 ||B||_0)
//
// solved by alternating one (D, B) block-coordinate sweep with a few
// proximal-gradient steps on z. The prox of the patch-fit term is a
// diagonal solve because sum_j P_j^T P_j is the coverage-count diagonal.

#include "gradshop/dictlearn.hpp"
#include "gradshop/field.hpp"

#include <cstdint>
#include <vector>

namespace gradshop {

struct DlsConfig {
  double lambda = 0.1;
  double mu = 0.01;
  double bound_a = SparseCodes::kDefaultBound;
  double tau = 0.125;  // 1 / ||A||^2 upper bound
  int outer_iters = 30;
  int prox_steps_per_outer = 5;
  double rel_tol = 1e-6;
  PatchConfig patch;
  Index natoms = 64;
  std::uint64_t seed = 0;
  int sweeps_per_outer = 1;
  /// Permit tau > 1/8 (descent is then no longer guaranteed).
  bool allow_large_tau = false;
  AtomReset atom_reset = AtomReset::keep;
  SweepOrder sweep_order = SweepOrder::codes_then_atoms;

  /// Throws ConfigError on any out-of-range value.
  void validate() const;
};

struct ObjectiveTerms {
  double data = 0.0;       // 1/2 ||A z - v||^2
  double patch_fit = 0.0;  // sum_j ||P_j z - D b_j||^2
  Index l0 = 0;            // ||B||_0
  double total = 0.0;      // data + lambda (patch_fit + mu^2 l0)
};

struct DlsTraceRow {
  int iteration = 0;  // 0 is the initial state
  double objective = 0.0;
  double data_term = 0.0;
  double patch_fit = 0.0;
  Index l0_count = 0;
  double rel_change = 0.0;  // ||z_k - z_{k-1}||_F / ||z_{k-1}||_F
};

using DlsTrace = std::vector<DlsTraceRow>;

struct DlsResult {
  SurfaceGrid surface;
  Dictionary dictionary;
  SparseCodes codes;
  DlsTrace trace;
};

ObjectiveTerms joint_objective_terms(const SurfaceGrid& z,
                                     const GradientField& g,
                                     const Dictionary& dict,
                                     const SparseCodes& codes,
                                     const DlsConfig& cfg);

double joint_objective(const SurfaceGrid& z, const GradientField& g,
                       const Dictionary& dict, const SparseCodes& codes,
                       const DlsConfig& cfg);

/// One proximal-gradient step on z with (D, B) fixed:
///   zt = z - tau grad f(z)
///   (I + 2 tau lambda C) z+ = zt + 2 tau lambda sum_j P_j^T D b_j
SurfaceGrid z_prox_step(const SurfaceGrid& z, const GradientField& g,
                        const Dictionary& dict, const SparseCodes& codes,
                        const DlsConfig& cfg);

/// Full alternating solve starting from the DCT least-squares surface, the
/// DCT dictionary and zero codes. The returned surface has zero mean; the
/// trace holds the initial state plus one row per outer iteration.
DlsResult dls_reconstruct(const GradientField& g, const DlsConfig& cfg);

}  // namespace gradshop
