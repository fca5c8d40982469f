// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include "gradshop/commands.hpp"
#include "gradshop/dictlearn.hpp"
#include "gradshop/dls.hpp"
#include "gradshop/integrate.hpp"
#include "gradshop/metrics.hpp"
#include "gradshop/patches.hpp"
#include "gradshop/photometric.hpp"
#include "gradshop/synthdata.hpp"
#include "oracles.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace gradshop;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Report {
 public:
  void run(int id, const std::string& name, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %-34s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id,
                name.c_str(), o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failures_ += o.pass ? 0 : 1;
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

// 1 ---------------------------------------------------------------------------

Outcome exact_integrability() {
  std::mt19937_64 rng(2024);
  double worst_err = 0.0, worst_time = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Matrix z0 = oracle::smooth_surface(64, 64, rng, 5.0);
    const GradientField g = apply_diff(SurfaceGrid(z0));
    const auto t0 = Clock::now();
    const SurfaceGrid z = integrate_dct(g);
    worst_time = std::max(worst_time, seconds_since(t0));
    worst_err = std::max(worst_err, max_abs(z.values() - (z0.array() - z0.mean()).matrix()));
  }
  return {worst_err <= 1e-8 && worst_time < 1.0,
          fmt("max err %.2e", worst_err) + fmt(", slowest %.3f s", worst_time)};
}

// 2 ---------------------------------------------------------------------------

Outcome dense_equivalence() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (Index m : {3, 5, 8}) {
    for (Index n : {4, 8}) {
      const Matrix a = oracle::dense_A(m, n);
      const Matrix z = oracle::random_matrix(m, n, rng);
      const Matrix gx = oracle::random_matrix(m, n, rng), gy = oracle::random_matrix(m, n, rng);
      const Vector v = oracle::stack(gx, gy);
      const GradientField g(gx, gy);

      const GradientField dz = apply_diff(SurfaceGrid(z));
      worst = std::max(worst, (oracle::stack(dz.gx(), dz.gy()) - a * oracle::vec(z))
                                  .cwiseAbs().maxCoeff());
      worst = std::max(worst, (apply_diff_adjoint(g).vec() - a.transpose() * v)
                                  .cwiseAbs().maxCoeff());
      const double f = 0.5 * (a * oracle::vec(z) - v).squaredNorm();
      worst = std::max(worst, std::abs(ls_objective(SurfaceGrid(z), g) - f));
    }
  }

  // Proximal step on an 8x8 grid with 4x4 patches at stride 2 (nine patches).
  DlsConfig cfg;
  cfg.patch = PatchConfig{4, 4, 2, true};
  cfg.natoms = 16;
  cfg.lambda = 0.6;
  const Index m = 8, n = 8;
  const Matrix z = oracle::random_matrix(m, n, rng);
  const GradientField g(oracle::random_matrix(m, n, rng), oracle::random_matrix(m, n, rng));
  const auto origins = patch_indices(m, n, cfg.patch);
  const Dictionary dict = dct_dictionary(4, 4, 16);
  const SparseCodes codes(oracle::random_matrix(16, static_cast<Index>(origins.size()), rng), 1e6);

  const Matrix a = oracle::dense_A(m, n);
  const Vector zt = oracle::vec(z) - cfg.tau * a.transpose() *
                                         (a * oracle::vec(z) - oracle::stack(g.gx(), g.gy()));
  const double w = 2.0 * cfg.tau * cfg.lambda;
  Matrix lhs = Matrix::Identity(m * n, m * n);
  Vector rhs = zt;
  for (std::size_t j = 0; j < origins.size(); ++j) {
    const Matrix p = oracle::dense_patch_operator(m, n, origins[j].row, origins[j].col, 4, 4);
    lhs += w * p.transpose() * p;
    rhs += w * p.transpose() * dict.atoms() * codes.codes().col(static_cast<Index>(j));
  }
  const Vector expected = lhs.partialPivLu().solve(rhs);
  worst = std::max(worst, (z_prox_step(SurfaceGrid(z), g, dict, codes, cfg).vec() - expected)
                              .cwiseAbs().maxCoeff());
  return {worst <= 1e-10, fmt("max deviation %.2e", worst)};
}

// 3 ---------------------------------------------------------------------------

Outcome block_descent_monotone() {
  double worst_rise = 0.0, slowest = 0.0;
  int bad = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const SurfaceGrid z0(oracle::smooth_surface(64, 64, rng, 4.0));
    const double snr = std::uniform_real_distribution<double>(1.0, 30.0)(rng);
    const GradientField g = add_noise_snr(apply_diff(z0), snr, seed);
    DlsConfig cfg;
    cfg.seed = seed;
    const auto t0 = Clock::now();
    const DlsResult r = dls_reconstruct(g, cfg);
    slowest = std::max(slowest, seconds_since(t0));
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      const double prev = r.trace[k - 1].objective;
      const double rise = (r.trace[k].objective - prev) / prev;
      worst_rise = std::max(worst_rise, rise);
      if (rise > 1e-8) ++bad;
    }
  }
  return {bad == 0 && slowest < 60.0,
          fmt("max relative rise %.2e", worst_rise) + fmt(", slowest %.2f s", slowest)};
}

// 4 ---------------------------------------------------------------------------

Outcome sparse_code_oracle() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mu_dist(0.01, 1.0);
  int mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const Vector c = oracle::random_matrix(32, 1, rng);
    const double mu = mu_dist(rng);
    const Vector got = sparse_code_row(c, mu, SparseCodes::kDefaultBound);
    for (Index i = 0; i < c.size(); ++i) {
      // Minimizer of (c - b)^2 + mu^2 [b != 0] over b in {0, c}; ties to 0.
      const double want = mu * mu < c(i) * c(i) ? c(i) : 0.0;
      if (got(i) != want) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatching entries of 32000"};
}

// 5 ---------------------------------------------------------------------------

Outcome planted_recovery() {
  std::mt19937_64 rng(5);
  const double mu = 0.05;
  const Index count = 400;
  const Dictionary d0 = dct_dictionary(8, 8, 64);
  std::bernoulli_distribution on(0.05), neg(0.5);
  std::uniform_real_distribution<double> mag(3.0 * mu, 10.0 * mu);
  Matrix b0 = Matrix::Zero(64, count);
  for (Index i = 0; i < b0.size(); ++i) {
    if (on(rng)) b0.data()[i] = (neg(rng) ? -1.0 : 1.0) * mag(rng);
  }
  SweepOptions opts;
  opts.mu = mu;
  const SweepResult r =
      soup_dil_sweep(PatchMatrix(d0.atoms() * b0), d0, SparseCodes(64, count), opts);
  const bool support =
      ((r.codes.codes().array() != 0.0) == (b0.array() != 0.0)).all();
  const double target = mu * mu * static_cast<double>((b0.array() != 0.0).count());
  const double gap = std::abs(r.stats.objective - target);
  return {support && gap <= 1e-10,
          std::string(support ? "support exact" : "support differs") +
              fmt(", |objective - mu^2 nnz| = %.2e", gap)};
}

// 6, 7 ------------------------------------------------------------------------

struct Tuned {
  double lambda;
  double mu;
};

// Per-SNR (lambda, mu), selected on seeds 100-102 with the sweep command.
// Evaluation below uses the disjoint seeds 0-4.
const std::map<std::pair<SurfaceKind, int>, Tuned> kTuned = {
    {{SurfaceKind::tent, 1}, {1.0, 0.01}},
    {{SurfaceKind::tent, 5}, {1.0, 0.01}},
    {{SurfaceKind::tent, 10}, {1.0, 0.005}},
    {{SurfaceKind::tent, 20}, {1.0, 0.002}},
    {{SurfaceKind::tent, 30}, {0.1, 0.002}},
    {{SurfaceKind::tent, 60}, {0.1, 0.002}},
    {{SurfaceKind::vase, 1}, {1.0, 0.02}},
    {{SurfaceKind::vase, 5}, {1.0, 0.02}},
    {{SurfaceKind::vase, 10}, {1.0, 0.02}},
    {{SurfaceKind::vase, 20}, {0.3, 0.02}},
    {{SurfaceKind::vase, 30}, {0.3, 0.02}},
    {{SurfaceKind::vase, 60}, {0.3, 0.02}},
};

constexpr int kSnrs[] = {1, 5, 10, 20, 30, 60};
constexpr std::uint64_t kSeeds = 5;

struct Means {
  double dls = 0.0;
  double dct = 0.0;
};

// Mean SSIM over seeds 0-4 per (kind, snr), computed once for both criteria.
std::map<std::pair<SurfaceKind, int>, Means> synthetic_table(double& elapsed) {
  const auto t0 = Clock::now();
  std::map<std::pair<SurfaceKind, int>, Means> out;
  for (SurfaceKind kind : {SurfaceKind::tent, SurfaceKind::vase}) {
    const auto s = make_surface({kind, 128, 128, 1.0});
    for (int snr : kSnrs) {
      Means acc;
      const Tuned t = kTuned.at({kind, snr});
      for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
        const GradientField g = add_noise_snr(s.gradients, snr, seed);
        DlsConfig cfg;
        cfg.lambda = t.lambda;
        cfg.mu = t.mu;
        cfg.seed = seed;
        acc.dls += ssim(dls_reconstruct(g, cfg).surface, s.surface);
        acc.dct += ssim(integrate_dct(g), s.surface);
      }
      acc.dls /= kSeeds;
      acc.dct /= kSeeds;
      out[{kind, snr}] = acc;
      std::printf("       %s %2d dB  dls %.5f  dctls %.5f  diff %+.5f\n",
                  std::string(to_string(kind)).c_str(), snr, acc.dls, acc.dct,
                  acc.dls - acc.dct);
    }
  }
  elapsed = seconds_since(t0);
  return out;
}

Outcome directional_tables(const std::map<std::pair<SurfaceKind, int>, Means>& tab,
                           double elapsed) {
  bool ok = elapsed < 15 * 60;
  double min_low = INFINITY, min_all = INFINITY;
  for (SurfaceKind kind : {SurfaceKind::tent, SurfaceKind::vase}) {
    for (int snr : {1, 5, 10, 20}) {
      const Means& mm = tab.at({kind, snr});
      const double diff = mm.dls - mm.dct;
      min_all = std::min(min_all, diff);
      if (snr <= 10) min_low = std::min(min_low, diff);
    }
  }
  ok = ok && min_all > 0.0 && min_low >= 0.002;
  return {ok, fmt("min gain %.4f overall", min_all) + fmt(", %.4f at <= 10 dB", min_low) +
                  fmt(", pipeline %.0f s", elapsed)};
}

Outcome snr_monotone(const std::map<std::pair<SurfaceKind, int>, Means>& tab) {
  double worst_drop = 0.0;
  for (SurfaceKind kind : {SurfaceKind::tent, SurfaceKind::vase}) {
    for (bool dls : {true, false}) {
      double prev = -INFINITY;
      for (int snr : {1, 10, 30, 60}) {
        const Means& mm = tab.at({kind, snr});
        const double v = dls ? mm.dls : mm.dct;
        worst_drop = std::max(worst_drop, prev - v);
        prev = v;
      }
    }
  }
  return {worst_drop <= 0.005, fmt("largest step decrease %.5f", worst_drop)};
}

// 8 ---------------------------------------------------------------------------

Outcome photometric_round_trip() {
  const Index n = 128;
  Matrix z(n, n);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) {
      const double x = -1.0 + 2.0 * c / (n - 1.0), y = -1.0 + 2.0 * r / (n - 1.0);
      z(r, c) = 12.0 * std::exp(-3.0 * (x * x + 0.6 * y * y)) +
                3.0 * std::sin(2.5 * x + 1.0) * std::cos(2.0 * y);
    }
  }
  const SurfaceGrid truth(z);
  const double range = z.maxCoeff() - z.minCoeff();

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.35, 0.35);
  Eigen::MatrixX3d dirs(10, 3);
  for (Index i = 0; i < 10; ++i) dirs.row(i) << u(rng), u(rng), 1.0;
  const LightingSet lights(dirs);
  const ImageStack clean = render_lambertian(truth, lights, 1.0);
  for (const auto& im : clean.images()) {
    if (im.minCoeff() <= 0.0) return {false, "test surface is shadowed"};
  }

  const SurfaceGrid rec =
      integrate_dct(normals_to_gradients(estimate_normals(clean, lights)));
  const double rmse = rmse_aligned(rec, truth);
  bool ok = rmse <= 1e-5 * range;

  double dls_sum = 0.0, dct_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const ImageStack noisy = add_image_noise_snr(clean, 17.0, seed);
    const GradientField g = normals_to_gradients(estimate_normals(noisy, lights));
    // 17 dB image noise is about -4 dB on the estimated gradients; (lambda,
    // mu) selected on seeds 100-102.
    DlsConfig cfg;
    cfg.lambda = 1.0;
    cfg.mu = 0.4;
    cfg.seed = seed;
    dls_sum += ssim(dls_reconstruct(g, cfg).surface, truth);
    dct_sum += ssim(integrate_dct(g), truth);
  }
  ok = ok && dls_sum >= dct_sum;
  return {ok, fmt("noiseless rmse/range %.2e", rmse / range) +
                  fmt(", 17 dB mean ssim dls %.5f", dls_sum / 3) +
                  fmt(" vs dctls %.5f", dct_sum / 3) +
                  fmt(" (gain %+.2e)", (dls_sum - dct_sum) / 3)};
}

// 9 ---------------------------------------------------------------------------

Outcome ssim_axioms() {
  std::mt19937_64 rng(9);
  const SurfaceGrid x(oracle::smooth_surface(32, 32, rng));
  const bool identity = ssim(x, x) == 1.0;
  Matrix bumped = x.values();
  bumped(16, 16) += 0.1;
  const bool decreases = ssim(SurfaceGrid(bumped), x) < 1.0;

  // Single 11x11 window, no alignment, evaluated term by term.
  const Matrix a = oracle::random_matrix(11, 11, rng);
  const Matrix b = a + oracle::random_matrix(11, 11, rng, 0.4);
  Matrix w(11, 11);
  for (int i = 0; i < 11; ++i) {
    for (int j = 0; j < 11; ++j) {
      w(i, j) = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / 4.5);
    }
  }
  w /= w.sum();
  const double ma = (w.array() * a.array()).sum(), mb = (w.array() * b.array()).sum();
  const double va = (w.array() * (a.array() - ma).square()).sum();
  const double vb = (w.array() * (b.array() - mb).square()).sum();
  const double cab = (w.array() * (a.array() - ma) * (b.array() - mb)).sum();
  const double range = b.maxCoeff() - b.minCoeff();
  const double c1 = std::pow(0.01 * range, 2), c2 = std::pow(0.03 * range, 2);
  const double expect = (2 * ma * mb + c1) * (2 * cab + c2) /
                        ((ma * ma + mb * mb + c1) * (va + vb + c2));
  SsimConfig cfg;
  cfg.align = false;
  const double err = std::abs(ssim(SurfaceGrid(a), SurfaceGrid(b), cfg) - expect);
  return {identity && decreases && err <= 1e-12,
          std::string(identity ? "ssim(x,x)=1" : "ssim(x,x)!=1") +
              (decreases ? ", perturbation decreases" : ", perturbation does not decrease") +
              fmt(", window error %.2e", err)};
}

// 10 --------------------------------------------------------------------------

Outcome sweep_determinism() {
  const auto doc = nlohmann::json::parse(R"({
    "kinds": ["tent", "vase"], "rows": 32, "cols": 32, "snr_db": [5, 20],
    "methods": ["dls", "dctls"], "lambda": [0.1, 0.3], "mu": [0.01],
    "seeds": [0, 1], "config": {"dls": {"outer_iters": 5}}})");
  const SweepSpec spec = parse_sweep_spec(doc);
  const auto a = run_sweep(spec, 1);
  const auto b = run_sweep(spec, 1);
  const auto c = run_sweep(spec, 4);
  const bool bytes = format_sweep_csv(a, false) == format_sweep_csv(b, false);
  double worst = a.size() == c.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < a.size() && i < c.size(); ++i) {
    worst = std::max({worst, std::abs(a[i].ssim - c[i].ssim), std::abs(a[i].rmse - c[i].rmse)});
  }
  return {bytes && worst <= 1e-12,
          std::string(bytes ? "single-thread CSVs identical" : "single-thread CSVs differ") +
              fmt(", 4-thread max deviation %.1e", worst)};
}

}  // namespace

int main() {
  Report report;
  report.run(1, "exact integrability recovery", exact_integrability);
  report.run(2, "dense-oracle equivalence", dense_equivalence);
  report.run(3, "block-descent monotonicity", block_descent_monotone);
  report.run(4, "sparse-coding oracle", sparse_code_oracle);
  report.run(5, "planted dictionary recovery", planted_recovery);

  double elapsed = 0.0;
  std::map<std::pair<SurfaceKind, int>, Means> table;
  try {
    table = synthetic_table(elapsed);
  } catch (const std::exception& e) {
    std::printf("       synthetic table failed: %s\n", e.what());
  }
  report.run(6, "tent/vase directional gain", [&] { return directional_tables(table, elapsed); });
  report.run(7, "snr monotonicity", [&] { return snr_monotone(table); });
  report.run(8, "photometric stereo round trip", photometric_round_trip);
  report.run(9, "ssim axioms", ssim_axioms);
  report.run(10, "sweep determinism", sweep_determinism);

  std::printf("%d of 10 criteria failed\n", report.failures());
  return report.failures() == 0 ? 0 : 1;
}
