#pragma once

// Implementation of the gradshop command-line tool. Each cmd_* function is
// the body of one subcommand; run_cli parses arguments and maps exceptions
// to exit codes.

#include "gradshop/dls.hpp"
#include "gradshop/photometric.hpp"
#include "gradshop/run_config.hpp"
#include "gradshop/synthdata.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gradshop {

namespace fs = std::filesystem;

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,   // bad arguments or configuration
  kExitDomain = 2,  // data outside an operation's domain
  kExitIo = 3,
};

/// Runs the tool; argv[0] is the program name.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

/// Maps an in-flight exception to an exit code and prints it on stderr.
int exit_code_for_current_exception();

// -- file helpers ---------------------------------------------------------

/// One light per line, three whitespace-separated reals; blank lines and
/// lines starting with '#' are skipped. Directions are normalized.
LightingSet read_lighting_file(const fs::path& path);

/// Every *.pfm in `dir`, sorted by file name.
ImageStack read_image_stack(const fs::path& dir);

/// Shortest round-trip decimal representation, independent of locale.
std::string format_number(double v);

void write_trace_csv(const fs::path& path, const DlsTrace& trace);

// -- subcommands ------------------------------------------------------------

void cmd_synth(SurfaceKind kind, Index rows, Index cols, double amplitude,
               const fs::path& out_surface, const fs::path& out_gx,
               const fs::path& out_gy);

/// Returns the realized SNR of the in-memory (double precision) field.
double cmd_noise(const fs::path& in_gx, const fs::path& in_gy, double snr_db,
                 std::uint64_t seed, const fs::path& out_gx,
                 const fs::path& out_gy);

void cmd_normals(const fs::path& image_dir, const fs::path& lights_file,
                 std::optional<double> snr_db, std::uint64_t seed,
                 const NormalOptions& opts, const fs::path& out_normals);

struct Reconstruction {
  SurfaceGrid surface;
  DlsTrace trace;  // empty for dctls
};

/// Runs the configured method on an in-memory gradient field.
Reconstruction reconstruct(const GradientField& g, const RunConfig& cfg);

struct ReconstructInput {
  std::optional<fs::path> gx;
  std::optional<fs::path> gy;
  std::optional<fs::path> normals;
};

void cmd_reconstruct(const ReconstructInput& input, const RunConfig& cfg,
                     const fs::path& out_surface,
                     const std::optional<fs::path>& out_trace);

struct EvalResult {
  double ssim = 0.0;
  double rmse = 0.0;
};

EvalResult cmd_eval(const fs::path& candidate, const fs::path& reference,
                    const SsimConfig& ssim_cfg,
                    const std::optional<fs::path>& out_csv);

// -- sweep ------------------------------------------------------------------

/// Parameter grid for the synth -> noise -> reconstruct -> eval pipeline.
///
///   { "kinds": ["tent", "vase"], "rows": 128, "cols": 128,
///     "amplitude": 1.0, "snr_db": [...], "methods": ["dls", "dctls"],
///     "lambda": [...], "mu": [...], "seeds": [...], "config": {...} }
///
/// "config" is a run configuration used as the base for every cell; the
/// lambda and mu axes apply to dls only.
struct SweepSpec {
  std::vector<SurfaceKind> kinds;
  Index rows = 128;
  Index cols = 128;
  double amplitude = 1.0;
  std::vector<double> snr_db;
  std::vector<Method> methods;
  std::vector<double> lambdas;
  std::vector<double> mus;
  std::vector<std::uint64_t> seeds;
  RunConfig base;
};

SweepSpec parse_sweep_spec(const nlohmann::json& doc);

struct SweepRow {
  SurfaceKind kind = SurfaceKind::tent;
  double snr_db = 0.0;
  Method method = Method::dctls;
  std::optional<double> lambda;
  std::optional<double> mu;
  std::uint64_t seed = 0;
  double ssim = 0.0;
  double rmse = 0.0;
  double wall_ms = 0.0;
};

/// One pipeline run; the noise seed and the solver seed are both `seed`.
SweepRow run_sweep_cell(const SweepSpec& spec, SurfaceKind kind,
                        double snr_db, Method method,
                        std::optional<double> lambda, std::optional<double> mu,
                        std::uint64_t seed);

/// All cells in a fixed order, executed on up to `threads` workers. Row order
/// and values do not depend on the thread count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads);

/// Per-seed rows, followed by a "# best per cell" block holding, for each
/// (kind, snr_db, method), the (lambda, mu) with the highest mean SSIM.
/// With timing disabled wall_ms is written as 0.
std::string format_sweep_csv(const std::vector<SweepRow>& rows, bool timing);

/// GRADSHOP_THREADS if set and positive, else the hardware concurrency.
unsigned default_thread_count();

}  // namespace gradshop
