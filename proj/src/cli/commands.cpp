#include "gradshop/commands.hpp"

#include "gradshop/integrate.hpp"
#include "gradshop/metrics.hpp"
#include "gradshop/pfm.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace gradshop {

using nlohmann::json;

// -- file helpers -------------------------------------------------------------

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

LightingSet read_lighting_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<Eigen::RowVector3d> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    Eigen::RowVector3d d;
    std::string extra;
    if (!(ls >> d(0) >> d(1) >> d(2)) || (ls >> extra)) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected three numbers");
    }
    rows.push_back(d);
  }
  Eigen::MatrixX3d dirs(static_cast<Index>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    dirs.row(static_cast<Index>(i)) = rows[i];
  }
  return LightingSet(std::move(dirs));
}

ImageStack read_image_stack(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pfm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });
  std::vector<Matrix> images;
  for (const auto& f : files) images.push_back(read_grid_pfm(f));
  if (images.empty()) throw IoError(dir.string() + ": no .pfm images");
  return ImageStack(std::move(images));
}

void write_trace_csv(const fs::path& path, const DlsTrace& trace) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "iteration,objective,data_term,patch_fit,l0_count,rel_change\n";
  for (const auto& r : trace) {
    out << r.iteration << ',' << format_number(r.objective) << ','
        << format_number(r.data_term) << ',' << format_number(r.patch_fit)
        << ',' << r.l0_count << ',' << format_number(r.rel_change) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

namespace {

GradientField read_gradients(const fs::path& gx, const fs::path& gy) {
  return GradientField(read_grid_pfm(gx), read_grid_pfm(gy));
}

void write_csv(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

// -- subcommands ------------------------------------------------------------

void cmd_synth(SurfaceKind kind, Index rows, Index cols, double amplitude,
               const fs::path& out_surface, const fs::path& out_gx,
               const fs::path& out_gy) {
  if (rows < 16 || cols < 16) {
    throw ConfigError("synth: rows and cols must be >= 16");
  }
  const SyntheticSurface s = make_surface({kind, rows, cols, amplitude});
  write_grid_pfm(out_surface, s.surface.values());
  write_grid_pfm(out_gx, s.gradients.gx());
  write_grid_pfm(out_gy, s.gradients.gy());
}

double cmd_noise(const fs::path& in_gx, const fs::path& in_gy, double snr_db,
                 std::uint64_t seed, const fs::path& out_gx,
                 const fs::path& out_gy) {
  const GradientField g = read_gradients(in_gx, in_gy);
  const GradientField noisy = add_noise_snr(g, snr_db, seed);
  write_grid_pfm(out_gx, noisy.gx());
  write_grid_pfm(out_gy, noisy.gy());
  const Matrix clean[] = {g.gx(), g.gy()};
  const Matrix dirty[] = {noisy.gx(), noisy.gy()};
  return realized_snr_db(clean, dirty);
}

void cmd_normals(const fs::path& image_dir, const fs::path& lights_file,
                 std::optional<double> snr_db, std::uint64_t seed,
                 const NormalOptions& opts, const fs::path& out_normals) {
  const LightingSet lights = read_lighting_file(lights_file);
  ImageStack images = read_image_stack(image_dir);
  if (snr_db) images = add_image_noise_snr(images, *snr_db, seed);
  write_normals_pfm(out_normals, estimate_normals(images, lights, opts));
}

Reconstruction reconstruct(const GradientField& g, const RunConfig& cfg) {
  if (cfg.method == Method::dctls) return {integrate_dct(g), {}};
  DlsResult r = dls_reconstruct(g, cfg.dls);
  return {std::move(r.surface), std::move(r.trace)};
}

void cmd_reconstruct(const ReconstructInput& input, const RunConfig& cfg,
                     const fs::path& out_surface,
                     const std::optional<fs::path>& out_trace) {
  const bool have_grad = input.gx && input.gy;
  if (have_grad == static_cast<bool>(input.normals)) {
    throw ConfigError("reconstruct: give exactly one of --gradients or --normals");
  }
  const GradientField g =
      have_grad ? read_gradients(*input.gx, *input.gy)
                : normals_to_gradients(read_normals_pfm(*input.normals),
                                       cfg.sign);
  const Reconstruction rec = reconstruct(g, cfg);
  write_grid_pfm(out_surface, rec.surface.values());
  if (out_trace) write_trace_csv(*out_trace, rec.trace);
}

EvalResult cmd_eval(const fs::path& candidate, const fs::path& reference,
                    const SsimConfig& ssim_cfg,
                    const std::optional<fs::path>& out_csv) {
  const SurfaceGrid cand(read_grid_pfm(candidate));
  const SurfaceGrid ref(read_grid_pfm(reference));
  const EvalResult r{ssim(cand, ref, ssim_cfg), rmse_aligned(cand, ref)};
  if (out_csv) {
    write_csv(*out_csv, "ssim,rmse_aligned\n" + format_number(r.ssim) + "," +
                            format_number(r.rmse) + "\n");
  }
  return r;
}

// -- sweep ------------------------------------------------------------------

namespace {

template <class T>
std::vector<T> read_list(const json& doc, const char* key) {
  std::vector<T> out;
  if (!doc.contains(key)) return out;
  const json& a = doc[key];
  if (!a.is_array()) throw ConfigError(std::string("sweep.") + key + ": expected an array");
  for (const auto& v : a) {
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(std::string("sweep.") + key + ": expected strings");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_unsigned()) throw ConfigError(std::string("sweep.") + key + ": expected nonnegative integers");
    } else {
      if (!v.is_number()) throw ConfigError(std::string("sweep.") + key + ": expected numbers");
    }
    out.push_back(v.get<T>());
  }
  return out;
}

}  // namespace

SweepSpec parse_sweep_spec(const json& doc) {
  if (!doc.is_object()) throw ConfigError("sweep: expected a JSON object");
  static const char* const kKeys[] = {"kinds",   "rows",   "cols",
                                      "amplitude", "snr_db", "methods",
                                      "lambda",  "mu",     "seeds",
                                      "config"};
  for (const auto& item : doc.items()) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char* k) {
          return item.key() == k;
        }) == std::end(kKeys)) {
      throw ConfigError("sweep: unknown key '" + item.key() + "'");
    }
  }
  SweepSpec spec;
  if (doc.contains("config")) spec.base = parse_run_config(doc["config"]);
  for (const auto& k : read_list<std::string>(doc, "kinds")) {
    spec.kinds.push_back(parse_surface_kind(k));
  }
  for (const auto& m : read_list<std::string>(doc, "methods")) {
    spec.methods.push_back(parse_method(m));
  }
  auto read_int = [&](const char* key, Index& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_integer()) {
      throw ConfigError(std::string("sweep.") + key + ": expected an integer");
    }
    out = doc[key].get<Index>();
  };
  read_int("rows", spec.rows);
  read_int("cols", spec.cols);
  if (doc.contains("amplitude")) {
    if (!doc["amplitude"].is_number()) throw ConfigError("sweep.amplitude: expected a number");
    spec.amplitude = doc["amplitude"].get<double>();
  }
  spec.snr_db = read_list<double>(doc, "snr_db");
  spec.lambdas = read_list<double>(doc, "lambda");
  spec.mus = read_list<double>(doc, "mu");
  spec.seeds = read_list<std::uint64_t>(doc, "seeds");

  if (spec.kinds.empty() || spec.snr_db.empty() || spec.methods.empty() ||
      spec.seeds.empty()) {
    throw ConfigError("sweep: empty grid (kinds, snr_db, methods and seeds "
                      "must be non-empty)");
  }
  if (spec.lambdas.empty()) spec.lambdas.push_back(spec.base.dls.lambda);
  if (spec.mus.empty()) spec.mus.push_back(spec.base.dls.mu);
  for (double v : spec.lambdas) {
    if (!(v > 0.0)) throw ConfigError("sweep.lambda: values must be > 0");
  }
  for (double v : spec.mus) {
    if (!(v > 0.0)) throw ConfigError("sweep.mu: values must be > 0");
  }
  if (spec.rows < 16 || spec.cols < 16) {
    throw ConfigError("sweep: rows and cols must be >= 16");
  }
  return spec;
}

SweepRow run_sweep_cell(const SweepSpec& spec, SurfaceKind kind,
                        double snr_db, Method method,
                        std::optional<double> lambda, std::optional<double> mu,
                        std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const SyntheticSurface truth =
      make_surface({kind, spec.rows, spec.cols, spec.amplitude});
  const GradientField noisy = add_noise_snr(truth.gradients, snr_db, seed);

  RunConfig cfg = spec.base;
  cfg.method = method;
  cfg.dls.seed = seed;
  if (lambda) cfg.dls.lambda = *lambda;
  if (mu) cfg.dls.mu = *mu;
  const Reconstruction rec = reconstruct(noisy, cfg);

  SweepRow row;
  row.kind = kind;
  row.snr_db = snr_db;
  row.method = method;
  row.lambda = lambda;
  row.mu = mu;
  row.seed = seed;
  row.ssim = ssim(rec.surface, truth.surface, cfg.ssim);
  row.rmse = rmse_aligned(rec.surface, truth.surface);
  row.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return row;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("GRADSHOP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  struct Job {
    SurfaceKind kind;
    double snr;
    Method method;
    std::optional<double> lambda;
    std::optional<double> mu;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (SurfaceKind kind : spec.kinds) {
    for (double snr : spec.snr_db) {
      for (Method m : spec.methods) {
        if (m == Method::dctls) {
          for (auto seed : spec.seeds) jobs.push_back({kind, snr, m, {}, {}, seed});
          continue;
        }
        for (double lam : spec.lambdas) {
          for (double mu : spec.mus) {
            for (auto seed : spec.seeds) {
              jobs.push_back({kind, snr, m, lam, mu, seed});
            }
          }
        }
      }
    }
  }

  std::vector<SweepRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& j = jobs[i];
      try {
        rows[i] = run_sweep_cell(spec, j.kind, j.snr, j.method, j.lambda,
                                 j.mu, j.seed);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(
                                      threads, static_cast<unsigned>(jobs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows, bool timing) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
  };
  std::ostringstream out;
  out << "kind,snr_db,method,lambda,mu,seed,ssim,rmse,wall_ms\n";
  for (const auto& r : rows) {
    out << to_string(r.kind) << ',' << format_number(r.snr_db) << ','
        << to_string(r.method) << ',' << opt(r.lambda) << ',' << opt(r.mu)
        << ',' << r.seed << ',' << format_number(r.ssim) << ','
        << format_number(r.rmse) << ','
        << (timing ? format_number(r.wall_ms) : std::string("0")) << '\n';
  }

  // Mean over seeds per parameter setting, in order of first appearance.
  struct Group {
    const SweepRow* first;
    double ssim = 0.0;
    double rmse = 0.0;
    int n = 0;
  };
  std::vector<Group> groups;
  auto same_setting = [](const SweepRow& a, const SweepRow& b) {
    return a.kind == b.kind && a.snr_db == b.snr_db && a.method == b.method &&
           a.lambda == b.lambda && a.mu == b.mu;
  };
  for (const auto& r : rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return same_setting(*g.first, r);
    });
    if (it == groups.end()) {
      groups.push_back({&r});
      it = std::prev(groups.end());
    }
    it->ssim += r.ssim;
    it->rmse += r.rmse;
    ++it->n;
  }

  out << "# best per cell (mean over seeds)\n"
      << "kind,snr_db,method,lambda,mu,seeds,mean_ssim,mean_rmse\n";
  std::vector<const Group*> best;
  for (const auto& g : groups) {
    auto it = std::find_if(best.begin(), best.end(), [&](const Group* b) {
      return b->first->kind == g.first->kind &&
             b->first->snr_db == g.first->snr_db &&
             b->first->method == g.first->method;
    });
    if (it == best.end()) {
      best.push_back(&g);
    } else if (g.ssim / g.n > (*it)->ssim / (*it)->n) {
      *it = &g;
    }
  }
  for (const Group* g : best) {
    const SweepRow& r = *g->first;
    out << to_string(r.kind) << ',' << format_number(r.snr_db) << ','
        << to_string(r.method) << ',' << opt(r.lambda) << ',' << opt(r.mu)
        << ',' << g->n << ',' << format_number(g->ssim / g->n) << ','
        << format_number(g->rmse / g->n) << '\n';
  }
  return out.str();
}

// -- argument handling ------------------------------------------------------

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"gradshop: surface reconstruction from noisy gradient fields"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic surface and its analytic gradients");
  std::string kind_name;
  Index rows = 0, cols = 0;
  double amplitude = 1.0;
  std::string s_surface, s_gx, s_gy;
  synth->add_option("kind", kind_name, "tent or vase")->required();
  synth->add_option("rows", rows)->required();
  synth->add_option("cols", cols)->required();
  synth->add_option("surface", s_surface, "output height map (.pfm)")->required();
  synth->add_option("gx", s_gx, "output x-gradient (.pfm)")->required();
  synth->add_option("gy", s_gy, "output y-gradient (.pfm)")->required();
  synth->add_option("--amplitude", amplitude, "surface amplitude");

  // noise
  auto* noise = app.add_subcommand("noise", "Add Gaussian noise to a gradient field at an exact SNR");
  std::string n_in_gx, n_in_gy, n_out_gx, n_out_gy;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
  noise->add_option("in_gx", n_in_gx)->required();
  noise->add_option("in_gy", n_in_gy)->required();
  noise->add_option("out_gx", n_out_gx)->required();
  noise->add_option("out_gy", n_out_gy)->required();
  noise->add_option("--snr-db", snr_db, "target SNR in dB")->required();
  noise->add_option("--seed", seed, "noise seed");

  // normals
  auto* normals = app.add_subcommand("normals", "Estimate normals from an image stack with known lights");
  std::string p_dir, p_lights, p_out;
  std::optional<double> p_snr;
  std::uint64_t p_seed = 0;
  NormalOptions p_opts;
  normals->add_option("images", p_dir, "directory of 1-channel .pfm images")->required();
  normals->add_option("lights", p_lights, "lighting file, one direction per line")->required();
  normals->add_option("--out", p_out, "output normal map (.pfm)")->required();
  normals->add_option("--snr-db", p_snr, "add image noise at this SNR first");
  normals->add_option("--seed", p_seed, "image noise seed");
  normals->add_option("--nz-min", p_opts.nz_min, "minimum n3 for a valid normal");
  normals->add_option("--shadow-threshold", p_opts.shadow_threshold,
                      "exclude intensities at or below this value");

  // reconstruct
  auto* recon = app.add_subcommand("reconstruct", "Integrate a gradient field (dls or dctls)");
  std::string r_method, r_config, r_normals, r_out, r_trace;
  std::vector<std::string> r_grad;
  bool flip_x = true, flip_y = false;
  recon->add_option("--method", r_method, "dls or dctls (overrides config)");
  recon->add_option("--gradients", r_grad, "gx.pfm gy.pfm")->expected(2);
  recon->add_option("--normals", r_normals, "3-channel normal map (.pfm)");
  recon->add_option("--config", r_config, "run configuration (.json)");
  auto* fx = recon->add_flag("--flip-x,!--no-flip-x", flip_x, "gx = -n1/n3");
  auto* fy = recon->add_flag("--flip-y,!--no-flip-y", flip_y, "gy = -n2/n3");
  recon->add_option("--out", r_out, "output height map (.pfm)")->required();
  recon->add_option("--trace", r_trace, "per-iteration trace (.csv)");

  // eval
  auto* eval = app.add_subcommand("eval", "Score a surface against a reference");
  std::string e_cand, e_ref, e_out, e_config;
  eval->add_option("candidate", e_cand)->required();
  eval->add_option("reference", e_ref)->required();
  eval->add_option("--out", e_out, "metrics CSV");
  eval->add_option("--config", e_config, "run configuration with ssim settings");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run the full pipeline over a parameter grid");
  std::string w_spec, w_out;
  unsigned w_threads = 0;
  bool w_no_timing = false;
  sweep->add_option("spec", w_spec, "sweep specification (.json)")->required();
  sweep->add_option("--out", w_out, "output table (.csv)")->required();
  sweep->add_option("--threads", w_threads, "worker threads (default GRADSHOP_THREADS or all cores)");
  sweep->add_flag("--no-timing", w_no_timing, "write wall_ms as 0 for byte-stable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth) {
      cmd_synth(parse_surface_kind(kind_name), rows, cols, amplitude,
                s_surface, s_gx, s_gy);
    } else if (*noise) {
      const double realized =
          cmd_noise(n_in_gx, n_in_gy, snr_db, seed, n_out_gx, n_out_gy);
      std::cout << "realized_snr_db=" << format_number(realized) << "\n";
    } else if (*normals) {
      cmd_normals(p_dir, p_lights, p_snr, p_seed, p_opts, p_out);
    } else if (*recon) {
      RunConfig cfg = r_config.empty() ? RunConfig{} : load_run_config(r_config);
      if (!r_method.empty()) cfg.method = parse_method(r_method);
      if (fx->count() > 0) cfg.sign.flip_x = flip_x;
      if (fy->count() > 0) cfg.sign.flip_y = flip_y;
      ReconstructInput in;
      if (!r_grad.empty()) {
        in.gx = r_grad.at(0);
        in.gy = r_grad.at(1);
      }
      if (!r_normals.empty()) in.normals = r_normals;
      cmd_reconstruct(in, cfg, r_out,
                      r_trace.empty() ? std::nullopt
                                      : std::optional<fs::path>(r_trace));
    } else if (*eval) {
      const SsimConfig sc =
          e_config.empty() ? SsimConfig{} : load_run_config(e_config).ssim;
      const EvalResult r = cmd_eval(
          e_cand, e_ref, sc,
          e_out.empty() ? std::nullopt : std::optional<fs::path>(e_out));
      std::cout << "ssim=" << format_number(r.ssim)
                << " rmse_aligned=" << format_number(r.rmse) << "\n";
    } else if (*sweep) {
      const SweepSpec spec = parse_sweep_spec(load_json(w_spec));
      const unsigned threads = w_threads > 0 ? w_threads : default_thread_count();
      const auto table = run_sweep(spec, threads);
      write_csv(w_out, format_sweep_csv(table, !w_no_timing));
    }
  } catch (...) {
    return exit_code_for_current_exception();
  }
  return kExitOk;
}

}  // namespace gradshop
