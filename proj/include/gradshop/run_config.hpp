#pragma once

// JSON run configuration shared by the reconstruct, eval and sweep commands.
//
//   {
//     "method": "dls" | "dctls",
//     "dls":   { "lambda", "mu", "bound_a", "tau", "outer_iters",
//                "prox_steps_per_outer", "rel_tol", "natoms", "seed",
//                "sweeps_per_outer", "allow_large_tau",
//                "atom_reset": "keep" | "dc" | "random",
//                "sweep_order": "codes_then_atoms" | "interleaved" },
//     "patch": { "patch_h", "patch_w", "stride", "clamp_boundary" },
//     "ssim":  { "window", "sigma", "k1", "k2",
//                "dynamic_range": "auto" | number, "align" },
//     "sign":  { "flip_x", "flip_y" }
//   }
//
// Every key is optional; unknown keys and out-of-range values are rejected.

#include "gradshop/dls.hpp"
#include "gradshop/metrics.hpp"
#include "gradshop/photometric.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace gradshop {

enum class Method { dls, dctls };

Method parse_method(const std::string& name);
std::string to_string(Method m);

struct RunConfig {
  Method method = Method::dls;
  DlsConfig dls;
  SsimConfig ssim;
  SignConvention sign;
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

/// Reads a JSON document, mapping I/O failures to IoError and syntax errors
/// to ConfigError.
nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace gradshop
