#include "gradshop/run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <type_traits>

namespace gradshop {

using nlohmann::json;

Method parse_method(const std::string& name) {
  if (name == "dls") return Method::dls;
  if (name == "dctls") return Method::dctls;
  throw ConfigError("unknown method '" + name + "' (expected dls or dctls)");
}

std::string to_string(Method m) { return m == Method::dls ? "dls" : "dctls"; }

namespace {

void reject_unknown(const json& obj, const char* where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    throw ConfigError(std::string(where) + ": expected a JSON object");
  }
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) {
      throw ConfigError(std::string(where) + ": unknown key '" + item.key() +
                        "'");
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) throw ConfigError("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) throw ConfigError("");
      if constexpr (std::is_unsigned_v<T>) {
        if (it->template get<long long>() < 0) throw ConfigError("");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) throw ConfigError("");
    }
    out = it->template get<T>();
  } catch (const std::exception&) {
    throw ConfigError(std::string(where) + "." + key + ": wrong type");
  }
}

AtomReset parse_reset(const std::string& s) {
  if (s == "keep") return AtomReset::keep;
  if (s == "dc") return AtomReset::dc;
  if (s == "random") return AtomReset::random;
  throw ConfigError("dls.atom_reset: expected keep, dc or random");
}

std::string reset_name(AtomReset r) {
  switch (r) {
    case AtomReset::keep: return "keep";
    case AtomReset::dc: return "dc";
    case AtomReset::random: return "random";
  }
  return "keep";
}

SweepOrder parse_order(const std::string& s) {
  if (s == "codes_then_atoms") return SweepOrder::codes_then_atoms;
  if (s == "interleaved") return SweepOrder::interleaved;
  throw ConfigError(
      "dls.sweep_order: expected codes_then_atoms or interleaved");
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  reject_unknown(doc, "config", {"method", "dls", "patch", "ssim", "sign"});
  RunConfig cfg;

  if (doc.contains("method")) {
    if (!doc["method"].is_string()) throw ConfigError("method: wrong type");
    cfg.method = parse_method(doc["method"].get<std::string>());
  }

  if (doc.contains("dls")) {
    const json& d = doc["dls"];
    reject_unknown(d, "dls",
                   {"lambda", "mu", "bound_a", "tau", "outer_iters",
                    "prox_steps_per_outer", "rel_tol", "natoms", "seed",
                    "sweeps_per_outer", "allow_large_tau", "atom_reset",
                    "sweep_order"});
    DlsConfig& c = cfg.dls;
    read(d, "lambda", c.lambda, "dls");
    read(d, "mu", c.mu, "dls");
    read(d, "bound_a", c.bound_a, "dls");
    read(d, "tau", c.tau, "dls");
    read(d, "outer_iters", c.outer_iters, "dls");
    read(d, "prox_steps_per_outer", c.prox_steps_per_outer, "dls");
    read(d, "rel_tol", c.rel_tol, "dls");
    read(d, "natoms", c.natoms, "dls");
    read(d, "seed", c.seed, "dls");
    read(d, "sweeps_per_outer", c.sweeps_per_outer, "dls");
    read(d, "allow_large_tau", c.allow_large_tau, "dls");
    std::string s;
    if (d.contains("atom_reset")) {
      read(d, "atom_reset", s, "dls");
      c.atom_reset = parse_reset(s);
    }
    if (d.contains("sweep_order")) {
      read(d, "sweep_order", s, "dls");
      c.sweep_order = parse_order(s);
    }
  }

  if (doc.contains("patch")) {
    const json& p = doc["patch"];
    reject_unknown(p, "patch",
                   {"patch_h", "patch_w", "stride", "clamp_boundary"});
    read(p, "patch_h", cfg.dls.patch.patch_h, "patch");
    read(p, "patch_w", cfg.dls.patch.patch_w, "patch");
    read(p, "stride", cfg.dls.patch.stride, "patch");
    read(p, "clamp_boundary", cfg.dls.patch.clamp_boundary, "patch");
  }

  if (doc.contains("ssim")) {
    const json& s = doc["ssim"];
    reject_unknown(s, "ssim",
                   {"window", "sigma", "k1", "k2", "dynamic_range", "align"});
    read(s, "window", cfg.ssim.window, "ssim");
    read(s, "sigma", cfg.ssim.sigma, "ssim");
    read(s, "k1", cfg.ssim.k1, "ssim");
    read(s, "k2", cfg.ssim.k2, "ssim");
    read(s, "align", cfg.ssim.align, "ssim");
    if (s.contains("dynamic_range")) {
      const json& r = s["dynamic_range"];
      if (r.is_string() && r.get<std::string>() == "auto") {
        cfg.ssim.dynamic_range.reset();
      } else if (r.is_number()) {
        cfg.ssim.dynamic_range = r.get<double>();
      } else {
        throw ConfigError("ssim.dynamic_range: expected \"auto\" or a number");
      }
    }
  }

  if (doc.contains("sign")) {
    const json& s = doc["sign"];
    reject_unknown(s, "sign", {"flip_x", "flip_y"});
    read(s, "flip_x", cfg.sign.flip_x, "sign");
    read(s, "flip_y", cfg.sign.flip_y, "sign");
  }

  cfg.dls.validate();
  cfg.ssim.validate();
  return cfg;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(load_json(path));
}

json to_json(const RunConfig& cfg) {
  const DlsConfig& d = cfg.dls;
  json ssim = {{"window", cfg.ssim.window},
               {"sigma", cfg.ssim.sigma},
               {"k1", cfg.ssim.k1},
               {"k2", cfg.ssim.k2},
               {"align", cfg.ssim.align}};
  if (cfg.ssim.dynamic_range) {
    ssim["dynamic_range"] = *cfg.ssim.dynamic_range;
  } else {
    ssim["dynamic_range"] = "auto";
  }
  return {
      {"method", to_string(cfg.method)},
      {"dls",
       {{"lambda", d.lambda},
        {"mu", d.mu},
        {"bound_a", d.bound_a},
        {"tau", d.tau},
        {"outer_iters", d.outer_iters},
        {"prox_steps_per_outer", d.prox_steps_per_outer},
        {"rel_tol", d.rel_tol},
        {"natoms", d.natoms},
        {"seed", d.seed},
        {"sweeps_per_outer", d.sweeps_per_outer},
        {"allow_large_tau", d.allow_large_tau},
        {"atom_reset", reset_name(d.atom_reset)},
        {"sweep_order", d.sweep_order == SweepOrder::interleaved
                            ? "interleaved"
                            : "codes_then_atoms"}}},
      {"patch",
       {{"patch_h", d.patch.patch_h},
        {"patch_w", d.patch.patch_w},
        {"stride", d.patch.stride},
        {"clamp_boundary", d.patch.clamp_boundary}}},
      {"ssim", ssim},
      {"sign", {{"flip_x", cfg.sign.flip_x}, {"flip_y", cfg.sign.flip_y}}},
  };
}

}  // namespace gradshop
