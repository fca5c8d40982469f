#include "gradshop/patches.hpp"

#include "gradshop/integrate.hpp"

#include <algorithm>
#include <string>

namespace gradshop {

namespace {

void require_fits(Index rows, Index cols, const PatchConfig& cfg) {
  cfg.validate();
  if (rows < cfg.patch_h || cols < cfg.patch_w) {
    throw DimensionError("grid " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " is smaller than patch " +
                         std::to_string(cfg.patch_h) + "x" +
                         std::to_string(cfg.patch_w));
  }
}

}  // namespace

std::vector<Index> axis_origins(Index dim, Index patch, Index stride,
                                bool clamp) {
  std::vector<Index> out;
  for (Index o = 0; o + patch <= dim; o += stride) out.push_back(o);
  if (clamp && !out.empty() && out.back() < dim - patch) {
    out.push_back(dim - patch);
  }
  return out;
}

std::vector<PatchOrigin> patch_indices(Index rows, Index cols,
                                       const PatchConfig& cfg) {
  require_fits(rows, cols, cfg);
  const auto ro = axis_origins(rows, cfg.patch_h, cfg.stride, cfg.clamp_boundary);
  const auto co = axis_origins(cols, cfg.patch_w, cfg.stride, cfg.clamp_boundary);
  std::vector<PatchOrigin> out;
  out.reserve(ro.size() * co.size());
  for (Index r : ro) {
    for (Index c : co) out.push_back({r, c});
  }
  return out;
}

PatchMatrix extract_patches(const SurfaceGrid& z, const PatchConfig& cfg) {
  const auto origins = patch_indices(z.rows(), z.cols(), cfg);
  const Index ph = cfg.patch_h, pw = cfg.patch_w;
  Matrix data(ph * pw, static_cast<Index>(origins.size()));
  for (Index j = 0; j < data.cols(); ++j) {
    const auto& o = origins[static_cast<std::size_t>(j)];
    Eigen::Map<Matrix>(data.col(j).data(), ph, pw) =
        z.values().block(o.row, o.col, ph, pw);
  }
  return PatchMatrix(std::move(data));
}

SurfaceGrid accumulate_patches(const PatchMatrix& pm, const PatchConfig& cfg,
                               Index rows, Index cols) {
  const auto origins = patch_indices(rows, cols, cfg);
  const Index ph = cfg.patch_h, pw = cfg.patch_w;
  if (pm.patch_dim() != ph * pw ||
      pm.count() != static_cast<Index>(origins.size())) {
    throw DimensionError("accumulate_patches: patch matrix is " +
                         std::to_string(pm.patch_dim()) + "x" +
                         std::to_string(pm.count()) + ", expected " +
                         std::to_string(ph * pw) + "x" +
                         std::to_string(origins.size()));
  }
  Matrix out = Matrix::Zero(rows, cols);
  for (Index j = 0; j < pm.count(); ++j) {
    const auto& o = origins[static_cast<std::size_t>(j)];
    out.block(o.row, o.col, ph, pw) +=
        Eigen::Map<const Matrix>(pm.data().col(j).data(), ph, pw);
  }
  return SurfaceGrid(std::move(out));
}

SurfaceGrid coverage_counts(const PatchConfig& cfg, Index rows, Index cols) {
  const auto origins = patch_indices(rows, cols, cfg);
  Matrix out = Matrix::Zero(rows, cols);
  for (const auto& o : origins) {
    out.block(o.row, o.col, cfg.patch_h, cfg.patch_w).array() += 1.0;
  }
  return SurfaceGrid(std::move(out));
}

Dictionary dct_dictionary(Index patch_h, Index patch_w, Index natoms) {
  const Index dim = patch_h * patch_w;
  if (patch_h < 1 || patch_w < 1 || natoms < 1) {
    throw ConfigError("dct_dictionary: sizes must be positive");
  }
  if (natoms > dim) {
    throw ConfigError("dct_dictionary: overcomplete initialization (" +
                      std::to_string(natoms) + " > " + std::to_string(dim) +
                      ") is not supported");
  }
  const Matrix ch = dct_matrix(patch_h);
  const Matrix cw = dct_matrix(patch_w);

  std::vector<PatchOrigin> freqs;  // (vertical, horizontal) frequency pairs
  for (Index kv = 0; kv < patch_w; ++kv) {
    for (Index ku = 0; ku < patch_h; ++ku) freqs.push_back({ku, kv});
  }
  std::stable_sort(freqs.begin(), freqs.end(),
                   [](const PatchOrigin& a, const PatchOrigin& b) {
                     return a.row + a.col < b.row + b.col;
                   });

  Matrix atoms(dim, natoms);
  for (Index k = 0; k < natoms; ++k) {
    const auto& f = freqs[static_cast<std::size_t>(k)];
    Matrix block = ch.row(f.row).transpose() * cw.row(f.col);
    Vector col = Eigen::Map<const Vector>(block.data(), dim);
    atoms.col(k) = col / col.norm();
  }
  return Dictionary(std::move(atoms));
}

}  // namespace gradshop
