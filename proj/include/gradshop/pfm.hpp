#pragma once

// Portable float map I/O.
//
// Header: "Pf" (1 channel) or "PF" (3 channels), "<cols> <rows>", and a scale
// line whose sign gives the byte order (negative = little-endian). Rows are
// stored bottom-to-top, i.e. grid row rows-1 first. Written files always use
// scale -1.0 and little-endian float32.

#include "gradshop/field.hpp"

#include <filesystem>
#include <vector>

namespace gradshop {

struct PfmImage {
  int channels = 1;
  Index rows = 0;
  Index cols = 0;
  /// channels-interleaved float32, grid row 0 first.
  std::vector<float> data;

  float& at(Index r, Index c, int ch = 0) {
    return data[static_cast<std::size_t>((r * cols + c) * channels + ch)];
  }
  float at(Index r, Index c, int ch = 0) const {
    return data[static_cast<std::size_t>((r * cols + c) * channels + ch)];
  }
};

PfmImage read_pfm(const std::filesystem::path& path);
void write_pfm(const std::filesystem::path& path, const PfmImage& image);

/// Single-channel grid as float32.
void write_grid_pfm(const std::filesystem::path& path, const Matrix& values);
Matrix read_grid_pfm(const std::filesystem::path& path);

/// Normal map as (n1, n2, n3) = (R, G, B). Degenerate pixels are written as
/// (0, 0, 1) and reloaded as non-degenerate flat normals.
void write_normals_pfm(const std::filesystem::path& path, const NormalMap& nm);
NormalMap read_normals_pfm(const std::filesystem::path& path,
                           double nz_min = NormalMap::kDefaultNzMin);

}  // namespace gradshop
