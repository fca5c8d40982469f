#include "gradshop/pfm.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace gradshop {

namespace {

std::uint32_t byteswap32(std::uint32_t v) {
  return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) |
         (v >> 24);
}

void swap_if_needed(std::vector<float>& data, bool file_little) {
  constexpr bool host_little = std::endian::native == std::endian::little;
  if (file_little == host_little) return;
  for (float& f : data) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    u = byteswap32(u);
    std::memcpy(&f, &u, 4);
  }
}

std::string read_token(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) throw IoError("PFM: truncated header");
  return tok;
}

}  // namespace

PfmImage read_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  PfmImage img;
  const std::string magic = read_token(in);
  if (magic == "Pf") {
    img.channels = 1;
  } else if (magic == "PF") {
    img.channels = 3;
  } else {
    throw IoError(path.string() + ": not a PFM file");
  }
  double scale = 0.0;
  try {
    img.cols = std::stol(read_token(in));
    img.rows = std::stol(read_token(in));
    scale = std::stod(read_token(in));
  } catch (const std::logic_error&) {
    throw IoError(path.string() + ": malformed PFM header");
  }
  if (img.rows < 1 || img.cols < 1 || scale == 0.0) {
    throw IoError(path.string() + ": malformed PFM header");
  }
  in.get();  // single whitespace byte before the payload

  const std::size_t per_row =
      static_cast<std::size_t>(img.cols) * static_cast<std::size_t>(img.channels);
  img.data.resize(per_row * static_cast<std::size_t>(img.rows));
  // File rows run bottom-to-top.
  for (Index r = img.rows - 1; r >= 0; --r) {
    in.read(reinterpret_cast<char*>(&img.data[static_cast<std::size_t>(r) * per_row]),
            static_cast<std::streamsize>(per_row * sizeof(float)));
    if (!in) throw IoError(path.string() + ": truncated PFM payload");
  }
  swap_if_needed(img.data, scale < 0.0);
  return img;
}

void write_pfm(const std::filesystem::path& path, const PfmImage& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw IoError("PFM supports 1 or 3 channels");
  }
  const std::size_t per_row = static_cast<std::size_t>(image.cols) *
                              static_cast<std::size_t>(image.channels);
  if (image.data.size() != per_row * static_cast<std::size_t>(image.rows)) {
    throw DimensionError("write_pfm: payload size mismatch");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << (image.channels == 1 ? "Pf" : "PF") << "\n"
      << image.cols << " " << image.rows << "\n"
      << "-1.0\n";
  std::vector<float> payload = image.data;
  swap_if_needed(payload, true);
  for (Index r = image.rows - 1; r >= 0; --r) {
    out.write(reinterpret_cast<const char*>(
                  &payload[static_cast<std::size_t>(r) * per_row]),
              static_cast<std::streamsize>(per_row * sizeof(float)));
  }
  if (!out) throw IoError("failed writing " + path.string());
}

void write_grid_pfm(const std::filesystem::path& path, const Matrix& values) {
  PfmImage img;
  img.channels = 1;
  img.rows = values.rows();
  img.cols = values.cols();
  img.data.resize(static_cast<std::size_t>(values.size()));
  for (Index r = 0; r < img.rows; ++r) {
    for (Index c = 0; c < img.cols; ++c) {
      img.at(r, c) = static_cast<float>(values(r, c));
    }
  }
  write_pfm(path, img);
}

Matrix read_grid_pfm(const std::filesystem::path& path) {
  const PfmImage img = read_pfm(path);
  if (img.channels != 1) {
    throw IoError(path.string() + ": expected a 1-channel PFM");
  }
  Matrix m(img.rows, img.cols);
  for (Index r = 0; r < img.rows; ++r) {
    for (Index c = 0; c < img.cols; ++c) m(r, c) = img.at(r, c);
  }
  return m;
}

void write_normals_pfm(const std::filesystem::path& path, const NormalMap& nm) {
  PfmImage img;
  img.channels = 3;
  img.rows = nm.rows();
  img.cols = nm.cols();
  img.data.resize(static_cast<std::size_t>(img.rows * img.cols * 3));
  for (Index r = 0; r < img.rows; ++r) {
    for (Index c = 0; c < img.cols; ++c) {
      img.at(r, c, 0) = static_cast<float>(nm.n1()(r, c));
      img.at(r, c, 1) = static_cast<float>(nm.n2()(r, c));
      img.at(r, c, 2) = static_cast<float>(nm.n3()(r, c));
    }
  }
  write_pfm(path, img);
}

NormalMap read_normals_pfm(const std::filesystem::path& path, double nz_min) {
  const PfmImage img = read_pfm(path);
  if (img.channels != 3) {
    throw IoError(path.string() + ": expected a 3-channel PFM");
  }
  Matrix n1(img.rows, img.cols), n2(img.rows, img.cols), n3(img.rows, img.cols);
  for (Index r = 0; r < img.rows; ++r) {
    for (Index c = 0; c < img.cols; ++c) {
      n1(r, c) = img.at(r, c, 0);
      n2(r, c) = img.at(r, c, 1);
      n3(r, c) = img.at(r, c, 2);
    }
  }
  return NormalMap(std::move(n1), std::move(n2), std::move(n3), nz_min);
}

}  // namespace gradshop
