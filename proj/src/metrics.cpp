#include "gradshop/metrics.hpp"

#include <cmath>

namespace gradshop {

void SsimConfig::validate() const {
  if (window < 1 || window % 2 == 0) {
    throw ConfigError("SSIM window must be a positive odd size");
  }
  if (!(sigma > 0.0) || !(k1 > 0.0) || !(k2 > 0.0)) {
    throw ConfigError("SSIM sigma, k1 and k2 must be > 0");
  }
  if (dynamic_range && !(*dynamic_range > 0.0)) {
    throw ConfigError("SSIM dynamic range must be > 0");
  }
}

Matrix gaussian_window(Index size, double sigma) {
  Matrix w(size, size);
  const double c = static_cast<double>(size - 1) / 2.0;
  for (Index j = 0; j < size; ++j) {
    for (Index i = 0; i < size; ++i) {
      const double dy = static_cast<double>(i) - c;
      const double dx = static_cast<double>(j) - c;
      w(i, j) = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
  }
  return w / w.sum();
}

Matrix ssim_map(const SurfaceGrid& candidate, const SurfaceGrid& reference,
                const SsimConfig& cfg) {
  cfg.validate();
  require_same_dims(candidate, reference, "ssim");
  const Index win = cfg.window;
  if (candidate.rows() < win || candidate.cols() < win) {
    throw DimensionError("ssim: grid smaller than the " +
                         std::to_string(win) + "x" + std::to_string(win) +
                         " window");
  }

  Matrix x = candidate.values();
  Matrix y = reference.values();
  if (cfg.align) {
    x.array() -= x.mean();
    y.array() -= y.mean();
  }
  double range = cfg.dynamic_range.value_or(y.maxCoeff() - y.minCoeff());
  if (!(range > 0.0)) range = 1.0;  // constant reference
  const double c1 = (cfg.k1 * range) * (cfg.k1 * range);
  const double c2 = (cfg.k2 * range) * (cfg.k2 * range);

  const Matrix w = gaussian_window(win, cfg.sigma);
  const Index mr = x.rows() - win + 1, mc = x.cols() - win + 1;
  Matrix out(mr, mc);
  for (Index c = 0; c < mc; ++c) {
    for (Index r = 0; r < mr; ++r) {
      const auto bx = x.block(r, c, win, win).array();
      const auto by = y.block(r, c, win, win).array();
      const auto wa = w.array();
      const double mx = (wa * bx).sum();
      const double my = (wa * by).sum();
      const double vx = (wa * bx * bx).sum() - mx * mx;
      const double vy = (wa * by * by).sum() - my * my;
      const double cxy = (wa * bx * by).sum() - mx * my;
      out(r, c) = ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
                  ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  }
  return out;
}

double ssim(const SurfaceGrid& candidate, const SurfaceGrid& reference,
            const SsimConfig& cfg) {
  return ssim_map(candidate, reference, cfg).mean();
}

double rmse_aligned(const SurfaceGrid& candidate,
                    const SurfaceGrid& reference) {
  require_same_dims(candidate, reference, "rmse_aligned");
  const Matrix d = (candidate.values().array() - candidate.mean()) -
                   (reference.values().array() - reference.mean());
  return std::sqrt(d.squaredNorm() / static_cast<double>(d.size()));
}

}  // namespace gradshop
