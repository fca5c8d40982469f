#include "gradshop/synthdata.hpp"

#include <cmath>
#include <random>
#include <string>

namespace gradshop {

SurfaceKind parse_surface_kind(std::string_view name) {
  if (name == "tent") return SurfaceKind::tent;
  if (name == "vase") return SurfaceKind::vase;
  throw ConfigError("unknown surface kind '" + std::string(name) +
                    "' (expected tent or vase)");
}

std::string_view to_string(SurfaceKind kind) {
  return kind == SurfaceKind::tent ? "tent" : "vase";
}

namespace {

struct Sample {
  double value;
  double dx;
  double dy;
};

// Derivative of max(|x|, |y|) with respect to x: the midpoint of the
// one-sided values on the diagonal creases.
double dmax_abs(double x, double y) {
  const double ax = std::abs(x), ay = std::abs(y);
  const double s = x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
  if (ax > ay) return s;
  if (ax == ay) return 0.5 * s;
  return 0.0;
}

Sample tent(double a, double x, double y) {
  const double h = 1.0 - std::max(std::abs(x), std::abs(y));
  // Outer max(0, h): factor 1 inside, 1/2 on the support boundary.
  const double outer = h > 0 ? 1.0 : (h == 0 ? 0.5 : 0.0);
  return {a * std::max(0.0, h), -a * outer * dmax_abs(x, y),
          -a * outer * dmax_abs(y, x)};
}

Sample vase(double a, double x, double y) {
  const double shape = (1.0 - y * y) * (1.0 + 0.5 * y);
  const double r = 0.4 + 0.3 * shape;
  const double dr = 0.3 * (-2.0 * y * (1.0 + 0.5 * y) + 0.5 * (1.0 - y * y));
  const double inner = r * r - x * x;
  if (inner <= 0.0) return {0.0, 0.0, 0.0};
  const double root = std::sqrt(inner);
  return {a * root, -a * x / root, a * r * dr / root};
}

Sample sample(SurfaceKind kind, double a, double x, double y) {
  return kind == SurfaceKind::tent ? tent(a, x, y) : vase(a, x, y);
}

}  // namespace

double surface_value(SurfaceKind kind, double amplitude, double x, double y) {
  return sample(kind, amplitude, x, y).value;
}

SyntheticSurface make_surface(const SynthSpec& spec) {
  if (spec.rows < 16 || spec.cols < 16) {
    throw DimensionError("make_surface: rows and cols must be >= 16");
  }
  if (!(spec.amplitude > 0.0) || !std::isfinite(spec.amplitude)) {
    throw ConfigError("make_surface: amplitude must be positive");
  }
  const Index m = spec.rows, n = spec.cols;
  const double hx = 2.0 / static_cast<double>(n - 1);
  const double hy = 2.0 / static_cast<double>(m - 1);
  Matrix z(m, n), gx(m, n), gy(m, n);
  for (Index c = 0; c < n; ++c) {
    const double x = -1.0 + hx * static_cast<double>(c);
    for (Index r = 0; r < m; ++r) {
      const double y = -1.0 + hy * static_cast<double>(r);
      const Sample s = sample(spec.kind, spec.amplitude, x, y);
      z(r, c) = s.value;
      gx(r, c) = s.dx * hx;
      gy(r, c) = s.dy * hy;
    }
  }
  return {SurfaceGrid(std::move(z)),
          GradientField(std::move(gx), std::move(gy))};
}

std::vector<Matrix> add_noise_snr(std::span<const Matrix> signal,
                                  double snr_db, std::uint64_t seed) {
  if (!std::isfinite(snr_db)) throw DomainError("SNR must be finite");
  double sig_sq = 0.0;
  for (const auto& s : signal) sig_sq += s.squaredNorm();
  if (!(sig_sq > 0.0)) {
    throw DomainError("SNR is undefined for an all-zero signal");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Matrix> noise;
  noise.reserve(signal.size());
  double noise_sq = 0.0;
  for (const auto& s : signal) {
    Matrix nm(s.rows(), s.cols());
    for (Index i = 0; i < nm.size(); ++i) nm.data()[i] = gauss(rng);
    noise_sq += nm.squaredNorm();
    noise.push_back(std::move(nm));
  }
  const double target = std::sqrt(sig_sq) * std::pow(10.0, -snr_db / 20.0);
  const double scale = target / std::sqrt(noise_sq);
  for (std::size_t k = 0; k < noise.size(); ++k) {
    noise[k] = signal[k] + scale * noise[k];
  }
  return noise;
}

GradientField add_noise_snr(const GradientField& g, double snr_db,
                            std::uint64_t seed) {
  const Matrix parts[] = {g.gx(), g.gy()};
  auto noisy = add_noise_snr(std::span<const Matrix>(parts), snr_db, seed);
  return GradientField(std::move(noisy[0]), std::move(noisy[1]));
}

double realized_snr_db(std::span<const Matrix> signal,
                       std::span<const Matrix> noisy) {
  if (signal.size() != noisy.size()) {
    throw DimensionError("realized_snr_db: list length mismatch");
  }
  double s = 0.0, e = 0.0;
  for (std::size_t k = 0; k < signal.size(); ++k) {
    require_same_dims(signal[k], noisy[k], "realized_snr_db");
    s += signal[k].squaredNorm();
    e += (noisy[k] - signal[k]).squaredNorm();
  }
  return 10.0 * std::log10(s / e);
}

}  // namespace gradshop
