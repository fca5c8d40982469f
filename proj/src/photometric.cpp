#include "gradshop/photometric.hpp"

#include "gradshop/integrate.hpp"
#include "gradshop/synthdata.hpp"

#include <cmath>
#include <iostream>
#include <limits>

namespace gradshop {

LightingSet::LightingSet(Eigen::MatrixX3d directions)
    : directions_(std::move(directions)) {
  if (directions_.rows() < 3) {
    throw DomainError("LightingSet: need at least 3 lights, got " +
                      std::to_string(directions_.rows()));
  }
  if (!directions_.allFinite()) {
    throw DomainError("LightingSet: non-finite direction");
  }
  for (Index i = 0; i < directions_.rows(); ++i) {
    const double n = directions_.row(i).norm();
    if (n <= 1e-12) throw DomainError("LightingSet: zero direction");
    directions_.row(i) /= n;
  }
  Eigen::JacobiSVD<Eigen::MatrixX3d> svd(directions_);
  const auto& sv = svd.singularValues();
  if (sv(2) <= 1e-12 * sv(0)) {
    throw DomainError("LightingSet: lighting directions are rank deficient");
  }
  condition_ = sv(0) / sv(2);
  if (condition_ > kWarnCondition) {
    std::cerr << "warning: lighting condition number " << condition_ << "\n";
  }
}

ImageStack::ImageStack(std::vector<Matrix> images)
    : images_(std::move(images)) {
  if (images_.empty()) throw DimensionError("ImageStack: no images");
  for (const auto& im : images_) {
    require_same_dims(images_.front(), im, "ImageStack");
    if (im.size() == 0) throw DimensionError("ImageStack: empty image");
    if (!im.allFinite() || (im.array() < 0.0).any()) {
      throw DomainError("ImageStack: intensities must be finite and >= 0");
    }
  }
}

NormalMap estimate_normals(const ImageStack& images, const LightingSet& lights,
                           const NormalOptions& opts) {
  if (images.count() != lights.count()) {
    throw DimensionError("estimate_normals: " +
                         std::to_string(images.count()) + " images but " +
                         std::to_string(lights.count()) + " lights");
  }
  const Index m = images.rows(), n = images.cols(), nl = lights.count();
  const Eigen::MatrixX3d& ld = lights.directions();
  // (L^T L)^{-1} L^T, shared by every pixel when nothing is excluded.
  const Eigen::Matrix<double, 3, Eigen::Dynamic> pinv =
      (ld.transpose() * ld).ldlt().solve(ld.transpose());

  Matrix n1(m, n), n2(m, n), n3(m, n);
  BoolMatrix bad = BoolMatrix::Constant(m, n, false);
  Vector intens(nl);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < m; ++r) {
      for (Index k = 0; k < nl; ++k) {
        intens(k) = images.images()[static_cast<std::size_t>(k)](r, c);
      }
      Eigen::Vector3d g;
      if (opts.shadow_threshold > 0.0) {
        std::vector<Index> keep;
        for (Index k = 0; k < nl; ++k) {
          if (intens(k) > opts.shadow_threshold) keep.push_back(k);
        }
        if (keep.size() < 3) {
          bad(r, c) = true;
          g = Eigen::Vector3d::UnitZ();
        } else {
          Eigen::MatrixX3d sub(static_cast<Index>(keep.size()), 3);
          Vector rhs(static_cast<Index>(keep.size()));
          for (std::size_t t = 0; t < keep.size(); ++t) {
            sub.row(static_cast<Index>(t)) = ld.row(keep[t]);
            rhs(static_cast<Index>(t)) = intens(keep[t]);
          }
          g = sub.colPivHouseholderQr().solve(rhs);
        }
      } else {
        g = pinv * intens;
      }
      n1(r, c) = g.x();
      n2(r, c) = g.y();
      n3(r, c) = g.z();
    }
  }
  // NormalMap normalizes and flags ||g|| <= 1e-12 and n3 < nz_min.
  return NormalMap(std::move(n1), std::move(n2), std::move(n3), std::move(bad),
                   opts.nz_min);
}

GradientField normals_to_gradients(const NormalMap& normals,
                                   const SignConvention& conv) {
  const Index m = normals.rows(), n = normals.cols();
  Matrix gx = Matrix::Zero(m, n), gy = Matrix::Zero(m, n);
  const double sx = conv.flip_x ? -1.0 : 1.0;
  const double sy = conv.flip_y ? -1.0 : 1.0;
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < m; ++r) {
      if (normals.degenerate()(r, c)) continue;
      const double n3 = normals.n3()(r, c);
      gx(r, c) = sx * normals.n1()(r, c) / n3;
      gy(r, c) = sy * normals.n2()(r, c) / n3;
    }
  }
  return GradientField(std::move(gx), std::move(gy));
}

NormalMap gradients_to_normals(const GradientField& g,
                               const SignConvention& conv) {
  const double sx = conv.flip_x ? -1.0 : 1.0;
  const double sy = conv.flip_y ? -1.0 : 1.0;
  return NormalMap(sx * g.gx(), sy * g.gy(),
                   Matrix::Ones(g.rows(), g.cols()), 0.0);
}

ImageStack render_lambertian(const SurfaceGrid& z, const LightingSet& lights,
                             double albedo, const SignConvention& conv) {
  if (!(albedo > 0.0)) throw DomainError("render_lambertian: albedo <= 0");
  const NormalMap nm = gradients_to_normals(apply_diff(z), conv);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(lights.count()));
  for (Index k = 0; k < lights.count(); ++k) {
    const Eigen::RowVector3d l = lights.directions().row(k);
    Matrix shade = nm.n1() * l(0) + nm.n2() * l(1) + nm.n3() * l(2);
    out.push_back(albedo * shade.cwiseMax(0.0));
  }
  return ImageStack(std::move(out));
}

ImageStack add_image_noise_snr(const ImageStack& images, double snr_db,
                               std::uint64_t seed) {
  std::vector<Matrix> noisy = add_noise_snr(images.images(), snr_db, seed);
  for (auto& im : noisy) im = im.cwiseMax(0.0);
  return ImageStack(std::move(noisy));
}

}  // namespace gradshop
