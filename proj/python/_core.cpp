// numpy-facing bindings. Grids cross the boundary as 2-D float64 arrays;
// gradient fields as (gx, gy) tuples.

#include "gradshop/dls.hpp"
#include "gradshop/integrate.hpp"
#include "gradshop/metrics.hpp"
#include "gradshop/patches.hpp"
#include "gradshop/photometric.hpp"
#include "gradshop/synthdata.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <tuple>

namespace py = pybind11;
using namespace gradshop;

namespace {

using Pair = std::tuple<Matrix, Matrix>;

Pair to_pair(const GradientField& g) { return {g.gx(), g.gy()}; }

std::vector<Matrix> images_of(const ImageStack& s) { return s.images(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("apply_diff",
        [](const Matrix& z) { return to_pair(apply_diff(SurfaceGrid(z))); },
        py::arg("z"));
  m.def("apply_diff_adjoint",
        [](const Matrix& gx, const Matrix& gy) {
          return apply_diff_adjoint(GradientField(gx, gy)).values();
        },
        py::arg("gx"), py::arg("gy"));
  m.def("integrate_dct",
        [](const Matrix& gx, const Matrix& gy) {
          return integrate_dct(GradientField(gx, gy)).values();
        },
        py::arg("gx"), py::arg("gy"));

  py::class_<DlsConfig>(m, "DlsConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &DlsConfig::lambda)
      .def_readwrite("mu", &DlsConfig::mu)
      .def_readwrite("bound_a", &DlsConfig::bound_a)
      .def_readwrite("tau", &DlsConfig::tau)
      .def_readwrite("outer_iters", &DlsConfig::outer_iters)
      .def_readwrite("prox_steps_per_outer", &DlsConfig::prox_steps_per_outer)
      .def_readwrite("rel_tol", &DlsConfig::rel_tol)
      .def_readwrite("natoms", &DlsConfig::natoms)
      .def_readwrite("seed", &DlsConfig::seed)
      .def_property(
          "patch_size",
          [](const DlsConfig& c) { return py::make_tuple(c.patch.patch_h, c.patch.patch_w); },
          [](DlsConfig& c, std::tuple<Index, Index> hw) {
            c.patch.patch_h = std::get<0>(hw);
            c.patch.patch_w = std::get<1>(hw);
          })
      .def_property(
          "stride", [](const DlsConfig& c) { return c.patch.stride; },
          [](DlsConfig& c, Index s) { c.patch.stride = s; });

  py::class_<DlsResult>(m, "DlsResult")
      .def_property_readonly("surface", [](const DlsResult& r) { return r.surface.values(); })
      .def_property_readonly("dictionary", [](const DlsResult& r) { return r.dictionary.atoms(); })
      .def_property_readonly("codes", [](const DlsResult& r) { return r.codes.codes(); })
      .def_property_readonly("objective", [](const DlsResult& r) {
        std::vector<double> out;
        for (const auto& row : r.trace) out.push_back(row.objective);
        return out;
      });

  m.def("dls_reconstruct",
        [](const Matrix& gx, const Matrix& gy, const DlsConfig& cfg) {
          py::gil_scoped_release release;
          return dls_reconstruct(GradientField(gx, gy), cfg);
        },
        py::arg("gx"), py::arg("gy"), py::arg("config") = DlsConfig{});

  m.def("dct_dictionary",
        [](Index h, Index w, Index k) { return dct_dictionary(h, w, k).atoms(); },
        py::arg("patch_h") = 8, py::arg("patch_w") = 8, py::arg("natoms") = 64);

  m.def("make_surface",
        [](const std::string& kind, Index rows, Index cols, double amplitude) {
          const auto s = make_surface({parse_surface_kind(kind), rows, cols, amplitude});
          return std::make_tuple(s.surface.values(), s.gradients.gx(), s.gradients.gy());
        },
        py::arg("kind"), py::arg("rows") = 128, py::arg("cols") = 128,
        py::arg("amplitude") = 1.0);
  m.def("add_noise_snr",
        [](const Matrix& gx, const Matrix& gy, double snr_db, std::uint64_t seed) {
          return to_pair(add_noise_snr(GradientField(gx, gy), snr_db, seed));
        },
        py::arg("gx"), py::arg("gy"), py::arg("snr_db"), py::arg("seed") = 0);

  m.def("render_lambertian",
        [](const Matrix& z, const Eigen::MatrixX3d& lights, double albedo) {
          return images_of(render_lambertian(SurfaceGrid(z), LightingSet(lights), albedo));
        },
        py::arg("z"), py::arg("lights"), py::arg("albedo") = 1.0);
  m.def("estimate_normals",
        [](const std::vector<Matrix>& images, const Eigen::MatrixX3d& lights) {
          const NormalMap nm = estimate_normals(ImageStack(images), LightingSet(lights));
          return std::make_tuple(nm.n1(), nm.n2(), nm.n3());
        },
        py::arg("images"), py::arg("lights"));
  m.def("normals_to_gradients",
        [](const Matrix& n1, const Matrix& n2, const Matrix& n3, bool flip_x,
           bool flip_y) {
          return to_pair(normals_to_gradients(NormalMap(n1, n2, n3),
                                              SignConvention{flip_x, flip_y}));
        },
        py::arg("n1"), py::arg("n2"), py::arg("n3"), py::arg("flip_x") = true,
        py::arg("flip_y") = false);

  m.def("ssim",
        [](const Matrix& candidate, const Matrix& reference) {
          return ssim(SurfaceGrid(candidate), SurfaceGrid(reference));
        },
        py::arg("candidate"), py::arg("reference"));
  m.def("rmse_aligned",
        [](const Matrix& candidate, const Matrix& reference) {
          return rmse_aligned(SurfaceGrid(candidate), SurfaceGrid(reference));
        },
        py::arg("candidate"), py::arg("reference"));
}
