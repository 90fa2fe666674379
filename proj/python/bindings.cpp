#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "orthoreg/analysis.hpp"
#include "orthoreg/errors.hpp"
#include "orthoreg/linalg.hpp"
#include "orthoreg/regularizers.hpp"
#include "orthoreg/schedule.hpp"

namespace py = pybind11;
using namespace orthoreg;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  Matrix m(rows, cols);
  std::copy(a.data(), a.data() + a.size(), m.data().begin());
  return m;
}

Array to_array(const Matrix& m) {
  Array a({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), a.mutable_data());
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Orthogonality regularizers and diagnostics";

  py::register_exception<NotSymmetric>(m, "NotSymmetric", PyExc_ValueError);
  py::register_exception<ZeroColumn>(m, "ZeroColumn", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<ZeroIterate>(m, "ZeroIterate", PyExc_ArithmeticError);
  py::register_exception<NoConvergence>(m, "NoConvergence", PyExc_RuntimeError);

  py::class_<RegOutput>(m, "RegOutput")
      .def_readonly("value", &RegOutput::value)
      .def_property_readonly("grad", [](const RegOutput& r) { return to_array(r.grad); });

  m.def(
      "regularize",
      [](const std::string& kind, const Array& w, double lam, const std::string& mode, int iters,
         std::uint64_t seed) {
        RegOptions opts;
        opts.mode = parse_spectral_mode(mode);
        opts.iters = iters;
        opts.seed = seed;
        return evaluate(parse_reg_kind(kind), to_matrix(w), lam, opts);
      },
      py::arg("kind"), py::arg("w"), py::arg("lam"), py::arg("mode") = "exact", py::arg("iters") = 2,
      py::arg("seed") = 0, "Penalty value and gradient for kind none|so|dso|selective_so|mc|srip|sr.");

  m.def(
      "power_iter_sigma",
      [](const Array& a, int iters, std::uint64_t seed) { return power_iter_sigma(to_matrix(a), iters, seed); },
      py::arg("a"), py::arg("iters") = 2, py::arg("seed") = 0);
  m.def("singular_values", [](const Array& w) { return singular_values(to_matrix(w)); });
  m.def("mutual_coherence", [](const Array& w) { return mutual_coherence(to_matrix(w)); });
  m.def(
      "rip_constant",
      [](const Array& w, std::size_t k, std::uint64_t max_subsets) {
        return rip_constant(to_matrix(w), k, RipOptions{max_subsets, 1});
      },
      py::arg("w"), py::arg("k"), py::arg("max_subsets") = 1'000'000);

  py::class_<OrthoReport>(m, "OrthoReport")
      .def_readonly("mutual_coherence", &OrthoReport::mutual_coherence)
      .def_readonly("srip_sigma", &OrthoReport::srip_sigma)
      .def_readonly("singular_values", &OrthoReport::singular_values)
      .def_readonly("col_norm_min", &OrthoReport::col_norm_min)
      .def_readonly("col_norm_max", &OrthoReport::col_norm_max)
      .def_readonly("col_norm_mean", &OrthoReport::col_norm_mean)
      .def_readonly("rip_constants", &OrthoReport::rip_constants)
      .def_readonly("partial_ks", &OrthoReport::partial_ks)
      .def_property_readonly("partial", &OrthoReport::partial)
      .def("csv", [](const OrthoReport& r) { return report_csv(r); });
  m.def(
      "report",
      [](const Array& w, const std::vector<int>& ks) { return report(to_matrix(w), ks); },
      py::arg("w"), py::arg("ks") = std::vector<int>{});

  m.def(
      "lambda_at", [](int epoch) { return lambda_at(ScheduleConfig{}, epoch); }, py::arg("epoch"),
      "Default orthogonality coefficient at a 0-indexed epoch.");
  m.def(
      "weight_decay_at",
      [](const std::string& kind, int epoch) {
        return weight_decay_at(ScheduleConfig{}, parse_reg_kind(kind), epoch);
      },
      py::arg("kind"), py::arg("epoch"));
}
