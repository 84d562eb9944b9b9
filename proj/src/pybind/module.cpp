#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include "dhwave/errors.hpp"
#include "dhwave/fourier.hpp"
#include "dhwave/kernel.hpp"
#include "dhwave/noise.hpp"
#include "dhwave/solver.hpp"
#include "dhwave/spectral.hpp"

namespace py = pybind11;
using namespace dhwave;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Degenerate hyperbolic SPDE solver core";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<QuadratureNoConvergence>(m, "QuadratureNoConvergence",
                                                  PyExc_ArithmeticError);
  py::register_exception<UnsupportedMeasure>(m, "UnsupportedMeasure",
                                             PyExc_ValueError);
  py::register_exception<TabulationTooCoarse>(m, "TabulationTooCoarse",
                                              PyExc_ValueError);
  py::register_exception<GridTooCoarse>(m, "GridTooCoarse", PyExc_ValueError);
  py::register_exception<SupportOverflow>(m, "SupportOverflow",
                                          PyExc_ValueError);

  // ---- kernel ----
  m.def(
      "gamma_eval",
      [](double t, double x1, double y1, double x2) {
        return gamma_eval({t, x1, y1, x2});
      },
      py::arg("t"), py::arg("x1"), py::arg("y1"), py::arg("x2"),
      "Closed-form kernel value, 0 outside the support");
  m.def(
      "in_support",
      [](double t, double x1, double y1, double x2) {
        return in_support({t, x1, y1, x2});
      },
      py::arg("t"), py::arg("x1"), py::arg("y1"), py::arg("x2"));

  py::class_<BumpAxis>(m, "BumpAxis")
      .def(py::init<double, double>(), py::arg("center") = 0.0,
           py::arg("radius") = 1.0)
      .def_readwrite("center", &BumpAxis::center)
      .def_readwrite("radius", &BumpAxis::radius)
      .def("value", &BumpAxis::value);

  py::class_<TestFunction>(m, "TestFunction")
      .def(py::init<BumpAxis, BumpAxis, BumpAxis, double>(), py::arg("t"),
           py::arg("x1"), py::arg("x2"), py::arg("amplitude") = 1.0)
      .def_readwrite("t", &TestFunction::t)
      .def_readwrite("x1", &TestFunction::x1)
      .def_readwrite("x2", &TestFunction::x2)
      .def_readwrite("amplitude", &TestFunction::amplitude)
      .def("value", &TestFunction::value);

  m.def("lop_apply", &lop_apply, py::arg("phi"), py::arg("t"), py::arg("x1"),
        py::arg("x2"), "Apply the differential operator to a product bump");
  m.def("weak_apply", &weak_apply, py::arg("y1"), py::arg("phi"),
        py::arg("tol"), py::arg("max_evals") = std::size_t{1'000'000},
        "Integral of the kernel against L(phi); equals phi(0, y1, 0)");

  // ---- transform side ----
  m.def(
      "fourier_gamma",
      [](double tau, double x1, double x2, double xi1, double xi2,
         double tol) { return fourier_gamma(tau, x1, x2, {xi1, xi2}, tol); },
      py::arg("tau"), py::arg("x1"), py::arg("x2"), py::arg("xi1"),
      py::arg("xi2"), py::arg("tol") = 1e-9);
  m.def(
      "fourier_gamma_direct",
      [](double tau, double x1, double x2, double xi1, double xi2,
         double tol) {
        return fourier_gamma_direct(tau, x1, x2, {xi1, xi2}, tol);
      },
      py::arg("tau"), py::arg("x1"), py::arg("x2"), py::arg("xi1"),
      py::arg("xi2"), py::arg("tol") = 1e-8);
  m.def(
      "bound_global",
      [](double tau, double x1, double xi1, double xi2) {
        return bound_global(tau, x1, {xi1, xi2});
      },
      py::arg("tau"), py::arg("x1"), py::arg("xi1"), py::arg("xi2"),
      "Calibrated envelope dominating |fourier_gamma|");
  m.def("kappa_tilde",
        [](double tau, double x1) { return kappa_tilde(tau, x1); },
        py::arg("tau"), py::arg("x1"));
  m.def("decay_slope", &decay_slope, py::arg("tau"), py::arg("x1"),
        py::arg("lo"), py::arg("hi"), py::arg("n"),
        py::arg("along_xi2_axis"));

  // ---- spectral measures ----
  py::class_<RieszPower>(m, "RieszPower")
      .def(py::init<double>(), py::arg("beta"))
      .def_readwrite("beta", &RieszPower::beta);
  py::class_<GaussianDensity>(m, "GaussianDensity")
      .def(py::init<double>(), py::arg("ell"))
      .def_readwrite("ell", &GaussianDensity::ell);
  py::class_<WhiteNoise>(m, "WhiteNoise").def(py::init<>());
  py::class_<TabulatedRadial>(m, "TabulatedRadial")
      .def(py::init<std::vector<std::pair<double, double>>>(),
           py::arg("samples"))
      .def_readwrite("samples", &TabulatedRadial::samples);

  py::class_<IntegralVerdict>(m, "IntegralVerdict")
      .def_readonly("divergent", &IntegralVerdict::divergent)
      .def_readonly("value", &IntegralVerdict::value)
      .def_readonly("method", &IntegralVerdict::method)
      .def_readonly("error_estimate", &IntegralVerdict::error_estimate)
      .def("__repr__", [](const IntegralVerdict& v) {
        return v.divergent
                   ? std::string("IntegralVerdict(divergent)")
                   : "IntegralVerdict(value=" + std::to_string(v.value) + ")";
      });

  py::enum_<AdmissibilityWeight>(m, "AdmissibilityWeight")
      .value("Degenerate", AdmissibilityWeight::Degenerate)
      .value("Wave", AdmissibilityWeight::Wave);

  m.def("sc_integral", &sc_integral, py::arg("mu"),
        "Admissibility integral with the degenerate (1+|xi|^{2/3}) weight");
  m.def("dalang_integral", &dalang_integral, py::arg("mu"),
        "Admissibility integral with the wave-equation (1+|xi|^2) weight");
  m.def("classify_quadrature", &classify_quadrature, py::arg("mu"),
        py::arg("weight"));
  m.def("admits_synthesis", &admits_synthesis, py::arg("mu"));
  m.def("norm_integral", &norm_integral, py::arg("t"), py::arg("x1"),
        py::arg("x2"), py::arg("mu"), py::arg("tol"),
        py::arg("r_cut") = 800.0,
        "Spectral L2 norm of the solution at one point");

  // ---- noise ----
  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](double dt, int t_steps, double x_extent, int n_modes,
                       std::uint64_t seed) {
             return GridSpec{dt, t_steps, x_extent, n_modes, seed};
           }),
           py::arg("dt") = 0.0625, py::arg("t_steps") = 16,
           py::arg("x_extent") = 2.2, py::arg("n_modes") = 32,
           py::arg("seed") = 1)
      .def_readwrite("dt", &GridSpec::dt)
      .def_readwrite("t_steps", &GridSpec::t_steps)
      .def_readwrite("x_extent", &GridSpec::x_extent)
      .def_readwrite("n_modes", &GridSpec::n_modes)
      .def_readwrite("seed", &GridSpec::seed);

  py::class_<NoiseGrid>(m, "NoiseGrid")
      .def_readonly("dt", &NoiseGrid::dt)
      .def_readonly("t_steps", &NoiseGrid::t_steps)
      .def_readonly("seed", &NoiseGrid::seed)
      .def_readonly("sample", &NoiseGrid::sample)
      .def_readonly("points", &NoiseGrid::points)
      .def_readonly("values", &NoiseGrid::values)
      .def("value", &NoiseGrid::value, py::arg("k"), py::arg("i"),
           py::arg("j"))
      .def("write_binary",
           [](const NoiseGrid& g, const std::string& path) {
             std::ofstream out(path, std::ios::binary);
             if (!out) throw DomainError("cannot open " + path);
             g.write_binary(out);
           },
           py::arg("path"))
      .def_static(
          "read_binary",
          [](const std::string& path) {
            std::ifstream in(path, std::ios::binary);
            if (!in) throw DomainError("cannot open " + path);
            return NoiseGrid::read_binary(in);
          },
          py::arg("path"));

  m.def("sample_noise", &sample_noise, py::arg("grid"), py::arg("mu"),
        py::arg("sample"),
        "One realization of the discretized noise increments");

  py::class_<CovarianceCheck>(m, "CovarianceCheck")
      .def_readonly("mc_value", &CovarianceCheck::mc_value)
      .def_readonly("mc_stderr", &CovarianceCheck::mc_stderr)
      .def_readonly("lattice_value", &CovarianceCheck::lattice_value)
      .def_readonly("spectral_value", &CovarianceCheck::spectral_value);

  m.def("covariance_mc_check", &covariance_mc_check, py::arg("phi"),
        py::arg("psi"), py::arg("grid"), py::arg("mu"), py::arg("n_samples"));

  // ---- solver ----
  py::class_<FieldEnsemble>(m, "FieldEnsemble")
      .def_readonly("n_samples", &FieldEnsemble::n_samples)
      .def_readonly("mean", &FieldEnsemble::mean)
      .def_readonly("variance", &FieldEnsemble::variance)
      .def_readonly("std_error", &FieldEnsemble::std_error);

  m.def(
      "simulate",
      [](const GridSpec& grid, const SpectralMeasureSpec& mu, double t,
         double x1, double x2, int n_samples) {
        return simulate(grid, mu, {t, x1, x2}, n_samples);
      },
      py::arg("grid"), py::arg("mu"), py::arg("t"), py::arg("x1"),
      py::arg("x2"), py::arg("n_samples"));

  py::enum_<IncrementAxis>(m, "IncrementAxis")
      .value("Time", IncrementAxis::Time)
      .value("X1", IncrementAxis::X1)
      .value("X2", IncrementAxis::X2);

  m.def("l2_increment", &l2_increment, py::arg("axis"), py::arg("t"),
        py::arg("x1"), py::arg("x2"), py::arg("delta"), py::arg("mu"),
        py::arg("tol"), py::arg("r_cut") = 800.0);

  py::class_<IncrementEstimate>(m, "IncrementEstimate")
      .def_readonly("mc_value", &IncrementEstimate::mc_value)
      .def_readonly("mc_stderr", &IncrementEstimate::mc_stderr)
      .def_readonly("lattice_value", &IncrementEstimate::lattice_value);

  m.def(
      "mc_l2_increment",
      [](const GridSpec& grid, const SpectralMeasureSpec& mu,
         IncrementAxis axis, double t, double x1, double x2, double delta,
         int n_samples, bool common_draws) {
        return mc_l2_increment(grid, mu, axis, {t, x1, x2}, delta, n_samples,
                               common_draws);
      },
      py::arg("grid"), py::arg("mu"), py::arg("axis"), py::arg("t"),
      py::arg("x1"), py::arg("x2"), py::arg("delta"), py::arg("n_samples"),
      py::arg("common_draws") = true);
}
