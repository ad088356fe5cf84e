#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "sfwm/biphoton.hpp"
#include "sfwm/cli.hpp"
#include "sfwm/counting.hpp"
#include "sfwm/entanglement.hpp"
#include "sfwm/error.hpp"
#include "sfwm/figures.hpp"
#include "sfwm/rates.hpp"
#include "sfwm/units.hpp"
#include "sfwm/waveguide.hpp"

namespace py = pybind11;
using namespace sfwm;

namespace {

double purity_of(const Eigen::MatrixXcd& values) {
  const spectral::FrequencyGrid gs(0.0, 1.0, static_cast<std::size_t>(values.rows()));
  const spectral::FrequencyGrid gi(0.0, 1.0, static_cast<std::size_t>(values.cols()));
  return biphoton::schmidt_purity({gs, gi, values, biphoton::JointKind::Amplitude, false}).purity;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"sfwm-lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Photon-pair source modelling under coherent and incoherent pumping";

  static py::exception<Error> error(m, "SfwmError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("itu_channel", &itu_channel, py::arg("label"));
  m.def("parse_frequency", &parse_angular_frequency, py::arg("text"));

  m.def("schmidt_purity", &purity_of, py::arg("jsa"), "Purity of a joint spectral amplitude matrix.");
  m.def(
      "reference_purities",
      [](std::size_t points, std::uint64_t seed) {
        auto setup = figures::purity_reference_setup();
        setup.points = points;
        setup.seed = seed;
        const auto r = figures::purity_comparison(setup);
        return py::make_tuple(r.coherent_purity, r.incoherent_purity);
      },
      py::arg("points") = 256, py::arg("seed") = 1);

  m.def("sinc", &waveguide::sinc, py::arg("x"));
  m.def(
      "split_step_sum",
      [](double dk, double length, double gamma, double loss_db_per_m, int segments, double power) {
        waveguide::WaveguideSpec wg;
        wg.length = length;
        wg.gamma = gamma;
        wg.loss_db_per_m = loss_db_per_m;
        wg.segments = segments;
        return waveguide::split_step_sum(dk, wg, power);
      },
      py::arg("dk"), py::arg("length"), py::arg("gamma"), py::arg("loss_db_per_m") = 0.0,
      py::arg("segments") = 1, py::arg("power") = 1.0);

  m.def("convolution_factor_gaussian", &rates::convolution_factor_gaussian, py::arg("interval"),
        py::arg("sigma"), py::arg("m") = 0);
  m.def("interval_overlap_quadrature", &rates::interval_overlap_quadrature, py::arg("interval"),
        py::arg("sigma"), py::arg("n_k"), py::arg("n_l"), py::arg("rel_tol") = 1e-6);
  m.def(
      "mc_phase_average",
      [](const std::vector<std::complex<double>>& amps, std::size_t ensembles, std::uint64_t seed) {
        const auto r = rates::mc_phase_average(amps, ensembles, seed);
        return py::make_tuple(r.mean, r.stderr_);
      },
      py::arg("amplitudes"), py::arg("ensembles"), py::arg("seed") = 1);

  py::class_<counting::Brightness>(m, "Brightness")
      .def(py::init([](double cc, double s, double i) { return counting::Brightness{cc, s, i}; }),
           py::arg("coincidence"), py::arg("signal"), py::arg("idler"))
      .def_readwrite("coincidence", &counting::Brightness::coincidence)
      .def_readwrite("signal", &counting::Brightness::signal)
      .def_readwrite("idler", &counting::Brightness::idler);
  const auto noise_model = [](double a1, double n1, double a2, double n2, double window) {
    return counting::NoiseModel{{a1, n1}, {a2, n2}, window};
  };
  m.def(
      "car",
      [noise_model](double power, const counting::Brightness& b, double a1, double n1, double a2, double n2,
                    double window) { return counting::car(power, b, noise_model(a1, n1, a2, n2, window)); },
      py::arg("power"), py::arg("brightness"), py::arg("a1") = 0.0, py::arg("n1") = 0.0, py::arg("a2") = 0.0,
      py::arg("n2") = 0.0, py::arg("window") = 0.8e-9);
  m.def(
      "car_peak",
      [noise_model](const counting::Brightness& b, double a1, double n1, double a2, double n2, double window,
                    double p_lo, double p_hi) {
        const auto peak = counting::car_peak(b, noise_model(a1, n1, a2, n2, window), p_lo, p_hi);
        return py::make_tuple(peak.power, peak.car);
      },
      py::arg("brightness"), py::arg("a1"), py::arg("n1"), py::arg("a2"), py::arg("n2"),
      py::arg("window") = 0.8e-9, py::arg("p_lo") = 1e-9, py::arg("p_hi") = 1e3);

  m.def(
      "chsh",
      [](double eta, double delta, double white_noise) {
        return entanglement::chsh(entanglement::sagnac_state({eta, delta, white_noise}),
                                  entanglement::default_signal_angles(), entanglement::default_idler_angles());
      },
      py::arg("eta") = 1.0, py::arg("delta") = 0.0, py::arg("white_noise") = 0.0);
  m.def(
      "fidelity",
      [](const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) { return entanglement::fidelity(a, b); },
      py::arg("rho_ex"), py::arg("rho_th"));
  m.def(
      "sagnac_state",
      [](double eta, double delta, double white_noise) {
        return Eigen::Matrix4cd(entanglement::sagnac_state({eta, delta, white_noise}).matrix());
      },
      py::arg("eta") = 1.0, py::arg("delta") = 0.0, py::arg("white_noise") = 0.0);

  m.def("run_cli", &run_cli, py::arg("args"), "Runs the command-line front end; returns its exit code.");
}
