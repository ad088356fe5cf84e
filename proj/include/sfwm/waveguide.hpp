#pragma once

#include <complex>
#include <limits>

namespace sfwm::waveguide {

/// Cubic Taylor expansion of k(w) about `reference`.
struct DispersionModel {
  double reference = 0.0;  // rad/s
  double k0 = 0.0;         // 1/m
  double k1 = 0.0;         // s/m
  double beta2 = 0.0;      // s^2/m
  double beta3 = 0.0;      // s^3/m
  double span = std::numeric_limits<double>::infinity();  // valid |w - reference|

  void validate() const;
};

struct WaveguideSpec {
  double length = 1.0;          // m
  double gamma = 1.0;           // 1/(W m)
  double loss_db_per_m = 0.0;
  int segments = 1;
  bool include_nonlinear_phase = false;

  void validate() const;
  /// Linear power attenuation coefficient in 1/m.
  double loss_per_m() const;
};

double propagation_constant(double omega, const DispersionModel& disp);

struct FourWave {
  double pump1 = 0.0;
  double pump2 = 0.0;
  double signal = 0.0;
  double idler = 0.0;
};

/// k(p1) + k(p2) - k(s) - k(i). The four frequencies must conserve energy to
/// within `tolerance` (rad/s).
double phase_mismatch(const FourWave& waves, const DispersionModel& disp, double tolerance);

/// Same, plus the 2 gamma P nonlinear term when the waveguide enables it.
double phase_mismatch(const FourWave& waves, const DispersionModel& disp, double tolerance,
                      const WaveguideSpec& wg, double pump_power);

double sinc(double x);
/// sinc(dk L / 2)
double pm_sinc(double dk, double length);

/// Segment sum for a given linear mismatch dk: sum_j gamma P(z_j) dz
/// exp(i phi(z_j)) T_out(z_j) over midpoints z_j. Without the nonlinear phase the
/// sum is a geometric series and is evaluated in closed form.
std::complex<double> split_step_sum(double dk, const WaveguideSpec& wg, double pump_power);

/// Explicit per-segment loop; reference path for split_step_sum.
std::complex<double> split_step_sum_direct(double dk, const WaveguideSpec& wg, double pump_power);

std::complex<double> split_step_amplitude(const FourWave& waves, const WaveguideSpec& wg,
                                          const DispersionModel& disp, double pump_power,
                                          double tolerance);

}  // namespace sfwm::waveguide
