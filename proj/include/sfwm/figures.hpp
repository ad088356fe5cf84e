#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sfwm/biphoton.hpp"
#include "sfwm/counting.hpp"
#include "sfwm/rates.hpp"

namespace sfwm::figures {

/// Rectangular pump at `center` between two brick-wall channels; grids of
/// `points` cells spanning each channel plus one channel width per side.
struct PuritySetup {
  double center = 0.0;
  double signal_center = 0.0;
  double idler_center = 0.0;
  double filter_width = 0.0;    // rad/s
  double pump_bandwidth = 0.0;  // rad/s, full width
  std::size_t points = 256;
  std::uint64_t seed = 1;
};

/// C34 pump, C20/C48 channels, both 200 GHz wide.
PuritySetup purity_reference_setup();

struct PurityResult {
  biphoton::JointSpectrum coherent;    // filtered and normalized
  biphoton::JointSpectrum incoherent;
  double coherent_purity = 0.0;
  double incoherent_purity = 0.0;
};

/// Flat phase matching; the incoherent spectrum is the intensity sum.
PurityResult purity_comparison(const PuritySetup& setup);

struct PurityRow {
  double filter_width = 0.0;
  double pump_bandwidth = 0.0;
  double coherent = 0.0;
  double incoherent = 0.0;
};

/// Purity over filter widths {50, 100, 200} GHz and pump widths
/// {25, 50, 100, 200, 400} GHz.
std::vector<PurityRow> purity_map(std::uint64_t seed);

struct CurveSet {
  std::vector<double> abscissa;               // rad/s
  std::vector<double> labels;                 // curve parameter, rad/s
  std::vector<std::vector<double>> coincidences;  // [curve][point]
  std::vector<std::vector<double>> singles;       // signal arm
};

/// Square incoherent pump between unit-transmittance 200 GHz channels whose
/// centers sit `detuning` either side of the pump; one curve per bandwidth.
CurveSet detuning_curves(const std::vector<double>& detunings, const std::vector<double>& bandwidths,
                         double spacing);

/// Same pump at fixed pair detuning, swept in bandwidth.
CurveSet bandwidth_curve(const std::vector<double>& bandwidths, double detuning, double spacing);

/// Scenario shared by the two curve families.
counting::Scenario square_pump_scenario(double bandwidth, double detuning, double spacing);

struct CarCurves {
  std::vector<double> power;
  std::vector<double> coherent;
  std::vector<double> incoherent;
  std::vector<double> incoherent_noise_free;
  counting::Brightness coherent_brightness;
  counting::Brightness incoherent_brightness;
  counting::NoiseModel noise;
};

/// CAR versus power for a narrow coherent gaussian pump and a 200 GHz
/// square incoherent pump in the C20/C48 channels with a fixed noise model.
CarCurves car_curves(std::size_t points, double p_min, double p_max);

struct RateRow {
  int m = 0;
  double detuning = 0.0;
  double mismatch = 0.0;
  double coherent_analytic = 0.0;
  double incoherent_analytic = 0.0;
  double coherent_numeric = 0.0;
  double incoherent_numeric = 0.0;
};

/// Pair rates per detuning interval at unit power from the closed forms and
/// from the counting pipeline with gaussian pumps of rms width `sigma`
/// sampled at `sigma / resolution`.
std::vector<RateRow> rate_table(const rates::DetuningScheme& scheme, double sigma, int intervals,
                                double resolution, const waveguide::WaveguideSpec& wg,
                                const waveguide::DispersionModel& disp);

std::string purity_map_csv(const std::vector<PurityRow>& rows);
std::string curves_csv(const CurveSet& curves, const std::string& abscissa_name);
std::string car_curves_csv(const CarCurves& curves);
std::string rate_table_csv(const std::vector<RateRow>& rows);

}  // namespace sfwm::figures
