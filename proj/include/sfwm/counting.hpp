#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfwm/biphoton.hpp"
#include "sfwm/channels.hpp"
#include "sfwm/spectral.hpp"
#include "sfwm/waveguide.hpp"

namespace sfwm::counting {

struct EfficiencyModel {
  double transmission_s = 1.0;
  double transmission_i = 1.0;
  double detection_s = 1.0;
  double detection_i = 1.0;

  void validate() const;
  double signal() const { return transmission_s * detection_s; }
  double idler() const { return transmission_i * detection_i; }
};

struct ArmNoise {
  double linear = 0.0;      // a, counts/s per W
  double background = 0.0;  // N0, counts/s
};

struct NoiseModel {
  ArmNoise signal;
  ArmNoise idler;
  double window = 0.8e-9;  // coincidence window, s

  void validate() const;
};

/// Power-quadratic coefficients: coincidences = coincidence * P^2 etc.
struct Brightness {
  double coincidence = 0.0;
  double signal = 0.0;
  double idler = 0.0;
};

struct CountingResult {
  double singles_s = 0.0;
  double singles_i = 0.0;
  double coincidences = 0.0;
  double accidentals = 0.0;
  double car = 0.0;
};

/// Accumulates pair rates d^2/(2 pi) |F|^2 over all (signal, idler) cells of
/// the two banks' grids, weighted by arm transmittances and efficiencies.
Brightness pipeline_counts(const biphoton::DiscretePump& pump, const waveguide::WaveguideSpec& wg,
                           const waveguide::DispersionModel& disp, const ChannelBank& bank_s,
                           const ChannelBank& bank_i, const EfficiencyModel& eff,
                           double phase_power = 1.0);

/// Unweighted pair rate over both grids (every cell counted once).
double total_pair_rate(const biphoton::PairSource& source);

double singles_rate(double power, double brightness, const ArmNoise& noise);

CountingResult evaluate(double power, const Brightness& b, const NoiseModel& noise);

double car(double power, const Brightness& b, const NoiseModel& noise);

struct CarPeak {
  double power = 0.0;
  double car = 0.0;
};

/// Positive root of 2 B1 B2 P^4 + (a1 B2 + a2 B1) P^3 - (a1 N2 + a2 N1) P - 2 N1 N2
/// bracketed by [p_lo, p_hi], found by bisection.
CarPeak car_peak(const Brightness& b, const NoiseModel& noise, double p_lo, double p_hi);

/// Residual of the peak condition relative to its largest term.
double car_peak_residual(double power, const Brightness& b, const NoiseModel& noise);

/// Change of the peak condition when linear noise scales by mu1 and background
/// by mu2, evaluated at the original peak power.
double car_shift_delta(double p1, double mu1, double mu2, const Brightness& b,
                       const NoiseModel& noise);

/// Linear noise scaled by mu1, background by mu2.
NoiseModel scale_noise(const NoiseModel& noise, double mu1, double mu2);

struct Counts {
  std::uint64_t singles_s = 0;
  std::uint64_t singles_i = 0;
  std::uint64_t coincidences = 0;
  std::uint64_t accidentals = 0;
};

Counts simulate_counts(const CountingResult& rates, double duration, std::uint64_t seed);

struct HeraldedCounts {
  std::uint64_t herald = 0;      // N1
  std::uint64_t herald_b = 0;    // N12
  std::uint64_t herald_c = 0;    // N13
  std::uint64_t triple = 0;      // N123
};

double heralded_g2(const HeraldedCounts& counts);

/// Per-window Monte-Carlo of a heralded beam-splitter measurement: Poisson pair
/// number with mean `pairs_per_window`, each idler split 50:50, threshold
/// detectors with independent dark-click probabilities.
HeraldedCounts simulate_heralded(double pairs_per_window, double herald_noise, double arm_noise,
                                 std::uint64_t trials, std::uint64_t seed);

/// Heralded g2 predicted from rates with pairs plus independent noise singles.
double predicted_heralded_g2(const CountingResult& rates, double window);

struct NoiseFit {
  double brightness = 0.0;
  ArmNoise noise;
};

struct SinglesSample {
  double power = 0.0;
  double singles_s = 0.0;
  double singles_i = 0.0;
};

/// Least squares on [P^2, P, 1] for each arm.
std::pair<NoiseFit, NoiseFit> fit_noise(const std::vector<SinglesSample>& samples);
std::vector<SinglesSample> load_singles_table(const std::string& path);

enum class Coherence { Coherent, Incoherent };

struct ChannelPlan {
  std::vector<std::string> signal_labels;
  std::vector<double> signal_centers;
  std::vector<std::string> idler_labels;
  std::vector<double> idler_centers;
  double width = 0.0;
  bool all_pass = false;
  /// Measured transmittance replacing the brick wall of the named channel;
  /// zero outside the measured range.
  std::map<std::string, spectral::MeasuredSpectrum> measured;
};

/// Everything needed to turn a pump description into count rates.
struct Scenario {
  Coherence coherence = Coherence::Incoherent;
  spectral::PumpShape shape = spectral::PumpShape::Rectangular;
  double channel_midpoint = 0.0;  // rad/s; the pump sits here plus `asymmetry`
  double bandwidth = 0.0;
  double asymmetry = 0.0;
  std::optional<double> pair_detuning;  // replace the plan with one channel per side
  waveguide::WaveguideSpec wg;
  waveguide::DispersionModel disp;
  double spacing = 0.0;
  double margin = 0.0;  // grid padding beyond the outermost channel edge, rad/s
  ChannelPlan channels;
  EfficiencyModel efficiency;
  NoiseModel noise;
  double power = 1e-3;
  std::uint64_t seed = 1;
  std::optional<Brightness> fixed_brightness;

  double pump_center() const { return channel_midpoint + asymmetry; }
};

struct Banks {
  ChannelBank signal;
  ChannelBank idler;
};

Banks build_banks(const Scenario& scenario);
biphoton::DiscretePump build_pump(const Scenario& scenario, const spectral::FrequencyGrid& grid_s,
                                  const spectral::FrequencyGrid& grid_i);
Brightness brightness(const Scenario& scenario);

enum class SweepVariable { Power, Bandwidth, Detuning, Asymmetry };

SweepVariable parse_sweep_variable(const std::string& name);
std::string to_string(SweepVariable v);

struct SweepRow {
  double value = 0.0;
  Brightness brightness;
  CountingResult rates;
  double g2 = 0.0;
};

std::vector<SweepRow> sweep(SweepVariable variable, const std::vector<double>& values,
                            const Scenario& scenario);

std::string sweep_csv(SweepVariable variable, const std::vector<SweepRow>& rows);

}  // namespace sfwm::counting
