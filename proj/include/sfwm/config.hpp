#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfwm/counting.hpp"
#include "sfwm/entanglement.hpp"
#include "sfwm/spectral.hpp"
#include "sfwm/waveguide.hpp"

namespace sfwm::config {

struct PumpConfig {
  counting::Coherence coherence = counting::Coherence::Incoherent;
  spectral::PumpShape shape = spectral::PumpShape::Rectangular;
  double center = 0.0;     // rad/s
  double bandwidth = 0.0;  // rad/s: sigma for gaussian shapes, full width for rectangles
  double power = 1e-3;     // W
  double asymmetry = 0.0;  // pump center offset from the channel midpoint, rad/s
};

struct GridConfig {
  std::size_t points = 256;
  std::optional<double> spacing;  // rad/s; derived from points when absent
  double margin_channels = 1.0;   // padding per side in channel widths
};

struct ChannelConfig {
  std::vector<std::string> signal;
  std::vector<std::string> idler;
  double width = 0.0;  // rad/s
  bool all_pass = false;
  std::optional<double> pair_detuning;
  std::map<std::string, std::string> spectra;  // label -> transmittance CSV
};

struct SweepConfig {
  counting::SweepVariable variable = counting::SweepVariable::Power;
  std::vector<double> values;
};

struct CarConfig {
  double power_min = 1e-5;
  double power_max = 1e-2;
  std::size_t points = 100;
  bool log_spacing = true;
  std::optional<counting::Brightness> brightness;
};

struct JsaConfig {
  std::string mode = "intensity_sum";  // or "monte_carlo"
  std::size_t ensembles = 1000;
  bool filters = true;
  std::string input;  // dumped joint spectrum to analyse instead of building one
};

struct RatesConfig {
  double interval = 0.0;   // rad/s; 0 selects 100 pump bandwidths
  int intervals = 4;
  double resolution = 4.0; // numeric grid points per pump bandwidth
};

struct EntanglementConfig {
  entanglement::SagnacParams state;
  entanglement::AngleSet theta_s = entanglement::default_signal_angles();
  entanglement::AngleSet theta_i = entanglement::default_idler_angles();
  entanglement::SagnacParams reference{1.0, 0.0, 0.0};
};

struct TomographyConfig {
  std::string counts;
  double accidentals = 0.0;  // per setting, subtracted before inversion
};

struct SpectrumConfig {
  std::string path;
  std::optional<spectral::SpectrumKind> kind;
  double threshold = 0.01;
};

struct RunConfig {
  PumpConfig pump;
  waveguide::WaveguideSpec waveguide;
  waveguide::DispersionModel dispersion;
  GridConfig grid;
  ChannelConfig channels;
  counting::EfficiencyModel efficiency;
  counting::NoiseModel noise;
  SweepConfig sweep;
  CarConfig car;
  JsaConfig jsa;
  RatesConfig rates;
  EntanglementConfig entanglement;
  TomographyConfig tomography;
  SpectrumConfig spectrum;
  std::uint64_t seed = 1;
  std::string output = ".";
};

/// Defaults with the pump at C34, channels C20/C48 and a 1 cm nanowire.
RunConfig defaults();

/// Parses JSON text; unknown keys are rejected with their dotted path.
RunConfig parse(std::string_view json_text, const std::filesystem::path& base_dir = {});
RunConfig load(const std::filesystem::path& path);

/// Grid spacing used for joint spectra and the counting pipeline.
double resolved_spacing(const RunConfig& cfg);

/// Counting scenario described by the configuration.
counting::Scenario scenario(const RunConfig& cfg);

}  // namespace sfwm::config
