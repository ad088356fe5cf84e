#include "sfwm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>
#include <string>

#include "sfwm/error.hpp"
#include "sfwm/units.hpp"

namespace sfwm::spectral {

FrequencyGrid::FrequencyGrid(double start, double spacing, std::size_t count)
    : start_(start), spacing_(spacing), count_(count) {
  require(std::isfinite(start), ErrorKind::InvalidParameter, "grid start must be finite");
  require(spacing > 0.0 && std::isfinite(spacing), ErrorKind::InvalidParameter,
          "grid spacing must be positive");
  require(count >= 2, ErrorKind::InvalidParameter, "grid needs at least two points");
}

FrequencyGrid FrequencyGrid::centered(double center, double spacing, std::size_t count) {
  return {center - 0.5 * static_cast<double>(count - 1) * spacing, spacing, count};
}

std::vector<double> FrequencyGrid::points() const {
  std::vector<double> out(count_);
  for (std::size_t k = 0; k < count_; ++k) out[k] = (*this)[k];
  return out;
}

bool FrequencyGrid::same_lattice(const FrequencyGrid& other, double tolerance) const {
  if (std::abs(other.spacing_ - spacing_) > tolerance * spacing_) return false;
  const double shift = position(other.start_);
  return std::abs(shift - std::round(shift)) <= tolerance * std::max(1.0, std::abs(shift)) + tolerance;
}

bool FrequencyGrid::matches(const FrequencyGrid& other, double tolerance) const {
  return count_ == other.count_ && same_lattice(other, tolerance) &&
         std::abs(position(other.start_)) <= tolerance;
}

double cell_overlap(double center, double spacing, const Band& band) {
  const double lo = std::max(center - 0.5 * spacing, band.lo);
  const double hi = std::min(center + 0.5 * spacing, band.hi);
  return std::clamp((hi - lo) / spacing, 0.0, 1.0);
}

std::vector<double> brick_wall(const FrequencyGrid& grid, const Band& passband) {
  std::vector<double> t(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) t[k] = cell_overlap(grid[k], grid.spacing(), passband);
  return t;
}

double CoherentPump::density(double omega) const {
  const double x = omega - center;
  if (shape == PumpShape::Gaussian) return coefficient * std::exp(-x * x / (2.0 * bandwidth * bandwidth));
  return std::abs(x) <= 0.5 * bandwidth ? coefficient : 0.0;
}

double IncoherentPump::spacing() const {
  if (frequencies.size() >= 2) return frequencies[1] - frequencies[0];
  return density_bandwidth;
}

void IncoherentPump::validate() const {
  require(intensities.size() == frequencies.size() && phases.size() == frequencies.size(),
          ErrorKind::InvalidParameter, "incoherent pump: component arrays differ in length");
  for (std::size_t n = 0; n < frequencies.size(); ++n) {
    require(std::isfinite(intensities[n]) && intensities[n] >= 0.0, ErrorKind::InvalidParameter,
            "incoherent pump: negative intensity");
    require(phases[n] >= 0.0 && phases[n] < kTwoPi, ErrorKind::InvalidParameter,
            "incoherent pump: phase outside [0, 2pi)");
    if (n > 0) {
      require(frequencies[n] > frequencies[n - 1], ErrorKind::InvalidParameter,
              "incoherent pump: frequencies must be strictly increasing");
    }
  }
  if (frequencies.size() >= 2) {
    const double d = spacing();
    for (std::size_t n = 1; n < frequencies.size(); ++n) {
      const double step = frequencies[n] - frequencies[n - 1];
      require(std::abs(step - d) <= 1e-6 * d, ErrorKind::InvalidParameter,
              "incoherent pump: components must be evenly spaced");
    }
  }
  require(density_bandwidth >= 0.0, ErrorKind::InvalidParameter,
          "incoherent pump: negative density bandwidth");
}

CoherentPump normalize_coherent(const CoherentPump& pump) {
  require(pump.bandwidth > 0.0 && std::isfinite(pump.bandwidth), ErrorKind::InvalidParameter,
          "coherent pump bandwidth must be positive");
  CoherentPump out = pump;
  if (pump.shape == PumpShape::Gaussian) {
    out.coefficient = std::sqrt(1.0 / (pump.bandwidth * std::sqrt(kPi)));
  } else {
    out.coefficient = 1.0 / std::sqrt(pump.bandwidth);
  }
  return out;
}

double pump_power(const PumpSpectrum& pump, PowerPrefactor kappa) {
  require(kappa.value > 0.0, ErrorKind::InvalidParameter, "power prefactor must be positive");
  if (const auto* c = std::get_if<CoherentPump>(&pump)) {
    const CoherentPump n = normalize_coherent(*c);
    // |integral alpha|^2 of the unit-norm density
    if (n.shape == PumpShape::Gaussian) return kappa.value * 2.0 * std::sqrt(kPi) * n.bandwidth;
    return kappa.value * n.bandwidth;
  }
  const auto& inc = std::get<IncoherentPump>(pump);
  require(!inc.intensities.empty(), ErrorKind::InvalidParameter, "incoherent pump has no components");
  double sum = 0.0;
  for (double v : inc.intensities) sum += v;
  return kappa.value * sum;
}

IncoherentPump make_incoherent_pump(PumpShape shape, double center, double bandwidth,
                                    double spacing, std::uint64_t seed, double offset) {
  require(bandwidth > 0.0, ErrorKind::InvalidParameter, "pump bandwidth must be positive");
  require(spacing > 0.0, ErrorKind::InvalidParameter, "component spacing must be positive");
  IncoherentPump pump;
  pump.envelope_bandwidth = bandwidth;
  pump.density_bandwidth = spacing;
  const double reach = shape == PumpShape::Gaussian ? 6.0 * bandwidth : 0.5 * bandwidth + spacing;
  const auto kmax = static_cast<long>(std::ceil(reach / spacing)) + 1;
  const Band box{center - 0.5 * bandwidth, center + 0.5 * bandwidth};
  for (long k = -kmax; k <= kmax; ++k) {
    const double w = center + offset + static_cast<double>(k) * spacing;
    double intensity = 0.0;
    if (shape == PumpShape::Gaussian) {
      const double x = (w - center) / bandwidth;
      if (std::abs(x) <= 6.0) intensity = std::exp(-x * x);
    } else {
      intensity = cell_overlap(w, spacing, box);
    }
    if (intensity > 0.0) {
      pump.frequencies.push_back(w);
      pump.intensities.push_back(intensity);
    }
  }
  pump.phases = draw_phases(pump.frequencies.size(), seed);
  return pump;
}

std::vector<double> draw_phases(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(count);
  for (auto& phase : out) {
    phase = kTwoPi * std::generate_canonical<double, 64>(rng);
    if (phase >= kTwoPi) phase = 0.0;
  }
  return out;
}

namespace {

std::string trim_copy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool to_double(const std::string& s, double& out) {
  const std::string t = trim_copy(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return *end == '\0' && std::isfinite(out);
}

}  // namespace

MeasuredSpectrum parse_measured_spectrum(std::istream& in, std::optional<SpectrumKind> kind,
                                         std::string_view source) {
  std::optional<SpectrumKind> header_kind;
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data_or_header = false;
  auto where = [&] { return std::string(source) + ":" + std::to_string(line_no) + ": "; };

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    const std::string t = trim_copy(line);
    if (t.empty() || t.front() == '#') continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos) fail(ErrorKind::Parse, where() + "expected 'wavelength_nm,value'");
    const std::string first = t.substr(0, comma);
    const std::string second = t.substr(comma + 1);
    double wl = 0.0, value = 0.0;
    if (!seen_data_or_header && !to_double(first, wl)) {
      if (trim_copy(first) != "wavelength_nm") fail(ErrorKind::Parse, where() + "unrecognized header");
      const std::string col = trim_copy(second);
      if (col == "intensity") header_kind = SpectrumKind::Intensity;
      else if (col == "transmittance") header_kind = SpectrumKind::Transmittance;
      else if (col != "value") fail(ErrorKind::Parse, where() + "unrecognized header column '" + col + "'");
      seen_data_or_header = true;
      continue;
    }
    seen_data_or_header = true;
    if (!to_double(first, wl) || !to_double(second, value)) {
      fail(ErrorKind::Parse, where() + "malformed row '" + t + "'");
    }
    if (wl <= 0.0) fail(ErrorKind::Data, where() + "wavelength must be positive");
    if (value < 0.0) fail(ErrorKind::Data, where() + "negative value");
    rows.emplace_back(wl, value);
  }
  if (rows.empty()) fail(ErrorKind::Data, std::string(source) + ": no samples");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  MeasuredSpectrum out;
  out.kind = kind.value_or(header_kind.value_or(SpectrumKind::Intensity));
  for (const auto& [wl, value] : rows) {
    if (!out.wavelength_nm.empty() && wl == out.wavelength_nm.back()) {
      if (value == out.values.back()) continue;
      fail(ErrorKind::Data, std::string(source) + ": conflicting samples at " + format_number(wl) +
                                " nm; wavelengths are not monotone");
    }
    out.wavelength_nm.push_back(wl);
    out.values.push_back(value);
  }
  if (out.kind == SpectrumKind::Transmittance) {
    for (double v : out.values) {
      require(v <= 1.0 + 1e-9, ErrorKind::Data, std::string(source) + ": transmittance above 1");
    }
  }
  return out;
}

MeasuredSpectrum load_measured_spectrum(const std::filesystem::path& path,
                                        std::optional<SpectrumKind> kind) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Data, "cannot open spectrum file '" + path.string() + "'");
  return parse_measured_spectrum(in, kind, path.string());
}

std::vector<double> resample_to_grid(const MeasuredSpectrum& spectrum, const FrequencyGrid& grid,
                                     double threshold) {
  const std::size_t n = spectrum.values.size();
  require(n >= 2, ErrorKind::Data, "need at least two samples to interpolate");
  require(threshold >= 0.0 && threshold < 1.0, ErrorKind::InvalidParameter,
          "threshold must lie in [0, 1)");
  const double peak = *std::max_element(spectrum.values.begin(), spectrum.values.end());
  const double floor = threshold * peak;

  // Increasing wavelength means decreasing frequency: walk the samples backwards.
  std::vector<double> omega(n), value(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = n - 1 - k;
    omega[k] = wavelength_nm_to_angular(spectrum.wavelength_nm[src]);
    const double v = spectrum.values[src];
    value[k] = v < floor ? 0.0 : v;
  }
  const double slack = 1e-9 * grid.spacing();
  require(grid.start() >= omega.front() - slack && grid.last() <= omega.back() + slack,
          ErrorKind::OutOfRange, "grid extends outside the measured spectrum");

  std::vector<double> out(grid.size());
  std::size_t seg = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double w = std::clamp(grid[k], omega.front(), omega.back());
    while (seg + 2 < n && w > omega[seg + 1]) ++seg;
    const double t = (w - omega[seg]) / (omega[seg + 1] - omega[seg]);
    out[k] = value[seg] + t * (value[seg + 1] - value[seg]);
  }
  return out;
}

BoundaryExtension extend_boundaries(const Band& signal, const Band& idler, double pump_center,
                                    double spacing) {
  require(spacing > 0.0, ErrorKind::InvalidParameter, "spacing must be positive");
  require(signal.width() > 0.0 && idler.width() > 0.0, ErrorKind::InvalidParameter,
          "bands must be non-empty");
  const bool signal_below = signal.hi < pump_center && idler.lo > pump_center;
  const bool signal_above = signal.lo > pump_center && idler.hi < pump_center;
  require(signal_below || signal_above, ErrorKind::InvalidGeometry,
          "signal and idler bands must lie on opposite sides of the pump without covering it");

  auto detunings = [&](const Band& b) {
    const double a = std::abs(b.lo - pump_center);
    const double c = std::abs(b.hi - pump_center);
    return std::pair{std::min(a, c), std::max(a, c)};
  };
  const auto [s_min, s_max] = detunings(signal);
  const auto [i_min, i_max] = detunings(idler);
  const double eps = 1e-9;
  const double max_units = std::ceil(std::max(s_max, i_max) / spacing - eps);
  const double min_units = std::floor(std::min(s_min, i_min) / spacing + eps);

  BoundaryExtension out;
  out.max_detuning = max_units * spacing;
  out.min_detuning = min_units * spacing;
  const Band below{pump_center - out.max_detuning, pump_center - out.min_detuning};
  const Band above{pump_center + out.min_detuning, pump_center + out.max_detuning};
  out.signal = signal_below ? below : above;
  out.idler = signal_below ? above : below;
  return out;
}

FrequencyGrid lattice_grid(const Band& band, double spacing, double anchor) {
  const double eps = 1e-9;
  const double k_lo = std::ceil((band.lo - anchor) / spacing - eps);
  const double k_hi = std::floor((band.hi - anchor) / spacing + eps);
  require(k_hi > k_lo, ErrorKind::InvalidParameter, "band narrower than two lattice points");
  return {anchor + k_lo * spacing, spacing, static_cast<std::size_t>(k_hi - k_lo) + 1};
}

SampledSpectrum pad_to_band(const FrequencyGrid& grid, std::span<const double> values,
                            const Band& band) {
  require(values.size() == grid.size(), ErrorKind::InvalidParameter,
          "values do not match the grid length");
  Band target{std::min(band.lo, grid.start()), std::max(band.hi, grid.last())};
  FrequencyGrid out_grid = lattice_grid(target, grid.spacing(), grid.start());
  std::vector<double> out(out_grid.size(), 0.0);
  const auto shift = static_cast<std::ptrdiff_t>(std::llround(out_grid.position(grid.start())));
  for (std::size_t k = 0; k < grid.size(); ++k) out[static_cast<std::size_t>(shift) + k] = values[k];
  return {out_grid, std::move(out)};
}

}  // namespace sfwm::spectral
