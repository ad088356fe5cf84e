#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace sfwm::spectral {

/// Uniform angular-frequency lattice: start + k * spacing for k in [0, size).
class FrequencyGrid {
 public:
  FrequencyGrid(double start, double spacing, std::size_t count);

  static FrequencyGrid centered(double center, double spacing, std::size_t count);

  double start() const noexcept { return start_; }
  double spacing() const noexcept { return spacing_; }
  std::size_t size() const noexcept { return count_; }
  double last() const noexcept { return at(static_cast<std::ptrdiff_t>(count_) - 1); }

  /// Lattice point k; k may lie outside [0, size) to address the extended lattice.
  double at(std::ptrdiff_t k) const noexcept { return start_ + static_cast<double>(k) * spacing_; }
  double operator[](std::size_t k) const noexcept { return at(static_cast<std::ptrdiff_t>(k)); }

  /// Fractional lattice coordinate of omega.
  double position(double omega) const noexcept { return (omega - start_) / spacing_; }

  std::vector<double> points() const;

  /// Same spacing and the other grid's points fall on this lattice.
  bool same_lattice(const FrequencyGrid& other, double tolerance = 1e-6) const;
  /// Same lattice, same start and same length.
  bool matches(const FrequencyGrid& other, double tolerance = 1e-6) const;

 private:
  double start_;
  double spacing_;
  std::size_t count_;
};

struct Band {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  double center() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double omega) const noexcept { return omega >= lo && omega <= hi; }
};

/// Fraction of the grid cell [center - spacing/2, center + spacing/2] inside band.
double cell_overlap(double center, double spacing, const Band& band);

/// Brick-wall transmittance sampled by cell overlap.
std::vector<double> brick_wall(const FrequencyGrid& grid, const Band& passband);

enum class PumpShape { Gaussian, Rectangular };

/// Continuous amplitude density alpha_C(w) = coefficient * shape(w).
/// For the gaussian shape `bandwidth` is sigma_p; for the rectangle it is the full width.
struct CoherentPump {
  double center = 0.0;
  double bandwidth = 0.0;
  PumpShape shape = PumpShape::Gaussian;
  double amplitude = 1.0;
  double coefficient = 1.0;

  double density(double omega) const;
};

/// Discrete, mutually incoherent components with random phases.
struct IncoherentPump {
  std::vector<double> frequencies;
  std::vector<double> intensities;  // |alpha_I(w_n)|^2
  std::vector<double> phases;
  double density_bandwidth = 0.0;   // delta-omega; 0 means "component spacing"
  double envelope_bandwidth = 0.0;  // sigma_A, informational

  /// Component spacing (density bandwidth for a single component).
  double spacing() const;
  void validate() const;
};

using PumpSpectrum = std::variant<CoherentPump, IncoherentPump>;

struct PowerPrefactor {
  double value = 1.0;
};

CoherentPump normalize_coherent(const CoherentPump& pump);

/// Coherent: kappa * |integral alpha_C|^2 of the normalized density.
/// Incoherent: kappa * sum |alpha_I|^2.
double pump_power(const PumpSpectrum& pump, PowerPrefactor kappa = {});

/// Components on center + offset + k * spacing. Rectangular envelopes are
/// sampled by cell overlap, gaussian ones (|alpha|^2 = exp(-(w-w0)^2/sigma^2))
/// pointwise out to 6 sigma. Phases come from draw_phases(seed).
IncoherentPump make_incoherent_pump(PumpShape shape, double center, double bandwidth,
                                    double spacing, std::uint64_t seed, double offset = 0.0);

/// Uniform i.i.d. phases in [0, 2 pi); same seed, same sequence.
std::vector<double> draw_phases(std::size_t count, std::uint64_t seed);

enum class SpectrumKind { Intensity, Transmittance };

struct MeasuredSpectrum {
  std::vector<double> wavelength_nm;  // strictly increasing
  std::vector<double> values;
  SpectrumKind kind = SpectrumKind::Intensity;
};

/// CSV rows "wavelength_nm,value"; '#' lines are comments and an optional
/// header is accepted. A header column named "intensity" or "transmittance"
/// selects the kind unless `kind` is given explicitly.
MeasuredSpectrum parse_measured_spectrum(std::istream& in, std::optional<SpectrumKind> kind,
                                         std::string_view source = "<stream>");
MeasuredSpectrum load_measured_spectrum(const std::filesystem::path& path,
                                        std::optional<SpectrumKind> kind = std::nullopt);

/// Zeroes values below threshold * max, converts to angular frequency and
/// linearly interpolates onto the grid.
std::vector<double> resample_to_grid(const MeasuredSpectrum& spectrum, const FrequencyGrid& grid,
                                     double threshold = 0.01);

struct BoundaryExtension {
  double max_detuning = 0.0;  // D-Omega, multiple of spacing
  double min_detuning = 0.0;  // d-Omega, multiple of spacing
  Band signal;                // padded, symmetric about the pump
  Band idler;
};

/// Pads a signal/idler band pair so that both cover the same detuning range
/// [min_detuning, max_detuning] about `pump_center`. The maximum detuning is
/// rounded up and the minimum rounded down to multiples of `spacing`.
BoundaryExtension extend_boundaries(const Band& signal, const Band& idler, double pump_center,
                                    double spacing);

struct SampledSpectrum {
  FrequencyGrid grid;
  std::vector<double> values;
};

/// Re-expresses values sampled on `grid` on the same lattice covering `band`;
/// points outside the original grid carry 0.
SampledSpectrum pad_to_band(const FrequencyGrid& grid, std::span<const double> values,
                            const Band& band);

/// Grid on the lattice anchor + k * spacing covering band (end points included
/// when they fall on the lattice).
FrequencyGrid lattice_grid(const Band& band, double spacing, double anchor);

}  // namespace sfwm::spectral
