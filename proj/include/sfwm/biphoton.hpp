#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sfwm/channels.hpp"
#include "sfwm/spectral.hpp"
#include "sfwm/waveguide.hpp"

namespace sfwm::biphoton {

/// Pump on a uniform lattice, scaled to unit power.
/// Coherent: complex amplitude density a_j with sum |a_j|^2 d = 1 and
/// field_sum = sum a_j d. Incoherent: a_j = sqrt(I_j) exp(i phi_j), sum I_j = 1.
struct DiscretePump {
  double start = 0.0;
  double spacing = 1.0;
  std::vector<std::complex<double>> amplitude;
  bool coherent = true;
  std::complex<double> field_sum{0.0, 0.0};

  double frequency(std::size_t j) const { return start + static_cast<double>(j) * spacing; }
};

/// Lattice offset for pump components so that pump-pair sums fall on the
/// (signal + idler) diagonals of the two grids; the one nearest `center`.
double pump_anchor(const spectral::FrequencyGrid& grid_s, const spectral::FrequencyGrid& grid_i,
                   double center);

DiscretePump discretize(const spectral::CoherentPump& pump, double spacing, double anchor);
DiscretePump discretize(const spectral::IncoherentPump& pump, double spacing);

/// Enumerates pump terms contributing to each (signal, idler) cell with cached
/// phase-mismatch tables. Amplitudes are per unit pump power.
class PairSource {
 public:
  PairSource(DiscretePump pump, waveguide::WaveguideSpec wg, waveguide::DispersionModel disp,
             spectral::FrequencyGrid grid_s, spectral::FrequencyGrid grid_i,
             double phase_power = 1.0);

  const DiscretePump& pump() const noexcept { return pump_; }
  const spectral::FrequencyGrid& grid_s() const noexcept { return grid_s_; }
  const spectral::FrequencyGrid& grid_i() const noexcept { return grid_i_; }
  double spacing() const noexcept { return grid_s_.spacing(); }

  /// f(j, q, amplitude) for every pump pair (j, q) with w_j + w_q on the diagonal
  /// of cell (s, i).
  template <class F>
  void for_each_term(std::size_t s, std::size_t i, F&& f) const {
    const long n = diagonal(s, i);
    const long count = static_cast<long>(pump_.amplitude.size());
    const long lo = std::max(0L, n - (count - 1));
    const long hi = std::min(count - 1, n);
    for (long j = lo; j <= hi; ++j) {
      const auto q = static_cast<std::size_t>(n - j);
      const auto jj = static_cast<std::size_t>(j);
      f(jj, q, amplitude(kp_[jj] + kp_[q] - ks_[s] - ki_[i]));
    }
  }

  /// Pair density |F|^2 of cell (s, i) as a coefficient of P^2.
  double pair_density(std::size_t s, std::size_t i) const;
  /// Coherent sum with pump phases `phases` (incoherent pumps) or the pump's
  /// own phases (coherent pumps), scaled so that its mean square is pair_density.
  std::complex<double> field(std::size_t s, std::size_t i, const std::vector<double>* phases) const;

 private:
  long diagonal(std::size_t s, std::size_t i) const;
  std::complex<double> amplitude(double dk) const;

  DiscretePump pump_;
  waveguide::WaveguideSpec wg_;
  double phase_power_;
  spectral::FrequencyGrid grid_s_;
  spectral::FrequencyGrid grid_i_;
  std::vector<double> kp_, ks_, ki_;
  double diagonal_origin_ = 0.0;
  std::complex<double> flat_amplitude_{0.0, 0.0};
  bool flat_ = false;
};

enum class JointKind { Amplitude, Intensity };

struct JointSpectrum {
  spectral::FrequencyGrid grid_s;
  spectral::FrequencyGrid grid_i;
  Eigen::MatrixXcd values;  // rows: signal, columns: idler
  JointKind kind = JointKind::Amplitude;
  bool normalized = false;

  void validate() const;
};

/// Scales an amplitude spectrum to sum |F|^2 = 1 (intensity: sum = 1).
JointSpectrum normalized(JointSpectrum js);

struct BuildOptions {
  bool normalize = true;
  double phase_power = 1.0;  // pump power used only by the nonlinear phase term
};

JointSpectrum build_jsa_coherent(const spectral::CoherentPump& pump,
                                 const waveguide::WaveguideSpec& wg,
                                 const waveguide::DispersionModel& disp,
                                 const spectral::FrequencyGrid& grid_s,
                                 const spectral::FrequencyGrid& grid_i, BuildOptions options = {});

struct IntensitySum {};
struct MonteCarlo {
  std::uint64_t seed = 1;
  std::size_t ensembles = 1000;
};
using IncoherentMode = std::variant<IntensitySum, MonteCarlo>;

JointSpectrum build_jsa_incoherent(const spectral::IncoherentPump& pump,
                                   const waveguide::WaveguideSpec& wg,
                                   const waveguide::DispersionModel& disp,
                                   const spectral::FrequencyGrid& grid_s,
                                   const spectral::FrequencyGrid& grid_i,
                                   IncoherentMode mode = IntensitySum{}, BuildOptions options = {});

struct MonteCarloJsi {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd stderr_;
};

/// Ensemble mean and standard error of |F|^2 per cell, unnormalized.
MonteCarloJsi build_jsi_monte_carlo(const spectral::IncoherentPump& pump,
                                    const waveguide::WaveguideSpec& wg,
                                    const waveguide::DispersionModel& disp,
                                    const spectral::FrequencyGrid& grid_s,
                                    const spectral::FrequencyGrid& grid_i, MonteCarlo mode,
                                    double phase_power = 1.0);

JointSpectrum apply_filters(const JointSpectrum& js, const std::vector<double>& t_s,
                            const std::vector<double>& t_i, bool renormalize = false);

/// |F|^2 as an intensity spectrum.
JointSpectrum intensity(const JointSpectrum& js);

struct SchmidtResult {
  double purity = 0.0;
  std::vector<double> coefficients;  // lambda_k, descending, summing to 1
};

SchmidtResult schmidt_purity(const JointSpectrum& js);

/// Entry (a, b) = sum |F|^2 T_a(ws) T_b(wi) d^2.
Eigen::MatrixXd channel_jsi_matrix(const JointSpectrum& js, const ChannelBank& bank_s,
                                   const ChannelBank& bank_i);

std::string to_json(const JointSpectrum& js);
/// Inverse of to_json; Parse error on malformed documents.
JointSpectrum from_json(std::string_view text);
std::string channel_matrix_csv(const Eigen::MatrixXd& matrix, const ChannelBank& bank_s,
                               const ChannelBank& bank_i);

}  // namespace sfwm::biphoton
