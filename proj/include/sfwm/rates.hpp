#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sfwm/spectral.hpp"
#include "sfwm/waveguide.hpp"

namespace sfwm::rates {

/// Symmetric detuning intervals about the pump: interval m covers signal
/// detunings [m, m + 1) * interval and the mirrored idler detunings.
struct DetuningScheme {
  double interval = 0.0;  // Delta-Omega, rad/s
  double center = 0.0;    // omega_0, rad/s

  void validate() const;
  /// Omega(m) = m * interval.
  double detuning(int m) const { return m * interval; }
};

/// sqrt(2 pi) * interval * sigma; requires interval >= 10 sigma.
double convolution_factor_gaussian(double interval, double sigma, int m = 0);

/// Adaptive Gauss-Kronrod integral of exp(-(x + y)^2 / (2 sigma^2)) over signal
/// detuning x in [n_k, n_k + 1) * interval and idler detuning y in
/// (-(n_l + 1), -n_l] * interval.
double interval_overlap_quadrature(double interval, double sigma, int n_k, int n_l,
                                   double rel_tol = 1e-6);

/// Phase mismatch for the degenerate pump at the interval midpoint.
double interval_mismatch(int m, const DetuningScheme& scheme,
                         const waveguide::DispersionModel& disp);

/// (interval / 2 pi) gamma^2 L^2 P^2 sinc^2(dk L / 2) sqrt(2) / 2
double coherent_rate_interval(int m, const DetuningScheme& scheme, double sigma, double power,
                              const waveguide::WaveguideSpec& wg,
                              const waveguide::DispersionModel& disp);

/// (interval / 2 pi) gamma^2 L^2 P^2 sinc^2(dk L / 2)
double incoherent_rate_interval(int m, const DetuningScheme& scheme, double power,
                                const waveguide::WaveguideSpec& wg,
                                const waveguide::DispersionModel& disp);

/// 2 interval sum_p I_p sum_{m >= p} I_m.
double incoherent_sum_factor(const spectral::IncoherentPump& pump, const DetuningScheme& scheme);

/// Closed form: the diagonal factor for n_k == n_l, zero otherwise.
double asymmetric_interval_factor(int n_k, int n_l, double interval, double sigma);

enum class PhaseMode { Random, Zero };

struct PhaseAverage {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Ensemble mean of |sum A_m exp(i phi_m)|^2 over i.i.d. uniform phases.
PhaseAverage mc_phase_average(const std::vector<std::complex<double>>& amplitudes,
                              std::size_t ensembles, std::uint64_t seed,
                              PhaseMode mode = PhaseMode::Random);

/// kappa * sqrt(2 sqrt(pi)) * sqrt(sigma)
double xi_factor_coherent(double sigma, double kappa = 1.0);

}  // namespace sfwm::rates
