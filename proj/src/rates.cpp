#include "sfwm/rates.hpp"

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sfwm/error.hpp"
#include "sfwm/units.hpp"

namespace sfwm::rates {

void DetuningScheme::validate() const {
  require(interval > 0.0 && std::isfinite(interval), ErrorKind::InvalidParameter,
          "detuning interval must be positive");
}

double convolution_factor_gaussian(double interval, double sigma, int /*m*/) {
  require(sigma >= 0.0 && interval > 0.0, ErrorKind::InvalidParameter,
          "interval and bandwidth must be non-negative");
  require(interval >= 10.0 * sigma, ErrorKind::AsymptoticValidity,
          "closed form needs an interval of at least 10 pump bandwidths");
  return std::sqrt(kTwoPi) * interval * sigma;
}

double interval_overlap_quadrature(double interval, double sigma, int n_k, int n_l, double rel_tol) {
  require(interval > 0.0 && sigma > 0.0, ErrorKind::InvalidParameter,
          "interval and bandwidth must be positive");
  using boost::math::quadrature::gauss_kronrod;
  const double two_s2 = 2.0 * sigma * sigma;
  const double x_lo = n_k * interval, x_hi = (n_k + 1) * interval;
  const double y_lo = -(n_l + 1) * interval, y_hi = -n_l * interval;
  const auto inner = [&](double x) {
    // Split at the ridge y = -x so the adaptive rule sees the peak on a boundary.
    const double ridge = std::clamp(-x, y_lo, y_hi);
    const auto f = [&](double y) { return std::exp(-(x + y) * (x + y) / two_s2); };
    double total = 0.0;
    if (ridge > y_lo) total += gauss_kronrod<double, 31>::integrate(f, y_lo, ridge, 20, rel_tol * 1e-2);
    if (ridge < y_hi) total += gauss_kronrod<double, 31>::integrate(f, ridge, y_hi, 20, rel_tol * 1e-2);
    return total;
  };
  return gauss_kronrod<double, 31>::integrate(inner, x_lo, x_hi, 20, rel_tol);
}

double interval_mismatch(int m, const DetuningScheme& scheme, const waveguide::DispersionModel& disp) {
  scheme.validate();
  const double omega = (m + 0.5) * scheme.interval;
  const waveguide::FourWave fw{scheme.center, scheme.center, scheme.center + omega,
                               scheme.center - omega};
  return waveguide::phase_mismatch(fw, disp, 1e-9 * scheme.interval);
}

namespace {

double base_rate(int m, const DetuningScheme& scheme, double power,
                 const waveguide::WaveguideSpec& wg, const waveguide::DispersionModel& disp) {
  wg.validate();
  require(power >= 0.0, ErrorKind::InvalidParameter, "power must be non-negative");
  const double s = waveguide::pm_sinc(interval_mismatch(m, scheme, disp), wg.length);
  const double gl = wg.gamma * wg.length * power;
  return scheme.interval / kTwoPi * gl * gl * s * s;
}

}  // namespace

double coherent_rate_interval(int m, const DetuningScheme& scheme, double sigma, double power,
                              const waveguide::WaveguideSpec& wg,
                              const waveguide::DispersionModel& disp) {
  require(sigma > 0.0, ErrorKind::InvalidParameter, "pump bandwidth must be positive");
  require(scheme.interval >= 10.0 * sigma, ErrorKind::AsymptoticValidity,
          "closed form needs an interval of at least 10 pump bandwidths");
  return base_rate(m, scheme, power, wg, disp) * std::sqrt(2.0) / 2.0;
}

double incoherent_rate_interval(int m, const DetuningScheme& scheme, double power,
                                const waveguide::WaveguideSpec& wg,
                                const waveguide::DispersionModel& disp) {
  return base_rate(m, scheme, power, wg, disp);
}

double incoherent_sum_factor(const spectral::IncoherentPump& pump, const DetuningScheme& scheme) {
  pump.validate();
  scheme.validate();
  const auto& in = pump.intensities;
  // Suffix sums give sum_{m >= p} I_m in one pass.
  double suffix = 0.0, total = 0.0;
  for (std::size_t k = in.size(); k-- > 0;) {
    suffix += in[k];
    total += in[k] * suffix;
  }
  return 2.0 * scheme.interval * total;
}

double asymmetric_interval_factor(int n_k, int n_l, double interval, double sigma) {
  const double diagonal = convolution_factor_gaussian(interval, sigma);
  return n_k == n_l ? diagonal : 0.0;
}

PhaseAverage mc_phase_average(const std::vector<std::complex<double>>& amplitudes,
                              std::size_t ensembles, std::uint64_t seed, PhaseMode mode) {
  require(ensembles >= 1, ErrorKind::InvalidParameter, "need at least one ensemble");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t e = 0; e < ensembles; ++e) {
    std::complex<double> total{};
    for (const auto& a : amplitudes)
      total += mode == PhaseMode::Zero ? a : a * std::polar(1.0, phase(rng));
    const double v = std::norm(total);
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(ensembles);
  PhaseAverage out;
  out.mean = sum / n;
  if (ensembles > 1) {
    const double var = std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1.0));
    out.stderr_ = std::sqrt(var / n);
  }
  return out;
}

double xi_factor_coherent(double sigma, double kappa) {
  require(sigma > 0.0, ErrorKind::InvalidParameter, "pump bandwidth must be positive");
  require(kappa > 0.0, ErrorKind::InvalidParameter, "power prefactor must be positive");
  return kappa * std::sqrt(2.0 * std::sqrt(kPi)) * std::sqrt(sigma);
}

}  // namespace sfwm::rates
