#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sfwm::entanglement {

/// Two-qubit density matrix in the basis {HH, HV, VH, VV}.
class TwoQubitState {
 public:
  /// Validates Hermiticity, unit trace and positivity.
  explicit TwoQubitState(const Eigen::Matrix4cd& rho);

  const Eigen::Matrix4cd& matrix() const noexcept { return rho_; }

 private:
  Eigen::Matrix4cd rho_;
};

struct SagnacParams {
  double eta = 1.0;         // amplitude ratio of the VV term
  double delta = 0.0;       // relative phase, rad
  double white_noise = 0.0; // p

  void validate() const;
};

/// (1 - p) |Phi><Phi| / (1 + eta^2) + p I / 4 with Phi = |HH> + eta e^{i delta} |VV>.
TwoQubitState sagnac_state(const SagnacParams& params);

TwoQubitState bell_phi_plus();
TwoQubitState product_hh();
TwoQubitState maximally_mixed();
/// Ginibre-distributed random mixed state.
TwoQubitState random_state(std::uint64_t seed);

/// Linear polarizer projection |theta> = cos(theta)|H> + sin(theta)|V> on each photon.
double coincidence_probability(const TwoQubitState& state, double theta_s, double theta_i);

enum class FringeBasis { H, D };

/// Signal analyzer fixed at 0 (H) or pi/4 (D), idler swept over 720 points.
double fringe_visibility(const TwoQubitState& state, FringeBasis basis);

/// Closed-form visibility of the Sagnac family.
double fringe_visibility_closed(const SagnacParams& params, FringeBasis basis);

/// Analyzer angles ordered (x', x' perp, x, x perp), radians.
using AngleSet = std::array<double, 4>;

/// Standard CHSH settings: signal (-22.5, 67.5, 22.5, 112.5) deg, idler (-45, 45, 0, 90) deg.
AngleSet default_signal_angles();
AngleSet default_idler_angles();

/// Correlator from the four projector probabilities.
double correlator(const TwoQubitState& state, double x, double x_perp, double y, double y_perp);

/// S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
double chsh(const TwoQubitState& state, const AngleSet& signal, const AngleSet& idler);

/// Uhlmann fidelity [Tr sqrt(sqrt(rho_th) rho_ex sqrt(rho_th))]^2.
double fidelity(const Eigen::Matrix4cd& rho_ex, const Eigen::Matrix4cd& rho_th);
double fidelity(const TwoQubitState& rho_ex, const TwoQubitState& rho_th);

/// Single-photon analyzer state, e.g. H, V, D, A, R, L.
Eigen::Vector2cd analyzer(char label);

struct TomoSetting {
  Eigen::Vector2cd signal;
  Eigen::Vector2cd idler;
  std::string label;
};

/// The 16 settings {H, V, D, R} x {H, V, D, R}.
std::vector<TomoSetting> default_settings();

/// Ideal counts N Tr(rho P_k) for each setting.
std::vector<double> ideal_counts(const TwoQubitState& state, const std::vector<TomoSetting>& settings,
                                 double total = 1.0);

/// Least-squares linear inversion, Hermitization, eigenvalue clipping and
/// renormalization.
TwoQubitState tomography_linear(const std::vector<double>& counts,
                                const std::vector<TomoSetting>& settings);

/// counts - accidentals, clipped at zero.
std::vector<double> subtract_accidentals(const std::vector<double>& counts,
                                         const std::vector<double>& accidentals);

struct TomoInput {
  std::vector<TomoSetting> settings;
  std::vector<double> counts;
};

/// CSV "setting_s,setting_i,counts" with analyzer letters.
TomoInput load_tomography_csv(const std::string& path);

std::string to_json(const TwoQubitState& state);

}  // namespace sfwm::entanglement
