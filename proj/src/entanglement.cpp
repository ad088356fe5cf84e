#include "sfwm/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "sfwm/error.hpp"
#include "sfwm/io.hpp"
#include "sfwm/units.hpp"

namespace sfwm::entanglement {

using cd = std::complex<double>;
using Eigen::Matrix4cd;

namespace {

Eigen::Vector4d hermitian_eigenvalues(const Matrix4cd& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

void check_state(const Matrix4cd& rho) {
  require(rho.allFinite(), ErrorKind::InvalidState, "density matrix has non-finite entries");
  require((rho - rho.adjoint()).cwiseAbs().maxCoeff() <= 1e-12, ErrorKind::InvalidState,
          "density matrix is not Hermitian");
  require(std::abs(rho.trace() - cd{1.0, 0.0}) <= 1e-12, ErrorKind::InvalidState,
          "density matrix trace differs from 1");
  require(hermitian_eigenvalues(rho).minCoeff() >= -1e-10, ErrorKind::InvalidState,
          "density matrix is not positive semidefinite");
}

Eigen::Vector2cd polarizer(double theta) { return {std::cos(theta), std::sin(theta)}; }

double projector_probability(const Matrix4cd& rho, const Eigen::Vector2cd& s, const Eigen::Vector2cd& i) {
  Eigen::Vector4cd v;
  v << s(0) * i(0), s(0) * i(1), s(1) * i(0), s(1) * i(1);
  return (v.adjoint() * rho * v)(0, 0).real();
}

Matrix4cd psd_sqrt(const Matrix4cd& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(m);
  const Eigen::Vector4d root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TwoQubitState::TwoQubitState(const Matrix4cd& rho) : rho_(rho) { check_state(rho_); }

void SagnacParams::validate() const {
  require(eta >= 0.0 && std::isfinite(eta), ErrorKind::InvalidParameter, "eta must be non-negative");
  require(std::isfinite(delta), ErrorKind::InvalidParameter, "delta must be finite");
  require(white_noise >= 0.0 && white_noise <= 1.0, ErrorKind::InvalidParameter,
          "white-noise fraction must lie in [0, 1]");
}

TwoQubitState sagnac_state(const SagnacParams& p) {
  p.validate();
  Eigen::Vector4cd phi(1.0, 0.0, 0.0, std::polar(p.eta, p.delta));
  Matrix4cd rho = (1.0 - p.white_noise) * (phi * phi.adjoint()) / (1.0 + p.eta * p.eta) +
                  p.white_noise * Matrix4cd::Identity() / 4.0;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return TwoQubitState(rho);
}

TwoQubitState bell_phi_plus() { return sagnac_state({1.0, 0.0, 0.0}); }
TwoQubitState product_hh() { return sagnac_state({0.0, 0.0, 0.0}); }
TwoQubitState maximally_mixed() { return sagnac_state({1.0, 0.0, 1.0}); }

TwoQubitState random_state(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix4cd a;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) a(r, c) = cd{g(rng), g(rng)};
  Matrix4cd rho = a * a.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return TwoQubitState(rho);
}

double coincidence_probability(const TwoQubitState& state, double theta_s, double theta_i) {
  return projector_probability(state.matrix(), polarizer(theta_s), polarizer(theta_i));
}

double fringe_visibility(const TwoQubitState& state, FringeBasis basis) {
  const double theta_s = basis == FringeBasis::H ? 0.0 : kPi / 4.0;
  constexpr int kSteps = 720;
  double hi = -1.0, lo = 2.0;
  for (int k = 0; k < kSteps; ++k) {
    const double p = coincidence_probability(state, theta_s, kTwoPi * k / kSteps);
    hi = std::max(hi, p);
    lo = std::min(lo, p);
  }
  lo = std::max(lo, 0.0);
  require(hi + lo > 0.0, ErrorKind::UndefinedVisibility, "fringe is identically zero");
  return (hi - lo) / (hi + lo);
}

double fringe_visibility_closed(const SagnacParams& p, FringeBasis basis) {
  p.validate();
  const double n = 1.0 + p.eta * p.eta;
  const double noise = p.white_noise / 4.0;
  double hi = 0.0, lo = 0.0;
  if (basis == FringeBasis::H) {
    hi = (1.0 - p.white_noise) / n + noise;
    lo = noise;
  } else {
    const double mean = 0.5 * n;
    const double half = 0.5 * (1.0 - p.eta * p.eta);
    const double cross = p.eta * std::cos(p.delta);
    const double amp = std::sqrt(half * half + cross * cross);
    const double scale = (1.0 - p.white_noise) / (2.0 * n);
    hi = scale * (mean + amp) + noise;
    lo = scale * (mean - amp) + noise;
  }
  require(hi + lo > 0.0, ErrorKind::UndefinedVisibility, "fringe is identically zero");
  return (hi - lo) / (hi + lo);
}

AngleSet default_signal_angles() {
  const double deg = kPi / 180.0;
  return {-22.5 * deg, 67.5 * deg, 22.5 * deg, 112.5 * deg};
}

AngleSet default_idler_angles() {
  const double deg = kPi / 180.0;
  return {-45.0 * deg, 45.0 * deg, 0.0, 90.0 * deg};
}

double correlator(const TwoQubitState& state, double x, double x_perp, double y, double y_perp) {
  const auto& rho = state.matrix();
  const double pp = projector_probability(rho, polarizer(x), polarizer(y));
  const double qq = projector_probability(rho, polarizer(x_perp), polarizer(y_perp));
  const double pq = projector_probability(rho, polarizer(x), polarizer(y_perp));
  const double qp = projector_probability(rho, polarizer(x_perp), polarizer(y));
  const double total = pp + qq + pq + qp;
  require(total > 0.0, ErrorKind::UndefinedEstimator, "no coincidences for this analyzer pair");
  return (pp + qq - pq - qp) / total;
}

double chsh(const TwoQubitState& state, const AngleSet& s, const AngleSet& i) {
  // (a', a' perp, a, a perp) and (b', b' perp, b, b perp)
  const auto e = [&](int x, int y) { return correlator(state, s[x], s[x + 1], i[y], i[y + 1]); };
  return e(2, 2) - e(2, 0) + e(0, 2) + e(0, 0);
}

double fidelity(const Matrix4cd& rho_ex, const Matrix4cd& rho_th) {
  check_state(rho_ex);
  check_state(rho_th);
  const Matrix4cd root = psd_sqrt(rho_th);
  Matrix4cd inner = root * rho_ex * root;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  const double tr = hermitian_eigenvalues(inner).cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

double fidelity(const TwoQubitState& rho_ex, const TwoQubitState& rho_th) {
  return fidelity(rho_ex.matrix(), rho_th.matrix());
}

Eigen::Vector2cd analyzer(char label) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (label) {
    case 'H': return {1.0, 0.0};
    case 'V': return {0.0, 1.0};
    case 'D': return {r, r};
    case 'A': return {r, -r};
    case 'R': return {cd{r, 0.0}, cd{0.0, -r}};
    case 'L': return {cd{r, 0.0}, cd{0.0, r}};
    default: fail(ErrorKind::InvalidSettings, std::string("unknown analyzer setting '") + label + "'");
  }
}

std::vector<TomoSetting> default_settings() {
  std::vector<TomoSetting> out;
  for (char s : {'H', 'V', 'D', 'R'})
    for (char i : {'H', 'V', 'D', 'R'}) out.push_back({analyzer(s), analyzer(i), std::string{s, i}});
  return out;
}

std::vector<double> ideal_counts(const TwoQubitState& state, const std::vector<TomoSetting>& settings,
                                 double total) {
  std::vector<double> out;
  out.reserve(settings.size());
  for (const auto& st : settings)
    out.push_back(total * projector_probability(state.matrix(), st.signal, st.idler));
  return out;
}

namespace {

std::array<Eigen::Matrix2cd, 4> paulis() {
  Eigen::Matrix2cd i2 = Eigen::Matrix2cd::Identity(), x, y, z;
  x << 0, 1, 1, 0;
  y << 0, cd{0, -1}, cd{0, 1}, 0;
  z << 1, 0, 0, -1;
  return {i2, x, y, z};
}

Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Matrix4cd out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
  return out;
}

}  // namespace

TwoQubitState tomography_linear(const std::vector<double>& counts,
                                const std::vector<TomoSetting>& settings) {
  require(counts.size() == settings.size(), ErrorKind::InvalidSettings,
          "one count per setting is required");
  require(settings.size() >= 16, ErrorKind::InvalidSettings,
          "at least 16 settings are needed for two-qubit tomography");
  const auto p = paulis();
  std::array<Matrix4cd, 16> basis;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) basis[static_cast<std::size_t>(4 * a + b)] = kron(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(b)]) / 4.0;

  const auto k = static_cast<Eigen::Index>(settings.size());
  Eigen::MatrixXd design(k, 16);
  Eigen::VectorXd y(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const auto& st = settings[static_cast<std::size_t>(r)];
    Eigen::Vector4cd v;
    v << st.signal(0) * st.idler(0), st.signal(0) * st.idler(1), st.signal(1) * st.idler(0),
        st.signal(1) * st.idler(1);
    for (int c = 0; c < 16; ++c) design(r, c) = (v.adjoint() * basis[static_cast<std::size_t>(c)] * v)(0, 0).real();
    y(r) = counts[static_cast<std::size_t>(r)];
    require(y(r) >= 0.0 && std::isfinite(y(r)), ErrorKind::InvalidParameter, "counts must be non-negative");
  }
  const auto qr = design.colPivHouseholderQr();
  require(qr.rank() == 16, ErrorKind::InvalidSettings, "settings are not informationally complete");
  const Eigen::VectorXd coeff = qr.solve(y);
  Matrix4cd m = Matrix4cd::Zero();
  for (int c = 0; c < 16; ++c) m += coeff(c) * basis[static_cast<std::size_t>(c)];
  m = 0.5 * (m + m.adjoint()).eval();
  require(m.trace().real() > 0.0, ErrorKind::Degenerate, "reconstructed state has no weight");
  m /= m.trace().real();

  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(m);
  Eigen::Vector4d lambda = es.eigenvalues().cwiseMax(0.0);
  lambda /= lambda.sum();
  Matrix4cd rho = es.eigenvectors() * lambda.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return TwoQubitState(rho);
}

std::vector<double> subtract_accidentals(const std::vector<double>& counts,
                                         const std::vector<double>& accidentals) {
  require(counts.size() == accidentals.size(), ErrorKind::InvalidParameter,
          "accidental list does not match the counts");
  std::vector<double> out(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) out[k] = std::max(0.0, counts[k] - accidentals[k]);
  return out;
}

TomoInput load_tomography_csv(const std::string& path) {
  TomoInput in;
  for (const auto& row : io::read_csv(path)) {
    const auto where = path + ":" + std::to_string(row.line) + ": ";
    require(row.cells.size() == 3, ErrorKind::Parse, where + "expected setting_s,setting_i,counts");
    if (in.counts.empty() && row.cells[0] == "setting_s") continue;
    require(row.cells[0].size() == 1 && row.cells[1].size() == 1, ErrorKind::Parse,
            where + "settings are single analyzer letters");
    char* end = nullptr;
    const double c = std::strtod(row.cells[2].c_str(), &end);
    require(!row.cells[2].empty() && *end == '\0', ErrorKind::Parse, where + "malformed count");
    in.settings.push_back({analyzer(row.cells[0][0]), analyzer(row.cells[1][0]), row.cells[0] + row.cells[1]});
    in.counts.push_back(c);
  }
  require(!in.counts.empty(), ErrorKind::Data, path + ": no samples");
  return in;
}

std::string to_json(const TwoQubitState& state) {
  nlohmann::ordered_json rho = nlohmann::ordered_json::array();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      rho.push_back({io::round9(state.matrix()(r, c).real()), io::round9(state.matrix()(r, c).imag())});
  nlohmann::ordered_json doc{{"basis", {"HH", "HV", "VH", "VV"}}, {"rho", std::move(rho)}};
  return doc.dump() + "\n";
}

}  // namespace sfwm::entanglement
