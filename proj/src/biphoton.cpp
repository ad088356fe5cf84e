#include "sfwm/biphoton.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

#include "sfwm/error.hpp"
#include "sfwm/io.hpp"
#include "sfwm/parallel.hpp"
#include "sfwm/units.hpp"

namespace sfwm::biphoton {

using spectral::FrequencyGrid;
using cd = std::complex<double>;

double pump_anchor(const FrequencyGrid& grid_s, const FrequencyGrid& grid_i, double center) {
  require(std::abs(grid_s.spacing() - grid_i.spacing()) <= 1e-6 * grid_s.spacing(),
          ErrorKind::InvalidParameter, "signal and idler grids must share a spacing");
  const double half = 0.5 * grid_s.spacing();
  const double base = 0.5 * (grid_s.start() + grid_i.start());
  return base + std::round((center - base) / half) * half;
}

DiscretePump discretize(const spectral::CoherentPump& raw, double spacing, double anchor) {
  require(spacing > 0.0, ErrorKind::InvalidParameter, "spacing must be positive");
  const auto pump = spectral::normalize_coherent(raw);
  const bool gaussian = pump.shape == spectral::PumpShape::Gaussian;
  const double reach = gaussian ? 8.0 * pump.bandwidth : 0.5 * pump.bandwidth + spacing;
  const double j_lo = std::ceil((pump.center - reach - anchor) / spacing);
  const double j_hi = std::floor((pump.center + reach - anchor) / spacing);
  const spectral::Band box{pump.center - 0.5 * pump.bandwidth, pump.center + 0.5 * pump.bandwidth};

  std::vector<cd> amp;
  double first = 0.0;
  for (double j = j_lo; j <= j_hi; ++j) {
    const double w = anchor + j * spacing;
    const double a = gaussian ? pump.density(w)
                              : pump.coefficient * spectral::cell_overlap(w, spacing, box);
    if (amp.empty() && a == 0.0) continue;
    if (amp.empty()) first = w;
    amp.emplace_back(a, 0.0);
  }
  while (!amp.empty() && amp.back() == cd{}) amp.pop_back();
  require(!amp.empty(), ErrorKind::Resolution, "pump falls between lattice points");

  double norm = 0.0;
  for (const auto& a : amp) norm += std::norm(a);
  const double scale = 1.0 / std::sqrt(norm * spacing);
  DiscretePump out{first, spacing, {}, true, {}};
  out.amplitude.reserve(amp.size());
  for (const auto& a : amp) {
    out.amplitude.push_back(a * scale);
    out.field_sum += a * scale * spacing;
  }
  return out;
}

DiscretePump discretize(const spectral::IncoherentPump& pump, double spacing) {
  pump.validate();
  require(!pump.frequencies.empty(), ErrorKind::InvalidParameter, "incoherent pump has no components");
  if (pump.frequencies.size() >= 2) {
    require(std::abs(pump.spacing() - spacing) <= 1e-6 * spacing, ErrorKind::InvalidParameter,
            "incoherent component spacing must equal the grid spacing");
  }
  double total = 0.0;
  for (double v : pump.intensities) total += v;
  require(total > 0.0, ErrorKind::InvalidParameter, "incoherent pump carries no power");
  DiscretePump out{pump.frequencies.front(), spacing, {}, false, {}};
  for (std::size_t n = 0; n < pump.frequencies.size(); ++n) {
    out.amplitude.push_back(std::polar(std::sqrt(pump.intensities[n] / total), pump.phases[n]));
  }
  return out;
}

PairSource::PairSource(DiscretePump pump, waveguide::WaveguideSpec wg,
                       waveguide::DispersionModel disp, FrequencyGrid grid_s, FrequencyGrid grid_i,
                       double phase_power)
    : pump_(std::move(pump)), wg_(wg), phase_power_(phase_power), grid_s_(grid_s), grid_i_(grid_i) {
  wg_.validate();
  disp.validate();
  require(phase_power_ > 0.0, ErrorKind::InvalidParameter, "pump power must be positive");
  require(!pump_.amplitude.empty(), ErrorKind::InvalidParameter, "pump has no components");
  const double d = grid_s_.spacing();
  require(std::abs(grid_i_.spacing() - d) <= 1e-6 * d && std::abs(pump_.spacing - d) <= 1e-6 * d,
          ErrorKind::InvalidParameter, "pump and grids must share one spacing");

  const auto k = [&disp](double w) { return waveguide::propagation_constant(w, disp) - disp.k0; };
  kp_.resize(pump_.amplitude.size());
  for (std::size_t j = 0; j < kp_.size(); ++j) kp_[j] = k(pump_.frequency(j));
  ks_.resize(grid_s_.size());
  for (std::size_t s = 0; s < ks_.size(); ++s) ks_[s] = k(grid_s_[s]);
  ki_.resize(grid_i_.size());
  for (std::size_t i = 0; i < ki_.size(); ++i) ki_[i] = k(grid_i_[i]);

  diagonal_origin_ = 2.0 * pump_.start;
  flat_ = disp.k1 == 0.0 && disp.beta2 == 0.0 && disp.beta3 == 0.0;
  if (flat_) flat_amplitude_ = waveguide::split_step_sum(0.0, wg_, phase_power_) / phase_power_;
}

long PairSource::diagonal(std::size_t s, std::size_t i) const {
  return std::lround((grid_s_[s] + grid_i_[i] - diagonal_origin_) / pump_.spacing);
}

cd PairSource::amplitude(double dk) const {
  if (flat_) return flat_amplitude_;
  return waveguide::split_step_sum(dk, wg_, phase_power_) / phase_power_;
}

double PairSource::pair_density(std::size_t s, std::size_t i) const {
  const auto& a = pump_.amplitude;
  const double d = pump_.spacing;
  if (pump_.coherent) {
    cd sum{};
    for_each_term(s, i, [&](std::size_t j, std::size_t q, cd amp) { sum += a[j] * a[q] * amp; });
    return std::norm(sum * d) / std::norm(pump_.field_sum);
  }
  double sum = 0.0;
  for_each_term(s, i, [&](std::size_t j, std::size_t q, cd amp) {
    sum += std::norm(a[j]) * std::norm(a[q]) * std::norm(amp);
  });
  return sum / d;
}

cd PairSource::field(std::size_t s, std::size_t i, const std::vector<double>* phases) const {
  const auto& a = pump_.amplitude;
  const double d = pump_.spacing;
  cd sum{};
  if (pump_.coherent) {
    for_each_term(s, i, [&](std::size_t j, std::size_t q, cd amp) { sum += a[j] * a[q] * amp; });
    return sum * d / std::abs(pump_.field_sum);
  }
  for_each_term(s, i, [&](std::size_t j, std::size_t q, cd amp) {
    const double phase = phases ? (*phases)[j] : std::arg(a[j]);
    sum += std::abs(a[j]) * std::abs(a[q]) * std::polar(1.0, phase) * amp;
  });
  return sum / std::sqrt(d);
}

void JointSpectrum::validate() const {
  require(values.rows() == static_cast<Eigen::Index>(grid_s.size()) &&
              values.cols() == static_cast<Eigen::Index>(grid_i.size()),
          ErrorKind::InvalidParameter, "joint spectrum does not match its grids");
  if (kind == JointKind::Intensity) {
    for (Eigen::Index r = 0; r < values.rows(); ++r)
      for (Eigen::Index c = 0; c < values.cols(); ++c)
        require(values(r, c).real() >= 0.0 && values(r, c).imag() == 0.0,
                ErrorKind::InvalidParameter, "intensity spectrum must be real and non-negative");
  }
}

JointSpectrum normalized(JointSpectrum js) {
  const double total =
      js.kind == JointKind::Amplitude ? js.values.squaredNorm() : js.values.real().sum();
  require(total > 0.0, ErrorKind::Degenerate, "joint spectrum is identically zero");
  js.values /= js.kind == JointKind::Amplitude ? std::sqrt(total) : total;
  js.normalized = true;
  return js;
}

namespace {

template <class CellFn>
Eigen::MatrixXcd fill(const FrequencyGrid& gs, const FrequencyGrid& gi, CellFn cell) {
  Eigen::MatrixXcd m(gs.size(), gi.size());
  parallel_for(gs.size(), [&](std::size_t s) {
    for (std::size_t i = 0; i < gi.size(); ++i)
      m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) = cell(s, i);
  });
  return m;
}

JointSpectrum finish(const FrequencyGrid& gs, const FrequencyGrid& gi, Eigen::MatrixXcd values,
                     bool normalize) {
  JointSpectrum js{gs, gi, std::move(values), JointKind::Amplitude, false};
  return normalize ? normalized(std::move(js)) : js;
}

PairSource incoherent_source(const spectral::IncoherentPump& pump, const waveguide::WaveguideSpec& wg,
                             const waveguide::DispersionModel& disp, const FrequencyGrid& gs,
                             const FrequencyGrid& gi, double phase_power) {
  return {discretize(pump, gs.spacing()), wg, disp, gs, gi, phase_power};
}

}  // namespace

JointSpectrum build_jsa_coherent(const spectral::CoherentPump& pump, const waveguide::WaveguideSpec& wg,
                                 const waveguide::DispersionModel& disp, const FrequencyGrid& grid_s,
                                 const FrequencyGrid& grid_i, BuildOptions options) {
  const double d = grid_s.spacing();
  if (pump.shape == spectral::PumpShape::Gaussian) {
    const double fwhm = 2.0 * std::sqrt(2.0 * std::log(2.0)) * pump.bandwidth;
    require(fwhm >= 8.0 * d, ErrorKind::Resolution,
            "grid too coarse: fewer than 8 points across the pump FWHM");
  }
  const double anchor = pump_anchor(grid_s, grid_i, pump.center);
  const PairSource source(discretize(pump, d, anchor), wg, disp, grid_s, grid_i, options.phase_power);
  auto values = fill(grid_s, grid_i, [&](std::size_t s, std::size_t i) {
    return source.field(s, i, nullptr);
  });
  return finish(grid_s, grid_i, std::move(values), options.normalize);
}

MonteCarloJsi build_jsi_monte_carlo(const spectral::IncoherentPump& pump,
                                    const waveguide::WaveguideSpec& wg,
                                    const waveguide::DispersionModel& disp,
                                    const FrequencyGrid& grid_s, const FrequencyGrid& grid_i,
                                    MonteCarlo mode, double phase_power) {
  require(mode.ensembles >= 2, ErrorKind::InvalidParameter, "need at least two ensembles");
  const PairSource source = incoherent_source(pump, wg, disp, grid_s, grid_i, phase_power);
  const auto rows = static_cast<Eigen::Index>(grid_s.size());
  const auto cols = static_cast<Eigen::Index>(grid_i.size());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(rows, cols);
  const std::size_t count = source.pump().amplitude.size();
  std::mt19937_64 rng(mode.seed);
  std::vector<double> phases(count);
  for (std::size_t e = 0; e < mode.ensembles; ++e) {
    for (auto& p : phases) p = kTwoPi * std::generate_canonical<double, 64>(rng);
    parallel_for(grid_s.size(), [&](std::size_t s) {
      for (std::size_t i = 0; i < grid_i.size(); ++i) {
        const double v = std::norm(source.field(s, i, &phases));
        sum(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) += v;
        sum_sq(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) += v * v;
      }
    });
  }
  const double n = static_cast<double>(mode.ensembles);
  MonteCarloJsi out;
  out.mean = sum / n;
  const Eigen::MatrixXd var = ((sum_sq / n) - out.mean.cwiseProduct(out.mean)).cwiseMax(0.0) * (n / (n - 1.0));
  out.stderr_ = (var / n).cwiseSqrt();
  return out;
}

JointSpectrum build_jsa_incoherent(const spectral::IncoherentPump& pump,
                                   const waveguide::WaveguideSpec& wg,
                                   const waveguide::DispersionModel& disp,
                                   const FrequencyGrid& grid_s, const FrequencyGrid& grid_i,
                                   IncoherentMode mode, BuildOptions options) {
  if (const auto* mc = std::get_if<MonteCarlo>(&mode)) {
    const auto jsi = build_jsi_monte_carlo(pump, wg, disp, grid_s, grid_i, *mc, options.phase_power);
    return finish(grid_s, grid_i, jsi.mean.cwiseSqrt().cast<cd>(), options.normalize);
  }
  const PairSource source = incoherent_source(pump, wg, disp, grid_s, grid_i, options.phase_power);
  auto values = fill(grid_s, grid_i, [&](std::size_t s, std::size_t i) {
    return cd{std::sqrt(source.pair_density(s, i)), 0.0};
  });
  return finish(grid_s, grid_i, std::move(values), options.normalize);
}

JointSpectrum apply_filters(const JointSpectrum& js, const std::vector<double>& t_s,
                            const std::vector<double>& t_i, bool renormalize) {
  require(t_s.size() == js.grid_s.size() && t_i.size() == js.grid_i.size(),
          ErrorKind::InvalidParameter, "filter length does not match the grid");
  for (const auto* t : {&t_s, &t_i})
    for (double v : *t)
      require(v >= 0.0 && v <= 1.0, ErrorKind::InvalidParameter, "transmittance outside [0, 1]");
  JointSpectrum out = js;
  const bool amp = js.kind == JointKind::Amplitude;
  for (Eigen::Index s = 0; s < out.values.rows(); ++s) {
    for (Eigen::Index i = 0; i < out.values.cols(); ++i) {
      const double t = t_s[static_cast<std::size_t>(s)] * t_i[static_cast<std::size_t>(i)];
      out.values(s, i) *= amp ? std::sqrt(t) : t;
    }
  }
  out.normalized = false;
  return renormalize ? normalized(std::move(out)) : out;
}

JointSpectrum intensity(const JointSpectrum& js) {
  if (js.kind == JointKind::Intensity) return js;
  JointSpectrum out = js;
  out.values = js.values.cwiseAbs2().cast<cd>();
  out.kind = JointKind::Intensity;
  return out;
}

SchmidtResult schmidt_purity(const JointSpectrum& js) {
  require(js.kind == JointKind::Amplitude, ErrorKind::InvalidParameter,
          "Schmidt purity needs an amplitude spectrum");
  require(js.values.size() > 0 && js.values.cwiseAbs().maxCoeff() > 0.0, ErrorKind::Degenerate,
          "joint spectral amplitude is identically zero");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(js.values);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = 1e-12 * sigma(0);
  SchmidtResult out;
  double total = 0.0;
  for (Eigen::Index k = 0; k < sigma.size() && sigma(k) > cutoff; ++k) {
    out.coefficients.push_back(sigma(k) * sigma(k));
    total += sigma(k) * sigma(k);
  }
  for (double& l : out.coefficients) {
    l /= total;
    out.purity += l * l;
  }
  return out;
}

Eigen::MatrixXd channel_jsi_matrix(const JointSpectrum& js, const ChannelBank& bank_s,
                                   const ChannelBank& bank_i) {
  require(bank_s.grid().matches(js.grid_s) && bank_i.grid().matches(js.grid_i),
          ErrorKind::InvalidParameter, "channel banks are not sampled on the spectrum grids");
  const Eigen::MatrixXd jsi =
      js.kind == JointKind::Amplitude ? Eigen::MatrixXd(js.values.cwiseAbs2()) : Eigen::MatrixXd(js.values.real());
  const double d2 = js.grid_s.spacing() * js.grid_i.spacing();
  const auto to_vec = [](const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  };
  Eigen::MatrixXd ts(jsi.rows(), static_cast<Eigen::Index>(bank_s.size()));
  for (std::size_t a = 0; a < bank_s.size(); ++a)
    ts.col(static_cast<Eigen::Index>(a)) = to_vec(bank_s.channels()[a].transmittance);
  Eigen::MatrixXd ti(jsi.cols(), static_cast<Eigen::Index>(bank_i.size()));
  for (std::size_t b = 0; b < bank_i.size(); ++b)
    ti.col(static_cast<Eigen::Index>(b)) = to_vec(bank_i.channels()[b].transmittance);
  return ts.transpose() * jsi * ti * d2;
}

std::string to_json(const JointSpectrum& js) {
  using nlohmann::ordered_json;
  const auto grid = [](const FrequencyGrid& g) {
    return ordered_json{{"start", io::round9(g.start())}, {"d", io::round9(g.spacing())}, {"M", g.size()}};
  };
  ordered_json values = ordered_json::array();
  for (Eigen::Index s = 0; s < js.values.rows(); ++s) {
    for (Eigen::Index i = 0; i < js.values.cols(); ++i) {
      const cd v = js.values(s, i);
      if (js.kind == JointKind::Amplitude)
        values.push_back({io::round9(v.real()), io::round9(v.imag())});
      else
        values.push_back(io::round9(v.real()));
    }
  }
  ordered_json doc{{"grid_s", grid(js.grid_s)},
                   {"grid_i", grid(js.grid_i)},
                   {"kind", js.kind == JointKind::Amplitude ? "amplitude" : "intensity"},
                   {"normalized", js.normalized},
                   {"values", std::move(values)}};
  return doc.dump() + "\n";
}

JointSpectrum from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text.begin(), text.end());
    const auto grid = [&doc](const char* key) {
      const auto& g = doc.at(key);
      return FrequencyGrid(g.at("start").get<double>(), g.at("d").get<double>(), g.at("M").get<std::size_t>());
    };
    const auto gs = grid("grid_s");
    const auto gi = grid("grid_i");
    const std::string kind = doc.at("kind").get<std::string>();
    require(kind == "amplitude" || kind == "intensity", ErrorKind::Parse, "unknown spectrum kind '" + kind + "'");
    const auto& values = doc.at("values");
    require(values.size() == gs.size() * gi.size(), ErrorKind::Parse, "value count does not match the grids");
    JointSpectrum js{gs, gi, Eigen::MatrixXcd(gs.size(), gi.size()),
                     kind == "amplitude" ? JointKind::Amplitude : JointKind::Intensity,
                     doc.value("normalized", false)};
    std::size_t k = 0;
    for (Eigen::Index s = 0; s < js.values.rows(); ++s) {
      for (Eigen::Index i = 0; i < js.values.cols(); ++i, ++k) {
        const auto& v = values[k];
        js.values(s, i) = v.is_array() ? cd{v.at(0).get<double>(), v.at(1).get<double>()} : cd{v.get<double>(), 0.0};
      }
    }
    js.validate();
    return js;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("joint spectrum JSON: ") + e.what());
  }
}

std::string channel_matrix_csv(const Eigen::MatrixXd& matrix, const ChannelBank& bank_s,
                               const ChannelBank& bank_i) {
  std::vector<std::string> header{"signal"};
  for (const auto& c : bank_i.channels()) header.push_back(c.label);
  io::CsvTable table(header);
  for (std::size_t a = 0; a < bank_s.size(); ++a) {
    std::vector<std::string> row{bank_s.channels()[a].label};
    for (std::size_t b = 0; b < bank_i.size(); ++b)
      row.push_back(format_number(matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))));
    table.add_row(std::move(row));
  }
  return table.str();
}

}  // namespace sfwm::biphoton
