#include "sfwm/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "sfwm/error.hpp"
#include "sfwm/io.hpp"
#include "sfwm/parallel.hpp"
#include "sfwm/units.hpp"

namespace sfwm::counting {

using spectral::FrequencyGrid;

void EfficiencyModel::validate() const {
  for (double v : {transmission_s, transmission_i, detection_s, detection_i})
    require(v > 0.0 && v <= 1.0, ErrorKind::InvalidParameter, "efficiencies must lie in (0, 1]");
}

void NoiseModel::validate() const {
  for (double v : {signal.linear, signal.background, idler.linear, idler.background})
    require(v >= 0.0 && std::isfinite(v), ErrorKind::InvalidParameter,
            "noise coefficients must be non-negative");
  require(window > 0.0, ErrorKind::InvalidParameter, "coincidence window must be positive");
}

namespace {

struct RowSums {
  double coincidence = 0.0;
  double signal = 0.0;
  double idler = 0.0;
  double total = 0.0;
};

std::vector<RowSums> accumulate(const biphoton::PairSource& source, const std::vector<double>& t_s,
                                const std::vector<double>& t_i) {
  const auto& gs = source.grid_s();
  const auto& gi = source.grid_i();
  const double d = source.spacing();
  const double cell = d * d / kTwoPi;
  std::vector<RowSums> rows(gs.size());
  parallel_for(gs.size(), [&](std::size_t s) {
    std::vector<double> cc(gi.size()), sig(gi.size()), idl(gi.size()), all(gi.size());
    for (std::size_t i = 0; i < gi.size(); ++i) {
      const double rate = source.pair_density(s, i) * cell;
      all[i] = rate;
      sig[i] = rate * t_s[s];
      idl[i] = rate * t_i[i];
      cc[i] = sig[i] * t_i[i];
    }
    rows[s] = {pairwise_sum(cc.data(), cc.size()), pairwise_sum(sig.data(), sig.size()),
               pairwise_sum(idl.data(), idl.size()), pairwise_sum(all.data(), all.size())};
  });
  return rows;
}

double column_sum(const std::vector<RowSums>& rows, double RowSums::*field) {
  std::vector<double> v(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) v[k] = rows[k].*field;
  return pairwise_sum(v.data(), v.size());
}

}  // namespace

Brightness pipeline_counts(const biphoton::DiscretePump& pump, const waveguide::WaveguideSpec& wg,
                           const waveguide::DispersionModel& disp, const ChannelBank& bank_s,
                           const ChannelBank& bank_i, const EfficiencyModel& eff, double phase_power) {
  eff.validate();
  const double d = bank_s.grid().spacing();
  require(std::abs(bank_i.grid().spacing() - d) <= 1e-6 * d &&
              std::abs(pump.spacing - d) <= 1e-6 * d,
          ErrorKind::InvalidParameter, "pump and channel grids are misaligned");
  const biphoton::PairSource source(pump, wg, disp, bank_s.grid(), bank_i.grid(), phase_power);
  const auto rows = accumulate(source, bank_s.arm_transmittance(), bank_i.arm_transmittance());
  Brightness b;
  b.coincidence = column_sum(rows, &RowSums::coincidence) * eff.signal() * eff.idler();
  b.signal = column_sum(rows, &RowSums::signal) * eff.signal();
  b.idler = column_sum(rows, &RowSums::idler) * eff.idler();
  return b;
}

double total_pair_rate(const biphoton::PairSource& source) {
  const std::vector<double> ones_s(source.grid_s().size(), 1.0), ones_i(source.grid_i().size(), 1.0);
  return column_sum(accumulate(source, ones_s, ones_i), &RowSums::total);
}

double singles_rate(double power, double brightness, const ArmNoise& noise) {
  require(power >= 0.0, ErrorKind::InvalidParameter, "power must be non-negative");
  return brightness * power * power + noise.linear * power + noise.background;
}

CountingResult evaluate(double power, const Brightness& b, const NoiseModel& noise) {
  CountingResult r;
  r.singles_s = singles_rate(power, b.signal, noise.signal);
  r.singles_i = singles_rate(power, b.idler, noise.idler);
  r.coincidences = b.coincidence * power * power;
  r.accidentals = r.singles_s * r.singles_i * noise.window;
  r.car = r.accidentals > 0.0 ? r.coincidences / r.accidentals
                              : std::numeric_limits<double>::quiet_NaN();
  return r;
}

double car(double power, const Brightness& b, const NoiseModel& noise) {
  noise.validate();
  require(power > 0.0, ErrorKind::InvalidParameter, "CAR needs a positive pump power");
  const CountingResult r = evaluate(power, b, noise);
  require(r.accidentals > 0.0, ErrorKind::UndefinedCar, "accidental rate is zero");
  return r.car;
}

namespace {

struct PeakTerms {
  double quartic, cubic, linear, constant;
};

PeakTerms peak_terms(const Brightness& b, const NoiseModel& n) {
  const double a1 = n.signal.linear, a2 = n.idler.linear;
  const double n1 = n.signal.background, n2 = n.idler.background;
  return {2.0 * b.signal * b.idler, a1 * b.idler + a2 * b.signal, a1 * n2 + a2 * n1, 2.0 * n1 * n2};
}

double peak_condition(double p, const PeakTerms& t) {
  return ((t.quartic * p + t.cubic) * p * p - t.linear) * p - t.constant;
}

}  // namespace

CarPeak car_peak(const Brightness& b, const NoiseModel& noise, double p_lo, double p_hi) {
  noise.validate();
  require(p_lo > 0.0 && p_hi > p_lo, ErrorKind::InvalidParameter, "power range must be increasing and positive");
  const PeakTerms t = peak_terms(b, noise);
  double g_lo = peak_condition(p_lo, t);
  const double g_hi = peak_condition(p_hi, t);
  require(g_lo < 0.0 && g_hi > 0.0, ErrorKind::Bracket,
          "power range does not bracket a CAR maximum");
  double lo = p_lo, hi = p_hi;
  for (int iter = 0; iter < 400 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double g = peak_condition(mid, t);
    if (g == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((g < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g;
    } else {
      hi = mid;
    }
  }
  const double p = 0.5 * (lo + hi);
  return {p, car(p, b, noise)};
}

double car_peak_residual(double power, const Brightness& b, const NoiseModel& noise) {
  const PeakTerms t = peak_terms(b, noise);
  const double p = power;
  const double scale = std::max({t.quartic * p * p * p * p, t.cubic * p * p * p, t.linear * p, t.constant});
  return scale > 0.0 ? std::abs(peak_condition(p, t)) / scale : 0.0;
}

double car_shift_delta(double p1, double mu1, double mu2, const Brightness& b, const NoiseModel& noise) {
  const PeakTerms t = peak_terms(b, noise);
  const double f_cc = (t.quartic * p1 + t.cubic) * p1 * p1 * p1;
  const double n1n2 = noise.signal.background * noise.idler.background;
  return (mu1 * mu2 - 1.0) * f_cc + 2.0 * (mu2 * mu2 - mu1 * mu2) * n1n2;
}

NoiseModel scale_noise(const NoiseModel& noise, double mu1, double mu2) {
  NoiseModel out = noise;
  out.signal.linear *= mu1;
  out.idler.linear *= mu1;
  out.signal.background *= mu2;
  out.idler.background *= mu2;
  return out;
}

Counts simulate_counts(const CountingResult& rates, double duration, std::uint64_t seed) {
  require(duration > 0.0, ErrorKind::InvalidParameter, "duration must be positive");
  std::mt19937_64 rng(seed);
  const auto draw = [&](double rate) -> std::uint64_t {
    require(rate >= 0.0 && std::isfinite(rate), ErrorKind::InvalidParameter,
            "rates must be finite and non-negative");
    const double mean = rate * duration;
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::uint64_t>(mean)(rng);
  };
  Counts c;
  c.singles_s = draw(rates.singles_s);
  c.singles_i = draw(rates.singles_i);
  c.coincidences = draw(rates.coincidences);
  c.accidentals = draw(rates.accidentals);
  return c;
}

double heralded_g2(const HeraldedCounts& c) {
  require(c.herald_b > 0 && c.herald_c > 0, ErrorKind::UndefinedEstimator,
          "no heralded coincidences in one of the arms");
  return static_cast<double>(c.triple) * static_cast<double>(c.herald) /
         (static_cast<double>(c.herald_b) * static_cast<double>(c.herald_c));
}

HeraldedCounts simulate_heralded(double pairs_per_window, double herald_noise, double arm_noise,
                                 std::uint64_t trials, std::uint64_t seed) {
  require(pairs_per_window >= 0.0, ErrorKind::InvalidParameter, "mean pair number must be non-negative");
  for (double p : {herald_noise, arm_noise})
    require(p >= 0.0 && p <= 1.0, ErrorKind::InvalidParameter, "noise probabilities must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::poisson_distribution<int> pairs(pairs_per_window > 0.0 ? pairs_per_window : 1.0);
  std::bernoulli_distribution herald_dark(herald_noise), arm_dark(arm_noise), split(0.5);
  HeraldedCounts out;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const int n = pairs_per_window > 0.0 ? pairs(rng) : 0;
    int to_b = 0;
    for (int k = 0; k < n; ++k) to_b += split(rng) ? 1 : 0;
    const bool h = n > 0 || herald_dark(rng);
    const bool b = to_b > 0 || arm_dark(rng);
    const bool c = n - to_b > 0 || arm_dark(rng);
    if (!h) continue;
    ++out.herald;
    out.herald_b += b;
    out.herald_c += c;
    out.triple += b && c;
  }
  return out;
}

double predicted_heralded_g2(const CountingResult& r, double window) {
  require(r.singles_s > 0.0, ErrorKind::UndefinedEstimator, "no herald counts");
  require(window > 0.0, ErrorKind::InvalidParameter, "window must be positive");
  const double pc = std::clamp(r.coincidences / r.singles_s, 0.0, 1.0);
  const double lambda = std::max(0.0, r.singles_i - r.coincidences) * window;
  const double noise = -std::expm1(-0.5 * lambda);  // dark click in one output
  const double p12 = pc * (0.5 + 0.5 * noise) + (1.0 - pc) * noise;
  const double p123 = pc * noise + (1.0 - pc) * noise * noise;
  require(p12 > 0.0, ErrorKind::UndefinedEstimator, "no heralded coincidences predicted");
  return p123 / (p12 * p12);
}

std::pair<NoiseFit, NoiseFit> fit_noise(const std::vector<SinglesSample>& samples) {
  require(samples.size() >= 3, ErrorKind::InvalidParameter, "noise fit needs at least three powers");
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd ys(n), yi(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& s = samples[static_cast<std::size_t>(k)];
    a(k, 0) = s.power * s.power;
    a(k, 1) = s.power;
    a(k, 2) = 1.0;
    ys(k) = s.singles_s;
    yi(k) = s.singles_i;
  }
  const auto qr = a.colPivHouseholderQr();
  require(qr.rank() == 3, ErrorKind::InvalidParameter, "noise fit needs three distinct powers");
  const Eigen::Vector3d cs = qr.solve(ys), ci = qr.solve(yi);
  return {NoiseFit{cs(0), {cs(1), cs(2)}}, NoiseFit{ci(0), {ci(1), ci(2)}}};
}

std::vector<SinglesSample> load_singles_table(const std::string& path) {
  std::vector<SinglesSample> out;
  for (const auto& row : io::read_csv(path)) {
    const auto where = path + ":" + std::to_string(row.line) + ": ";
    require(row.cells.size() == 3, ErrorKind::Parse, where + "expected power_W,singles_s,singles_i");
    if (out.empty() && row.cells[0] == "power_W") continue;
    SinglesSample s;
    double* fields[] = {&s.power, &s.singles_s, &s.singles_i};
    for (std::size_t c = 0; c < 3; ++c) {
      char* end = nullptr;
      *fields[c] = std::strtod(row.cells[c].c_str(), &end);
      require(!row.cells[c].empty() && *end == '\0', ErrorKind::Parse,
              where + "malformed number '" + row.cells[c] + "'");
    }
    out.push_back(s);
  }
  require(!out.empty(), ErrorKind::Data, path + ": no samples");
  return out;
}

namespace {

spectral::Band span_of(const std::vector<double>& centers, double width, double margin) {
  require(!centers.empty(), ErrorKind::InvalidParameter, "arm has no channels");
  const auto [lo, hi] = std::minmax_element(centers.begin(), centers.end());
  return {*lo - 0.5 * width - margin, *hi + 0.5 * width + margin};
}

std::vector<double> measured_on_grid(const spectral::MeasuredSpectrum& m, const FrequencyGrid& grid) {
  const double a = wavelength_nm_to_angular(m.wavelength_nm.back());
  const double b = wavelength_nm_to_angular(m.wavelength_nm.front());
  std::vector<double> out(grid.size(), 0.0);
  const double lo = std::max(a, grid.start());
  const double hi = std::min(b, grid.last());
  if (hi - lo < grid.spacing()) return out;
  const auto inner = spectral::lattice_grid({lo, hi}, grid.spacing(), grid.start());
  const auto values = spectral::resample_to_grid(m, inner, 0.0);
  const auto shift = static_cast<std::size_t>(std::llround(grid.position(inner.start())));
  for (std::size_t k = 0; k < values.size(); ++k) out[shift + k] = std::clamp(values[k], 0.0, 1.0);
  return out;
}

}  // namespace

Banks build_banks(const Scenario& sc) {
  require(sc.spacing > 0.0, ErrorKind::InvalidParameter, "grid spacing must be positive");
  require(sc.channels.width > 0.0, ErrorKind::InvalidParameter, "channel width must be positive");
  ChannelPlan plan = sc.channels;
  if (sc.pair_detuning) {
    require(*sc.pair_detuning >= 0.5 * plan.width, ErrorKind::InvalidGeometry,
            "channel pair detuning must keep the channels off the pump center");
    plan.signal_labels = {"signal"};
    plan.signal_centers = {sc.channel_midpoint - *sc.pair_detuning};
    plan.idler_labels = {"idler"};
    plan.idler_centers = {sc.channel_midpoint + *sc.pair_detuning};
  }
  const double margin = plan.all_pass ? 0.0 : sc.margin;
  const auto make = [&](const std::vector<std::string>& labels, const std::vector<double>& centers) {
    const auto grid = spectral::lattice_grid(span_of(centers, plan.width, margin), sc.spacing,
                                             sc.channel_midpoint);
    if (plan.all_pass) return ChannelBank::all_pass(grid, labels.size() == 1 ? labels[0] : "all");
    ChannelBank bricks = ChannelBank::brick_wall(grid, labels, centers, plan.width);
    if (plan.measured.empty()) return bricks;
    ChannelBank bank(grid);
    for (const auto& ch : bricks.channels()) {
      const auto it = plan.measured.find(ch.label);
      if (it == plan.measured.end()) {
        bank.add(ch);
      } else {
        bank.add({ch.label, ch.center, measured_on_grid(it->second, grid)});
      }
    }
    return bank;
  };
  return {make(plan.signal_labels, plan.signal_centers), make(plan.idler_labels, plan.idler_centers)};
}

biphoton::DiscretePump build_pump(const Scenario& sc, const FrequencyGrid& grid_s,
                                  const FrequencyGrid& grid_i) {
  const double center = sc.pump_center();
  const double anchor = biphoton::pump_anchor(grid_s, grid_i, center);
  if (sc.coherence == Coherence::Coherent) {
    return biphoton::discretize(spectral::CoherentPump{center, sc.bandwidth, sc.shape}, sc.spacing,
                                anchor);
  }
  const double offset = anchor - center;
  const auto pump = spectral::make_incoherent_pump(sc.shape, center, sc.bandwidth, sc.spacing, sc.seed,
                                                   offset - std::round(offset / sc.spacing) * sc.spacing);
  return biphoton::discretize(pump, sc.spacing);
}

Brightness brightness(const Scenario& sc) {
  if (sc.fixed_brightness) return *sc.fixed_brightness;
  const Banks banks = build_banks(sc);
  const auto pump = build_pump(sc, banks.signal.grid(), banks.idler.grid());
  return pipeline_counts(pump, sc.wg, sc.disp, banks.signal, banks.idler, sc.efficiency, sc.power);
}

SweepVariable parse_sweep_variable(const std::string& name) {
  if (name == "power") return SweepVariable::Power;
  if (name == "bandwidth") return SweepVariable::Bandwidth;
  if (name == "detuning") return SweepVariable::Detuning;
  if (name == "asymmetry") return SweepVariable::Asymmetry;
  fail(ErrorKind::Config, "unknown sweep variable '" + name + "'");
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::Power: return "power";
    case SweepVariable::Bandwidth: return "bandwidth";
    case SweepVariable::Detuning: return "detuning";
    case SweepVariable::Asymmetry: return "asymmetry";
  }
  return "?";
}

std::vector<SweepRow> sweep(SweepVariable variable, const std::vector<double>& values,
                            const Scenario& scenario) {
  require(!values.empty(), ErrorKind::InvalidParameter, "sweep range is empty");
  scenario.noise.validate();
  std::optional<Brightness> shared;
  if (variable == SweepVariable::Power) shared = brightness(scenario);
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    Scenario sc = scenario;
    switch (variable) {
      case SweepVariable::Power: sc.power = v; break;
      case SweepVariable::Bandwidth: sc.bandwidth = v; break;
      case SweepVariable::Detuning: sc.pair_detuning = v; break;
      case SweepVariable::Asymmetry: sc.asymmetry = v; break;
    }
    require(sc.power >= 0.0, ErrorKind::InvalidParameter, "sweep power must be non-negative");
    SweepRow row;
    row.value = v;
    row.brightness = shared ? *shared : brightness(sc);
    row.rates = evaluate(sc.power, row.brightness, sc.noise);
    try {
      row.g2 = predicted_heralded_g2(row.rates, sc.noise.window);
    } catch (const Error&) {
      row.g2 = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(SweepVariable variable, const std::vector<SweepRow>& rows) {
  io::CsvTable table({to_string(variable), "b_cc", "b_sc_s", "b_sc_i", "singles_s", "singles_i",
                      "coincidences", "accidentals", "car", "g2"});
  for (const auto& r : rows) {
    table.add_row(std::vector<double>{r.value, r.brightness.coincidence, r.brightness.signal,
                                      r.brightness.idler, r.rates.singles_s, r.rates.singles_i,
                                      r.rates.coincidences, r.rates.accidentals, r.rates.car, r.g2});
  }
  return table.str();
}

}  // namespace sfwm::counting
