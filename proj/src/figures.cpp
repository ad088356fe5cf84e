#include "sfwm/figures.hpp"

#include <cmath>

#include "sfwm/error.hpp"
#include "sfwm/io.hpp"
#include "sfwm/units.hpp"

namespace sfwm::figures {

using spectral::FrequencyGrid;

PuritySetup purity_reference_setup() {
  PuritySetup s;
  s.center = itu_channel("C34");
  s.signal_center = itu_channel("C20");
  s.idler_center = itu_channel("C48");
  s.filter_width = hz_to_angular(200e9);
  s.pump_bandwidth = hz_to_angular(200e9);
  return s;
}

PurityResult purity_comparison(const PuritySetup& s) {
  require(s.points >= 8, ErrorKind::InvalidParameter, "purity grids need at least 8 points");
  require(s.filter_width > 0.0 && s.pump_bandwidth > 0.0, ErrorKind::InvalidParameter,
          "filter and pump widths must be positive");
  const double d = 3.0 * s.filter_width / static_cast<double>(s.points);
  const auto gs = FrequencyGrid::centered(s.signal_center, d, s.points);
  const auto gi = FrequencyGrid::centered(s.idler_center, d, s.points);
  waveguide::WaveguideSpec wg;
  waveguide::DispersionModel disp;
  disp.reference = s.center;

  const double half = 0.5 * s.filter_width;
  const auto ts = spectral::brick_wall(gs, {s.signal_center - half, s.signal_center + half});
  const auto ti = spectral::brick_wall(gi, {s.idler_center - half, s.idler_center + half});

  const spectral::CoherentPump cp{s.center, s.pump_bandwidth, spectral::PumpShape::Rectangular};
  auto coherent = biphoton::apply_filters(biphoton::build_jsa_coherent(cp, wg, disp, gs, gi), ts, ti, true);

  // Components sit on the lattice whose pairwise sums land on grid diagonals.
  const double offset = biphoton::pump_anchor(gs, gi, s.center) - s.center;
  const auto ip = spectral::make_incoherent_pump(spectral::PumpShape::Rectangular, s.center,
                                                 s.pump_bandwidth, d, s.seed,
                                                 offset - std::round(offset / d) * d);
  auto incoherent = biphoton::apply_filters(biphoton::build_jsa_incoherent(ip, wg, disp, gs, gi), ts, ti, true);

  const double pc = biphoton::schmidt_purity(coherent).purity;
  const double pi = biphoton::schmidt_purity(incoherent).purity;
  PurityResult out{std::move(coherent), std::move(incoherent), pc, pi};
  return out;
}

std::vector<PurityRow> purity_map(std::uint64_t seed) {
  std::vector<PurityRow> rows;
  for (double filter_ghz : {50.0, 100.0, 200.0}) {
    for (double pump_ghz : {25.0, 50.0, 100.0, 200.0, 400.0}) {
      auto setup = purity_reference_setup();
      setup.filter_width = hz_to_angular(filter_ghz * 1e9);
      setup.pump_bandwidth = hz_to_angular(pump_ghz * 1e9);
      setup.seed = seed;
      const auto r = purity_comparison(setup);
      rows.push_back({setup.filter_width, setup.pump_bandwidth, r.coherent_purity, r.incoherent_purity});
    }
  }
  return rows;
}

counting::Scenario square_pump_scenario(double bandwidth, double detuning, double spacing) {
  counting::Scenario sc;
  sc.coherence = counting::Coherence::Incoherent;
  sc.shape = spectral::PumpShape::Rectangular;
  sc.channel_midpoint = itu_channel("C34");
  sc.bandwidth = bandwidth;
  sc.pair_detuning = detuning;
  sc.wg.length = 0.01;
  sc.wg.gamma = 200.0;
  sc.wg.segments = 64;
  sc.disp.reference = sc.channel_midpoint;
  sc.disp.beta2 = 1.0e-24;
  sc.spacing = spacing;
  sc.channels.width = hz_to_angular(200e9);
  // Pump-pair sums spread by the full bandwidth; the margin keeps every twin on the grid.
  sc.margin = std::max(sc.channels.width, bandwidth + spacing);
  return sc;
}

CurveSet detuning_curves(const std::vector<double>& detunings, const std::vector<double>& bandwidths,
                         double spacing) {
  require(!detunings.empty() && !bandwidths.empty(), ErrorKind::InvalidParameter, "empty sweep");
  CurveSet out;
  out.abscissa = detunings;
  out.labels = bandwidths;
  for (double bw : bandwidths) {
    std::vector<double> cc, sg;
    for (double det : detunings) {
      const auto b = counting::brightness(square_pump_scenario(bw, det, spacing));
      cc.push_back(b.coincidence);
      sg.push_back(b.signal);
    }
    out.coincidences.push_back(std::move(cc));
    out.singles.push_back(std::move(sg));
  }
  return out;
}

CurveSet bandwidth_curve(const std::vector<double>& bandwidths, double detuning, double spacing) {
  require(!bandwidths.empty(), ErrorKind::InvalidParameter, "empty sweep");
  CurveSet out;
  out.abscissa = bandwidths;
  out.labels = {detuning};
  std::vector<double> cc, sg;
  for (double bw : bandwidths) {
    const auto b = counting::brightness(square_pump_scenario(bw, detuning, spacing));
    cc.push_back(b.coincidence);
    sg.push_back(b.signal);
  }
  out.coincidences.push_back(std::move(cc));
  out.singles.push_back(std::move(sg));
  return out;
}

CarCurves car_curves(std::size_t points, double p_min, double p_max) {
  require(points >= 2 && p_min > 0.0 && p_max > p_min, ErrorKind::InvalidParameter,
          "power grid needs two or more points on a positive range");
  const double spacing = hz_to_angular(1.25e9);
  auto inc = square_pump_scenario(hz_to_angular(200e9), itu_channel("C48") - itu_channel("C34"), spacing);
  inc.pair_detuning.reset();
  inc.channels.signal_labels = {"C20"};
  inc.channels.signal_centers = {itu_channel("C20")};
  inc.channels.idler_labels = {"C48"};
  inc.channels.idler_centers = {itu_channel("C48")};
  inc.efficiency = {0.1, 0.1, 0.1, 0.1};
  inc.noise.signal = {5.0e6, 1.0e3};
  inc.noise.idler = {5.0e6, 1.0e3};

  auto coh = inc;
  coh.coherence = counting::Coherence::Coherent;
  coh.shape = spectral::PumpShape::Gaussian;
  coh.bandwidth = hz_to_angular(5e9);

  CarCurves out;
  out.noise = inc.noise;
  out.incoherent_brightness = counting::brightness(inc);
  out.coherent_brightness = counting::brightness(coh);
  const counting::NoiseModel silent{{}, {}, inc.noise.window};
  for (std::size_t k = 0; k < points; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(points - 1);
    const double p = p_min * std::pow(p_max / p_min, t);
    out.power.push_back(p);
    out.coherent.push_back(counting::car(p, out.coherent_brightness, out.noise));
    out.incoherent.push_back(counting::car(p, out.incoherent_brightness, out.noise));
    out.incoherent_noise_free.push_back(counting::car(p, out.incoherent_brightness, silent));
  }
  return out;
}

std::vector<RateRow> rate_table(const rates::DetuningScheme& scheme, double sigma, int intervals,
                                double resolution, const waveguide::WaveguideSpec& wg,
                                const waveguide::DispersionModel& disp) {
  scheme.validate();
  require(intervals >= 1 && resolution > 0.0 && sigma > 0.0, ErrorKind::InvalidParameter,
          "rate table needs positive sigma, resolution and interval count");
  std::vector<RateRow> rows;
  for (int m = 0; m < intervals; ++m) {
    RateRow r;
    r.m = m;
    r.detuning = scheme.detuning(m);
    r.mismatch = rates::interval_mismatch(m, scheme, disp);
    r.coherent_analytic = rates::coherent_rate_interval(m, scheme, sigma, 1.0, wg, disp);
    r.incoherent_analytic = rates::incoherent_rate_interval(m, scheme, 1.0, wg, disp);

    counting::Scenario sc;
    sc.shape = spectral::PumpShape::Gaussian;
    sc.channel_midpoint = scheme.center;
    sc.bandwidth = sigma;
    sc.pair_detuning = (m + 0.5) * scheme.interval;
    sc.wg = wg;
    sc.disp = disp;
    sc.spacing = sigma / resolution;
    sc.channels.width = scheme.interval;
    sc.power = 1.0;
    sc.coherence = counting::Coherence::Coherent;
    r.coherent_numeric = counting::brightness(sc).coincidence;
    sc.coherence = counting::Coherence::Incoherent;
    r.incoherent_numeric = counting::brightness(sc).coincidence;
    rows.push_back(r);
  }
  return rows;
}

std::string purity_map_csv(const std::vector<PurityRow>& rows) {
  io::CsvTable t({"filter_ghz", "pump_ghz", "purity_coherent", "purity_incoherent"});
  for (const auto& r : rows) {
    t.add_row(std::vector<double>{angular_to_hz(r.filter_width) * 1e-9, angular_to_hz(r.pump_bandwidth) * 1e-9,
                                  r.coherent, r.incoherent});
  }
  return t.str();
}

std::string curves_csv(const CurveSet& c, const std::string& abscissa_name) {
  std::vector<std::string> header{abscissa_name + "_ghz"};
  for (double label : c.labels) {
    const std::string tag = format_number(angular_to_hz(label) * 1e-9);
    header.push_back("coincidence_norm_" + tag);
    header.push_back("singles_norm_" + tag);
  }
  io::CsvTable t(header);
  for (std::size_t k = 0; k < c.abscissa.size(); ++k) {
    std::vector<double> row{angular_to_hz(c.abscissa[k]) * 1e-9};
    for (std::size_t j = 0; j < c.labels.size(); ++j) {
      row.push_back(c.coincidences[j][k] / c.coincidences[j].front());
      row.push_back(c.singles[j][k] / c.singles[j].front());
    }
    t.add_row(row);
  }
  return t.str();
}

std::string car_curves_csv(const CarCurves& c) {
  io::CsvTable t({"power_w", "car_coherent", "car_incoherent", "car_incoherent_noise_free"});
  for (std::size_t k = 0; k < c.power.size(); ++k)
    t.add_row(std::vector<double>{c.power[k], c.coherent[k], c.incoherent[k], c.incoherent_noise_free[k]});
  return t.str();
}

std::string rate_table_csv(const std::vector<RateRow>& rows) {
  io::CsvTable t({"m", "detuning_rad_s", "dk_per_m", "coherent_analytic", "incoherent_analytic",
                  "coherent_numeric", "incoherent_numeric", "ratio_numeric"});
  for (const auto& r : rows) {
    t.add_row(std::vector<double>{static_cast<double>(r.m), r.detuning, r.mismatch, r.coherent_analytic,
                                  r.incoherent_analytic, r.coherent_numeric, r.incoherent_numeric,
                                  r.incoherent_numeric / r.coherent_numeric});
  }
  return t.str();
}

}  // namespace sfwm::figures
