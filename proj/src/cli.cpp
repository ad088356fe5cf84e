#include "sfwm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "sfwm/biphoton.hpp"
#include "sfwm/config.hpp"
#include "sfwm/counting.hpp"
#include "sfwm/entanglement.hpp"
#include "sfwm/error.hpp"
#include "sfwm/figures.hpp"
#include "sfwm/io.hpp"
#include "sfwm/rates.hpp"
#include "sfwm/units.hpp"

namespace sfwm::cli {

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string kind;
  bool no_noise = false;
  std::string figure;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON configuration file")->check(CLI::ExistingFile);
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--kind", f.kind, "measured spectrum kind")
      ->check(CLI::IsMember({"intensity", "transmittance"}));
  sub->add_flag("--no-noise", f.no_noise, "drop noise counts");
}

class Context {
 public:
  Context(const Flags& f, std::ostream& out) : flags_(f), out_(out) {
    cfg_ = f.config.empty() ? config::defaults() : config::load(f.config);
    if (f.seed) cfg_.seed = *f.seed;
    dir_ = f.out.empty() ? fs::path(cfg_.output) : fs::path(f.out);
    if (f.no_noise) cfg_.noise = {{}, {}, cfg_.noise.window};
  }

  const config::RunConfig& cfg() const { return cfg_; }
  const Flags& flags() const { return flags_; }
  std::ostream& out() { return out_; }

  void write(const std::string& name, const std::string& contents) {
    fs::create_directories(dir_);
    const auto path = dir_ / name;
    io::write_atomic(path, contents);
    out_ << "wrote " << path.string() << '\n';
  }

 private:
  Flags flags_;
  std::ostream& out_;
  config::RunConfig cfg_;
  fs::path dir_;
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

biphoton::JointSpectrum joint_spectrum(const config::RunConfig& cfg, const counting::Banks& banks) {
  const auto sc = config::scenario(cfg);
  const auto& gs = banks.signal.grid();
  const auto& gi = banks.idler.grid();
  biphoton::BuildOptions opts;
  opts.phase_power = std::max(cfg.pump.power, std::numeric_limits<double>::min());
  biphoton::JointSpectrum js = [&] {
    if (sc.coherence == counting::Coherence::Coherent) {
      const spectral::CoherentPump cp{sc.pump_center(), sc.bandwidth, sc.shape};
      return biphoton::build_jsa_coherent(cp, sc.wg, sc.disp, gs, gi, opts);
    }
    const double d = gs.spacing();
    const double offset = biphoton::pump_anchor(gs, gi, sc.pump_center()) - sc.pump_center();
    const auto ip = spectral::make_incoherent_pump(sc.shape, sc.pump_center(), sc.bandwidth, d, cfg.seed,
                                                   offset - std::round(offset / d) * d);
    biphoton::IncoherentMode mode = biphoton::IntensitySum{};
    if (cfg.jsa.mode == "monte_carlo") mode = biphoton::MonteCarlo{cfg.seed, cfg.jsa.ensembles};
    return biphoton::build_jsa_incoherent(ip, sc.wg, sc.disp, gs, gi, mode, opts);
  }();
  if (cfg.jsa.filters)
    js = biphoton::apply_filters(js, banks.signal.arm_transmittance(), banks.idler.arm_transmittance(), true);
  return js;
}

void cmd_jsa(Context& ctx) {
  const auto banks = counting::build_banks(config::scenario(ctx.cfg()));
  ctx.write("jsa.json", biphoton::to_json(joint_spectrum(ctx.cfg(), banks)));
}

biphoton::JointSpectrum amplitude_of(biphoton::JointSpectrum js) {
  if (js.kind == biphoton::JointKind::Intensity) {
    js.values = js.values.real().cwiseMax(0.0).cwiseSqrt().cast<std::complex<double>>();
    js.kind = biphoton::JointKind::Amplitude;
  }
  return js;
}

void cmd_purity(Context& ctx) {
  const auto js = [&ctx] {
    if (!ctx.cfg().jsa.input.empty()) return biphoton::from_json(io::read_file(ctx.cfg().jsa.input));
    return joint_spectrum(ctx.cfg(), counting::build_banks(config::scenario(ctx.cfg())));
  }();
  const auto schmidt = biphoton::schmidt_purity(amplitude_of(js));
  io::CsvTable t({"k", "lambda"});
  for (std::size_t k = 0; k < schmidt.coefficients.size(); ++k)
    t.add_row(std::vector<double>{static_cast<double>(k), schmidt.coefficients[k]});
  ctx.write("schmidt.csv", t.str());
  ctx.out() << "purity " << fixed6(schmidt.purity) << '\n';
}

void cmd_rates(Context& ctx) {
  const auto& cfg = ctx.cfg();
  const double sigma = cfg.pump.bandwidth;
  const double interval = cfg.rates.interval > 0.0 ? cfg.rates.interval : 100.0 * sigma;
  const rates::DetuningScheme scheme{interval, cfg.pump.center};
  const auto rows = figures::rate_table(scheme, sigma, cfg.rates.intervals, cfg.rates.resolution,
                                        cfg.waveguide, cfg.dispersion);
  ctx.write("rates.csv", figures::rate_table_csv(rows));
  for (const auto& r : rows) {
    ctx.out() << "m=" << r.m << " incoherent/coherent analytic "
              << format_number(r.incoherent_analytic / r.coherent_analytic) << " numeric "
              << format_number(r.incoherent_numeric / r.coherent_numeric) << '\n';
  }
}

void cmd_car(Context& ctx) {
  const auto& cfg = ctx.cfg();
  const auto b = counting::brightness(config::scenario(cfg));
  io::CsvTable t({"power_w", "singles_s", "singles_i", "coincidences", "accidentals", "car"});
  for (std::size_t k = 0; k < cfg.car.points; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(cfg.car.points - 1);
    const double p = cfg.car.log_spacing ? cfg.car.power_min * std::pow(cfg.car.power_max / cfg.car.power_min, u)
                                         : cfg.car.power_min + u * (cfg.car.power_max - cfg.car.power_min);
    const auto r = counting::evaluate(p, b, cfg.noise);
    t.add_row(std::vector<double>{p, r.singles_s, r.singles_i, r.coincidences, r.accidentals, r.car});
  }
  ctx.write("car.csv", t.str());
  try {
    const auto peak = counting::car_peak(b, cfg.noise, cfg.car.power_min, cfg.car.power_max);
    ctx.out() << "peak power_w " << format_number(peak.power) << " car " << format_number(peak.car) << '\n';
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Bracket) throw;
    ctx.out() << "no CAR maximum inside the power range\n";
  }
}

void cmd_sweep(Context& ctx) {
  const auto& cfg = ctx.cfg();
  const auto rows = counting::sweep(cfg.sweep.variable, cfg.sweep.values, config::scenario(cfg));
  ctx.write("sweep.csv", counting::sweep_csv(cfg.sweep.variable, rows));
}

void cmd_jsi_channels(Context& ctx) {
  const auto banks = counting::build_banks(config::scenario(ctx.cfg()));
  auto cfg = ctx.cfg();
  cfg.jsa.filters = false;
  const auto m = biphoton::channel_jsi_matrix(joint_spectrum(cfg, banks), banks.signal, banks.idler);
  ctx.write("channels.csv", biphoton::channel_matrix_csv(m, banks.signal, banks.idler));
}

std::string visibility_text(const entanglement::TwoQubitState& s, entanglement::FringeBasis basis) {
  try {
    return format_number(entanglement::fringe_visibility(s, basis));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UndefinedVisibility) throw;
    return "undefined";
  }
}

void cmd_chsh(Context& ctx) {
  const auto& e = ctx.cfg().entanglement;
  const auto state = entanglement::sagnac_state(e.state);
  const double s = entanglement::chsh(state, e.theta_s, e.theta_i);
  const auto vh = visibility_text(state, entanglement::FringeBasis::H);
  const auto vd = visibility_text(state, entanglement::FringeBasis::D);
  io::CsvTable t({"quantity", "value"});
  t.add_row(std::vector<std::string>{"S", format_number(s)});
  t.add_row(std::vector<std::string>{"visibility_h", vh});
  t.add_row(std::vector<std::string>{"visibility_d", vd});
  ctx.write("chsh.csv", t.str());
  ctx.out() << "S " << format_number(s) << "\nvisibility_h " << vh << "\nvisibility_d " << vd << '\n';
}

void cmd_fidelity(Context& ctx) {
  const auto& e = ctx.cfg().entanglement;
  const double f = entanglement::fidelity(entanglement::sagnac_state(e.state),
                                          entanglement::sagnac_state(e.reference));
  io::CsvTable t({"fidelity"});
  t.add_row(std::vector<double>{f});
  ctx.write("fidelity.csv", t.str());
  ctx.out() << "fidelity " << format_number(f) << '\n';
}

void cmd_tomo(Context& ctx) {
  const auto& cfg = ctx.cfg();
  require(!cfg.tomography.counts.empty(), ErrorKind::Config, "'tomography.counts' is required");
  auto input = entanglement::load_tomography_csv(cfg.tomography.counts);
  if (cfg.tomography.accidentals > 0.0) {
    input.counts = entanglement::subtract_accidentals(
        input.counts, std::vector<double>(input.counts.size(), cfg.tomography.accidentals));
  }
  const auto rho = entanglement::tomography_linear(input.counts, input.settings);
  ctx.write("tomo_state.json", entanglement::to_json(rho));
  const auto& e = cfg.entanglement;
  ctx.out() << "fidelity " << format_number(entanglement::fidelity(rho, entanglement::sagnac_state(e.reference)))
            << "\nS " << format_number(entanglement::chsh(rho, e.theta_s, e.theta_i)) << '\n';
}

void cmd_ingest(Context& ctx) {
  const auto& cfg = ctx.cfg();
  require(!cfg.spectrum.path.empty(), ErrorKind::Config, "'spectrum.path' is required");
  std::optional<spectral::SpectrumKind> kind = cfg.spectrum.kind;
  if (ctx.flags().kind == "intensity") kind = spectral::SpectrumKind::Intensity;
  if (ctx.flags().kind == "transmittance") kind = spectral::SpectrumKind::Transmittance;
  const auto m = spectral::load_measured_spectrum(cfg.spectrum.path, kind);
  const spectral::Band band{wavelength_nm_to_angular(m.wavelength_nm.back()),
                            wavelength_nm_to_angular(m.wavelength_nm.front())};
  const auto grid = spectral::lattice_grid(band, config::resolved_spacing(cfg), cfg.pump.center);
  const auto values = spectral::resample_to_grid(m, grid, cfg.spectrum.threshold);
  io::CsvTable t({"omega_rad_s", "frequency_thz", "value"});
  for (std::size_t k = 0; k < grid.size(); ++k)
    t.add_row(std::vector<double>{grid[k], angular_to_hz(grid[k]) * 1e-12, values[k]});
  ctx.write("ingested.csv", t.str());
  ctx.out() << "samples " << grid.size() << '\n';
}

void repro_fig1(Context& ctx) {
  auto setup = figures::purity_reference_setup();
  setup.seed = ctx.cfg().seed;
  const auto ref = figures::purity_comparison(setup);
  ctx.write("fig1.csv", figures::purity_map_csv(figures::purity_map(setup.seed)));
  ctx.write("fig1_jsa_coherent.json", biphoton::to_json(ref.coherent));
  ctx.write("fig1_jsa_incoherent.json", biphoton::to_json(ref.incoherent));
  ctx.out() << "coherent purity " << fixed6(ref.coherent_purity) << "\nincoherent purity "
            << fixed6(ref.incoherent_purity) << '\n';
}

void repro_fig_s2(Context& ctx) {
  const double spacing = hz_to_angular(4e9);
  std::vector<double> detunings;
  for (int k = 1; k <= 15; ++k) detunings.push_back(hz_to_angular(200e9 * k));
  std::vector<double> bandwidths;
  for (double ghz : {100.0, 200.0, 400.0}) bandwidths.push_back(hz_to_angular(ghz * 1e9));
  const auto a = figures::detuning_curves(detunings, bandwidths, spacing);
  ctx.write("figS2a.csv", figures::curves_csv(a, "detuning"));

  std::vector<double> sweep;
  for (double ghz : {25.0, 50.0, 100.0, 200.0, 300.0, 400.0, 600.0, 800.0}) sweep.push_back(hz_to_angular(ghz * 1e9));
  const auto b = figures::bandwidth_curve(sweep, itu_channel("C48") - itu_channel("C34"), spacing);
  ctx.write("figS2b.csv", figures::curves_csv(b, "bandwidth"));

  double worst = 0.0;
  for (std::size_t j = 0; j < a.labels.size(); ++j) {
    for (std::size_t k = 0; k < a.abscissa.size(); ++k) {
      const double c = a.coincidences[j][k] / a.coincidences[j].front();
      const double s = a.singles[j][k] / a.singles[j].front();
      worst = std::max(worst, std::abs(c - s));
    }
  }
  ctx.out() << "max normalized coincidence/singles difference " << format_number(worst) << '\n';
}

void repro_fig_s3d(Context& ctx) {
  const auto c = figures::car_curves(100, 1e-5, 1e-2);
  ctx.write("figS3d.csv", figures::car_curves_csv(c));
  const auto peak_c = counting::car_peak(c.coherent_brightness, c.noise, 1e-5, 1e-2);
  const auto peak_i = counting::car_peak(c.incoherent_brightness, c.noise, 1e-5, 1e-2);
  for (const auto& [name, b] : {std::pair{"coherent", c.coherent_brightness}, std::pair{"incoherent", c.incoherent_brightness}}) {
    ctx.out() << name << " brightness coincidence " << format_number(b.coincidence) << " signal "
              << format_number(b.signal) << " idler " << format_number(b.idler) << '\n';
  }
  ctx.out() << "coherent peak power_w " << format_number(peak_c.power) << " car " << format_number(peak_c.car)
            << "\nincoherent peak power_w " << format_number(peak_i.power) << " car "
            << format_number(peak_i.car) << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-pair source modelling under coherent and incoherent pumping", "sfwm-lab"};
  app.require_subcommand(1);
  Flags flags;

  using Handler = void (*)(Context&);
  const std::vector<std::tuple<const char*, const char*, Handler>> commands{
      {"jsa", "dump the joint spectral amplitude as JSON", cmd_jsa},
      {"purity", "print the Schmidt purity and dump the coefficients", cmd_purity},
      {"rates", "analytic versus numeric pair rates per detuning interval", cmd_rates},
      {"car", "coincidence-to-accidental ratio versus power", cmd_car},
      {"sweep", "counting sweep over power, bandwidth, detuning or asymmetry", cmd_sweep},
      {"jsi-channels", "channel-resolved joint spectral intensity", cmd_jsi_channels},
      {"chsh", "CHSH parameter and fringe visibilities", cmd_chsh},
      {"fidelity", "fidelity between the configured and reference states", cmd_fidelity},
      {"tomo", "linear-inversion tomography from a counts table", cmd_tomo},
      {"ingest", "resample a measured spectrum onto the frequency grid", cmd_ingest},
  };
  Handler chosen = nullptr;
  for (const auto& [name, help, handler] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, flags);
    sub->callback([&chosen, h = handler] { chosen = h; });
  }
  auto* repro = app.add_subcommand("repro", "regenerate the data behind a figure");
  add_common(repro, flags);
  repro->add_option("figure", flags.figure, "fig1, figS2 or figS3d")
      ->required()
      ->check(CLI::IsMember({"fig1", "figS2", "figS3d"}));
  repro->callback([&] {
    chosen = flags.figure == "fig1" ? repro_fig1 : flags.figure == "figS2" ? repro_fig_s2 : repro_fig_s3d;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    Context ctx(flags, out);
    chosen(ctx);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_numerical() ? 2 : 1;
  } catch (const fs::filesystem_error& e) {
    err << "error (io): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace sfwm::cli
