#include "sfwm/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "sfwm/error.hpp"
#include "sfwm/io.hpp"
#include "sfwm/units.hpp"

namespace sfwm::config {

using nlohmann::json;

namespace {

class Section {
 public:
  Section(const json& node, std::string path, std::initializer_list<const char*> allowed)
      : node_(node), path_(std::move(path)) {
    require(node_.is_object(), ErrorKind::Config, "'" + display() + "' must be an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : node_.items()) {
      require(keys.count(item.key()) > 0, ErrorKind::Config,
              "unknown key '" + child(item.key()) + "'");
    }
  }

  bool has(const char* key) const { return node_.contains(key) && !node_.at(key).is_null(); }
  const json& at(const char* key) const { return node_.at(key); }
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void number(const char* key, double& out) const {
    if (!has(key)) return;
    require(at(key).is_number(), ErrorKind::Config, "'" + child(key) + "' must be a number");
    out = at(key).get<double>();
  }
  void positive(const char* key, double& out) const {
    number(key, out);
    if (has(key)) require(out > 0.0, ErrorKind::Config, "'" + child(key) + "' must be positive");
  }
  void non_negative(const char* key, double& out) const {
    number(key, out);
    if (has(key)) require(out >= 0.0, ErrorKind::Config, "'" + child(key) + "' must be non-negative");
  }
  template <class Int>
  void integer(const char* key, Int& out, long long min_value) const {
    if (!has(key)) return;
    require(at(key).is_number_integer(), ErrorKind::Config, "'" + child(key) + "' must be an integer");
    const auto v = at(key).get<long long>();
    require(v >= min_value, ErrorKind::Config,
            "'" + child(key) + "' must be at least " + std::to_string(min_value));
    out = static_cast<Int>(v);
  }
  void boolean(const char* key, bool& out) const {
    if (!has(key)) return;
    require(at(key).is_boolean(), ErrorKind::Config, "'" + child(key) + "' must be true or false");
    out = at(key).get<bool>();
  }
  void string(const char* key, std::string& out) const {
    if (!has(key)) return;
    require(at(key).is_string(), ErrorKind::Config, "'" + child(key) + "' must be a string");
    out = at(key).get<std::string>();
  }
  /// Number (rad/s) or a string such as "200 GHz" or "C34".
  double frequency_value(const json& v, const std::string& where) const {
    if (v.is_number()) return v.get<double>();
    require(v.is_string(), ErrorKind::Config, "'" + where + "' must be a frequency");
    try {
      return parse_angular_frequency(v.get<std::string>());
    } catch (const Error& e) {
      fail(ErrorKind::Config, "'" + where + "': " + e.what());
    }
  }
  void frequency(const char* key, double& out) const {
    if (has(key)) out = frequency_value(at(key), child(key));
  }
  void frequency(const char* key, std::optional<double>& out) const {
    if (has(key)) out = frequency_value(at(key), child(key));
  }
  std::vector<std::string> labels(const char* key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    const auto& v = at(key);
    require(v.is_array(), ErrorKind::Config, "'" + child(key) + "' must be an array of labels");
    for (const auto& item : v) {
      require(item.is_string(), ErrorKind::Config, "'" + child(key) + "' entries must be strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }
  const std::string& path() const { return path_; }

 private:
  std::string display() const { return path_.empty() ? "<root>" : path_; }
  const json& node_;
  std::string path_;
};

template <class Enum>
Enum choose(const Section& s, const char* key, Enum current,
            std::initializer_list<std::pair<const char*, Enum>> options) {
  if (!s.has(key)) return current;
  std::string v;
  s.string(key, v);
  for (const auto& [name, value] : options)
    if (v == name) return value;
  fail(ErrorKind::Config, "'" + s.child(key) + "' has unsupported value '" + v + "'");
}

void read_pump(const Section& s, PumpConfig& p) {
  p.coherence = choose(s, "coherence", p.coherence,
                       {{"coherent", counting::Coherence::Coherent},
                        {"incoherent", counting::Coherence::Incoherent}});
  p.shape = choose(s, "shape", p.shape,
                   {{"gaussian", spectral::PumpShape::Gaussian},
                    {"rectangular", spectral::PumpShape::Rectangular}});
  s.frequency("center", p.center);
  s.frequency("bandwidth", p.bandwidth);
  s.non_negative("power", p.power);
  s.frequency("asymmetry", p.asymmetry);
  require(p.bandwidth > 0.0, ErrorKind::Config, "'" + s.child("bandwidth") + "' must be positive");
}

void read_waveguide(const Section& s, waveguide::WaveguideSpec& wg, waveguide::DispersionModel& disp,
                    bool& reference_set) {
  s.positive("length", wg.length);
  s.non_negative("gamma", wg.gamma);
  s.non_negative("loss_db_per_m", wg.loss_db_per_m);
  s.integer("segments", wg.segments, 1);
  s.boolean("nonlinear_phase", wg.include_nonlinear_phase);
  if (s.has("dispersion")) {
    const Section d(s.at("dispersion"), s.child("dispersion"),
                    {"reference", "k0", "k1", "beta2", "beta3", "span"});
    reference_set = d.has("reference");
    d.frequency("reference", disp.reference);
    d.number("k0", disp.k0);
    d.number("k1", disp.k1);
    d.number("beta2", disp.beta2);
    d.number("beta3", disp.beta3);
    d.frequency("span", disp.span);
  }
}

std::vector<double> read_values(const Section& s, const char* key) {
  std::vector<double> out;
  if (!s.has(key)) return out;
  const auto& v = s.at(key);
  const std::string where = s.child(key);
  if (v.is_array()) {
    for (const auto& item : v) out.push_back(s.frequency_value(item, where));
    return out;
  }
  const Section r(v, where, {"start", "stop", "count", "log"});
  double start = 0.0, stop = 0.0;
  std::size_t count = 2;
  bool log = false;
  require(r.has("start") && r.has("stop"), ErrorKind::Config, "'" + where + "' needs start and stop");
  r.frequency("start", start);
  r.frequency("stop", stop);
  r.integer("count", count, 1);
  r.boolean("log", log);
  if (log) require(start > 0.0 && stop > 0.0, ErrorKind::Config, "'" + where + "' log range must be positive");
  for (std::size_t k = 0; k < count; ++k) {
    const double t = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
    out.push_back(log ? start * std::pow(stop / start, t) : start + t * (stop - start));
  }
  return out;
}

entanglement::AngleSet read_angles(const Section& s, const char* key, entanglement::AngleSet current) {
  if (!s.has(key)) return current;
  const auto& v = s.at(key);
  require(v.is_array() && v.size() == 4, ErrorKind::Config,
          "'" + s.child(key) + "' must list four angles in degrees");
  entanglement::AngleSet out{};
  for (std::size_t k = 0; k < 4; ++k) {
    require(v[k].is_number(), ErrorKind::Config, "'" + s.child(key) + "' entries must be numbers");
    out[k] = v[k].get<double>() * kPi / 180.0;
  }
  return out;
}

void read_sagnac(const Section& s, entanglement::SagnacParams& p) {
  s.non_negative("eta", p.eta);
  s.number("delta", p.delta);
  s.non_negative("white_noise", p.white_noise);
  require(p.white_noise <= 1.0, ErrorKind::Config, "'" + s.child("white_noise") + "' must not exceed 1");
}

std::string resolve_path(const std::string& p, const std::filesystem::path& base) {
  if (p.empty() || base.empty() || std::filesystem::path(p).is_absolute()) return p;
  return (base / p).string();
}

}  // namespace

RunConfig defaults() {
  RunConfig c;
  c.pump.center = itu_channel("C34");
  c.pump.bandwidth = hz_to_angular(200e9);
  c.waveguide.length = 0.01;
  c.waveguide.gamma = 200.0;
  c.waveguide.segments = 64;
  c.dispersion.reference = c.pump.center;
  c.dispersion.beta2 = 1.0e-24;
  c.channels.signal = {"C20"};
  c.channels.idler = {"C48"};
  c.channels.width = hz_to_angular(200e9);
  c.sweep.values = {1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3};
  return c;
}

RunConfig parse(std::string_view text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Config, std::string("invalid JSON: ") + e.what());
  }
  const Section top(root, "",
                    {"pump", "waveguide", "grid", "channels", "efficiency", "noise", "sweep", "car",
                     "jsa", "rates", "entanglement", "tomography", "spectrum", "seed", "output"});
  RunConfig c = defaults();
  bool reference_set = false;
  if (top.has("pump")) read_pump(Section(top.at("pump"), "pump",
                                         {"coherence", "shape", "center", "bandwidth", "power", "asymmetry"}),
                                 c.pump);
  if (top.has("waveguide")) {
    read_waveguide(Section(top.at("waveguide"), "waveguide",
                           {"length", "gamma", "loss_db_per_m", "segments", "nonlinear_phase", "dispersion"}),
                   c.waveguide, c.dispersion, reference_set);
  }
  if (!reference_set) c.dispersion.reference = c.pump.center;
  if (top.has("grid")) {
    const Section g(top.at("grid"), "grid", {"points", "spacing", "margin_channels"});
    g.integer("points", c.grid.points, 2);
    g.frequency("spacing", c.grid.spacing);
    g.non_negative("margin_channels", c.grid.margin_channels);
    if (c.grid.spacing) require(*c.grid.spacing > 0.0, ErrorKind::Config, "'grid.spacing' must be positive");
  }
  if (top.has("channels")) {
    const Section ch(top.at("channels"), "channels",
                     {"signal", "idler", "width", "all_pass", "pair_detuning", "spectra"});
    if (ch.has("signal")) c.channels.signal = ch.labels("signal");
    if (ch.has("idler")) c.channels.idler = ch.labels("idler");
    ch.frequency("width", c.channels.width);
    ch.boolean("all_pass", c.channels.all_pass);
    ch.frequency("pair_detuning", c.channels.pair_detuning);
    require(c.channels.width > 0.0, ErrorKind::Config, "'channels.width' must be positive");
    if (ch.has("spectra")) {
      const auto& sp = ch.at("spectra");
      require(sp.is_object(), ErrorKind::Config, "'channels.spectra' must map labels to files");
      for (const auto& item : sp.items()) {
        require(item.value().is_string(), ErrorKind::Config,
                "'channels.spectra." + item.key() + "' must be a path");
        c.channels.spectra[item.key()] = resolve_path(item.value().get<std::string>(), base_dir);
      }
    }
  }
  if (top.has("efficiency")) {
    const Section e(top.at("efficiency"), "efficiency",
                    {"transmission_s", "transmission_i", "detection_s", "detection_i"});
    e.positive("transmission_s", c.efficiency.transmission_s);
    e.positive("transmission_i", c.efficiency.transmission_i);
    e.positive("detection_s", c.efficiency.detection_s);
    e.positive("detection_i", c.efficiency.detection_i);
    try {
      c.efficiency.validate();
    } catch (const Error& err) {
      fail(ErrorKind::Config, std::string("efficiency: ") + err.what());
    }
  }
  if (top.has("noise")) {
    const Section n(top.at("noise"), "noise", {"signal", "idler", "window"});
    for (const char* arm : {"signal", "idler"}) {
      if (!n.has(arm)) continue;
      const Section a(n.at(arm), n.child(arm), {"linear", "background"});
      auto& target = std::string(arm) == "signal" ? c.noise.signal : c.noise.idler;
      a.non_negative("linear", target.linear);
      a.non_negative("background", target.background);
    }
    n.positive("window", c.noise.window);
  }
  if (top.has("sweep")) {
    const Section s(top.at("sweep"), "sweep", {"variable", "values"});
    if (s.has("variable")) {
      std::string v;
      s.string("variable", v);
      c.sweep.variable = counting::parse_sweep_variable(v);
    }
    if (s.has("values")) c.sweep.values = read_values(s, "values");
    require(!c.sweep.values.empty(), ErrorKind::Config, "'sweep.values' must not be empty");
  }
  if (top.has("car")) {
    const Section s(top.at("car"), "car", {"power_min", "power_max", "points", "log", "brightness"});
    s.positive("power_min", c.car.power_min);
    s.positive("power_max", c.car.power_max);
    s.integer("points", c.car.points, 2);
    s.boolean("log", c.car.log_spacing);
    require(c.car.power_max > c.car.power_min, ErrorKind::Config, "'car.power_max' must exceed 'car.power_min'");
    if (s.has("brightness")) {
      const Section b(s.at("brightness"), "car.brightness", {"coincidence", "signal", "idler"});
      counting::Brightness br;
      b.non_negative("coincidence", br.coincidence);
      b.non_negative("signal", br.signal);
      b.non_negative("idler", br.idler);
      c.car.brightness = br;
    }
  }
  if (top.has("jsa")) {
    const Section s(top.at("jsa"), "jsa", {"mode", "ensembles", "filters", "input"});
    s.string("mode", c.jsa.mode);
    require(c.jsa.mode == "intensity_sum" || c.jsa.mode == "monte_carlo", ErrorKind::Config,
            "'jsa.mode' must be intensity_sum or monte_carlo");
    s.integer("ensembles", c.jsa.ensembles, 2);
    s.boolean("filters", c.jsa.filters);
    s.string("input", c.jsa.input);
    c.jsa.input = resolve_path(c.jsa.input, base_dir);
  }
  if (top.has("rates")) {
    const Section s(top.at("rates"), "rates", {"interval", "intervals", "resolution"});
    s.frequency("interval", c.rates.interval);
    s.integer("intervals", c.rates.intervals, 1);
    s.positive("resolution", c.rates.resolution);
    require(c.rates.interval >= 0.0, ErrorKind::Config, "'rates.interval' must be non-negative");
  }
  if (top.has("entanglement")) {
    const Section s(top.at("entanglement"), "entanglement",
                    {"eta", "delta", "white_noise", "theta_s", "theta_i", "reference"});
    read_sagnac(s, c.entanglement.state);
    c.entanglement.theta_s = read_angles(s, "theta_s", c.entanglement.theta_s);
    c.entanglement.theta_i = read_angles(s, "theta_i", c.entanglement.theta_i);
    if (s.has("reference")) {
      read_sagnac(Section(s.at("reference"), s.child("reference"), {"eta", "delta", "white_noise"}),
                  c.entanglement.reference);
    }
  }
  if (top.has("tomography")) {
    const Section s(top.at("tomography"), "tomography", {"counts", "accidentals"});
    s.string("counts", c.tomography.counts);
    c.tomography.counts = resolve_path(c.tomography.counts, base_dir);
    s.non_negative("accidentals", c.tomography.accidentals);
  }
  if (top.has("spectrum")) {
    const Section s(top.at("spectrum"), "spectrum", {"path", "kind", "threshold"});
    s.string("path", c.spectrum.path);
    c.spectrum.path = resolve_path(c.spectrum.path, base_dir);
    if (s.has("kind")) {
      c.spectrum.kind = choose(s, "kind", spectral::SpectrumKind::Intensity,
                               {{"intensity", spectral::SpectrumKind::Intensity},
                                {"transmittance", spectral::SpectrumKind::Transmittance}});
    }
    s.non_negative("threshold", c.spectrum.threshold);
  }
  if (top.has("seed")) {
    require(root.at("seed").is_number_unsigned(), ErrorKind::Config, "'seed' must be a non-negative integer");
    c.seed = root.at("seed").get<std::uint64_t>();
  }
  if (top.has("output")) top.string("output", c.output);
  return c;
}

RunConfig load(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  return parse(text, path.parent_path());
}

double resolved_spacing(const RunConfig& cfg) {
  if (cfg.grid.spacing) return *cfg.grid.spacing;
  return cfg.channels.width * (1.0 + 2.0 * cfg.grid.margin_channels) /
         static_cast<double>(cfg.grid.points);
}

counting::Scenario scenario(const RunConfig& cfg) {
  counting::Scenario sc;
  sc.coherence = cfg.pump.coherence;
  sc.shape = cfg.pump.shape;
  sc.channel_midpoint = cfg.pump.center;
  sc.bandwidth = cfg.pump.bandwidth;
  sc.asymmetry = cfg.pump.asymmetry;
  sc.pair_detuning = cfg.channels.pair_detuning;
  sc.wg = cfg.waveguide;
  sc.disp = cfg.dispersion;
  sc.spacing = resolved_spacing(cfg);
  sc.margin = cfg.grid.margin_channels * cfg.channels.width;
  sc.channels.width = cfg.channels.width;
  sc.channels.all_pass = cfg.channels.all_pass;
  sc.channels.signal_labels = cfg.channels.signal;
  sc.channels.idler_labels = cfg.channels.idler;
  for (const auto& l : cfg.channels.signal) sc.channels.signal_centers.push_back(itu_channel(l));
  for (const auto& l : cfg.channels.idler) sc.channels.idler_centers.push_back(itu_channel(l));
  for (const auto& [label, path] : cfg.channels.spectra)
    sc.channels.measured[label] = spectral::load_measured_spectrum(path, spectral::SpectrumKind::Transmittance);
  sc.efficiency = cfg.efficiency;
  sc.noise = cfg.noise;
  sc.power = cfg.pump.power;
  sc.seed = cfg.seed;
  sc.fixed_brightness = cfg.car.brightness;
  return sc;
}

}  // namespace sfwm::config
