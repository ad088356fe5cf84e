#include <doctest.h>

#include "sfwm/config.hpp"
#include "sfwm/error.hpp"
#include "sfwm/units.hpp"
#include "temp_dir.hpp"

using namespace sfwm;
using namespace sfwm::config;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  FAIL("expected a configuration error");
  return {};
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults") {
    const auto c = defaults();
    CHECK(c.pump.center == doctest::Approx(itu_channel("C34")));
    CHECK(c.pump.bandwidth == doctest::Approx(hz_to_angular(200e9)));
    CHECK(c.channels.signal == std::vector<std::string>{"C20"});
    CHECK(c.channels.idler == std::vector<std::string>{"C48"});
    CHECK(c.dispersion.reference == c.pump.center);
    CHECK(c.noise.window == doctest::Approx(0.8e-9));
    const auto empty = parse("{}");
    CHECK(empty.pump.center == c.pump.center);
    CHECK(empty.grid.points == c.grid.points);
  }

  TEST_CASE("values and units") {
    const auto c = parse(R"({
      "pump": {"coherence": "coherent", "shape": "gaussian", "center": "C30", "bandwidth": "50 GHz", "power": 0.002},
      "waveguide": {"length": 0.02, "gamma": 150, "segments": 32, "dispersion": {"beta2": -2e-24}},
      "grid": {"points": 64, "margin_channels": 0.5},
      "channels": {"signal": ["C21", "C22"], "idler": ["C47", "C46"], "width": "100 GHz"},
      "noise": {"signal": {"linear": 1e5, "background": 300}, "window": 1e-9},
      "sweep": {"variable": "power", "values": {"start": 1e-4, "stop": 1e-2, "count": 3, "log": true}},
      "entanglement": {"eta": 0.9, "white_noise": 0.05, "theta_s": [0, 45, 90, 135]},
      "seed": 42
    })");
    CHECK(c.pump.coherence == counting::Coherence::Coherent);
    CHECK(c.pump.shape == spectral::PumpShape::Gaussian);
    CHECK(c.pump.center == doctest::Approx(itu_channel("C30")));
    CHECK(c.pump.bandwidth == doctest::Approx(hz_to_angular(50e9)));
    CHECK(c.waveguide.segments == 32);
    CHECK(c.dispersion.beta2 == -2e-24);
    // The dispersion reference follows the pump unless given.
    CHECK(c.dispersion.reference == c.pump.center);
    CHECK(c.channels.signal.size() == 2);
    CHECK(c.noise.signal.linear == 1e5);
    CHECK(c.noise.idler.background == 0.0);
    REQUIRE(c.sweep.values.size() == 3);
    CHECK(c.sweep.values[1] == doctest::Approx(1e-3));
    CHECK(c.entanglement.theta_s[1] == doctest::Approx(kPi / 4));
    CHECK(c.seed == 42);
    CHECK(resolved_spacing(c) == doctest::Approx(hz_to_angular(100e9) * 2.0 / 64.0));

    const auto sc = scenario(c);
    CHECK(sc.coherence == counting::Coherence::Coherent);
    CHECK(sc.channel_midpoint == c.pump.center);
    CHECK(sc.channels.signal_centers[1] == doctest::Approx(itu_channel("C22")));
    CHECK(sc.margin == doctest::Approx(0.5 * hz_to_angular(100e9)));
    CHECK(sc.power == 0.002);
  }

  TEST_CASE("unknown keys are named") {
    CHECK(config_error(R"({"pump": {"bandwdth": 1}})").find("pump.bandwdth") != std::string::npos);
    CHECK(config_error(R"({"waveguide": {"dispersion": {"beta22": 1}}})").find("waveguide.dispersion.beta22") !=
          std::string::npos);
    CHECK(config_error(R"({"colour": 1})").find("colour") != std::string::npos);
  }

  TEST_CASE("invalid values") {
    config_error(R"({"waveguide": {"length": -1}})");
    config_error(R"({"waveguide": {"segments": 0}})");
    config_error(R"({"pump": {"bandwidth": 0}})");
    config_error(R"({"pump": {"shape": "triangle"}})");
    config_error(R"({"pump": {"power": "lots"}})");
    config_error(R"({"entanglement": {"white_noise": 2}})");
    config_error(R"({"jsa": {"mode": "guess"}})");
    config_error(R"({"sweep": {"values": {"start": 1}}})");
    config_error("[1, 2]");
    try {
      parse("{not json");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK((e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::Config));
    }
  }

  TEST_CASE("paths resolve against the config file") {
    TempDir dir;
    const auto path = dir.write("run.json", R"({"jsa": {"input": "jsa.json"}, "tomography": {"counts": "t.csv"}})");
    const auto c = load(path);
    CHECK(std::filesystem::path(c.jsa.input) == dir.path() / "jsa.json");
    CHECK(std::filesystem::path(c.tomography.counts) == dir.path() / "t.csv");
  }

  TEST_CASE("all-pass channels") {
    const auto c = parse(R"({"channels": {"all_pass": true}})");
    CHECK(scenario(c).channels.all_pass);
  }

  TEST_CASE("shipped example configs load") {
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(SFWM_CONFIG_DIR)) {
      if (entry.path().extension() != ".json") continue;
      CAPTURE(entry.path().string());
      CHECK_NOTHROW(load(entry.path()));
      ++seen;
    }
    CHECK(seen >= 4);
  }
}
