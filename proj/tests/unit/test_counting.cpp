#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "sfwm/counting.hpp"
#include "sfwm/error.hpp"
#include "sfwm/figures.hpp"
#include "sfwm/units.hpp"

using namespace sfwm;
using namespace sfwm::counting;

namespace {

template <class F>
void expect_error(F&& f, ErrorKind kind) {
  try {
    f();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == kind);
  }
}

NoiseModel noise(double a1, double n1, double a2, double n2, double window = 1.0) {
  return {{a1, n1}, {a2, n2}, window};
}

// Toy-unit scenario: unit spacing, channels 20 cells wide either side of 1000
// with edges on cell boundaries.
Scenario toy(Coherence coherence, double bandwidth) {
  Scenario sc;
  sc.coherence = coherence;
  sc.shape = spectral::PumpShape::Rectangular;
  sc.channel_midpoint = 1000.0;
  sc.bandwidth = bandwidth;
  sc.spacing = 1.0;
  sc.margin = 40.0;
  sc.channels = {{"s1", "s2"}, {950.5, 970.5}, {"i1", "i2"}, {1049.5, 1029.5}, 20.0};
  sc.wg.segments = 4;
  sc.disp.reference = 1000.0;
  sc.disp.beta2 = 1e-4;
  return sc;
}

}  // namespace

TEST_SUITE("counting") {
  TEST_CASE("singles polynomial") {
    CHECK(singles_rate(1.0, 1.0, {1.0, 1.0}) == 3.0);
    CHECK(singles_rate(0.0, 5.0, {2.0, 7.0}) == 7.0);
    CHECK(singles_rate(3.0, 2.0, {0.5, 10.0}) == doctest::Approx(29.5));
    expect_error([] { singles_rate(-1.0, 1.0, {}); }, ErrorKind::InvalidParameter);
  }

  TEST_CASE("CAR") {
    const Brightness unit{1.0, 1.0, 1.0};
    CHECK(car(1.0, unit, noise(1, 1, 1, 1)) == doctest::Approx(1.0 / 9.0));
    expect_error([&] { car(1.0, {1.0, 0.0, 0.0}, noise(0, 0, 0, 0)); }, ErrorKind::UndefinedCar);
    expect_error([&] { car(0.0, unit, noise(1, 1, 1, 1)); }, ErrorKind::InvalidParameter);

    const Brightness b{0.3, 2.0, 1.5};
    const auto silent = noise(0, 0, 0, 0, 0.8e-9);
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 100; ++k) {
      const double p = 1e-4 * std::pow(1e4, k / 99.0);
      const double c = car(p, b, silent);
      CHECK(c == doctest::Approx(0.3 / (0.8e-9 * 3.0 * p * p)));
      CHECK(c < previous);
      previous = c;
    }

    // car() is coincidences over accidentals built from the singles.
    const auto n = noise(0.2, 3.0, 0.1, 7.0, 2e-3);
    for (double p : {0.1, 1.0, 10.0}) {
      const double acc = singles_rate(p, b.signal, n.signal) * singles_rate(p, b.idler, n.idler) * n.window;
      CHECK(car(p, b, n) == b.coincidence * p * p / acc);
      const auto r = evaluate(p, b, n);
      CHECK(r.car == r.coincidences / r.accidentals);
    }
  }

  TEST_CASE("CAR peak") {
    const Brightness b{1.0, 1.0, 1.0};
    const auto peak = car_peak(b, noise(0, 1, 0, 1), 0.1, 10.0);
    CHECK(peak.power == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(car_peak_residual(peak.power, b, noise(0, 1, 0, 1)) < 1e-8);
    const auto scaled = car_peak(b, noise(0, 4, 0, 4), 0.1, 10.0);
    // Without linear noise the peak sits at sqrt(N): four times the background doubles it.
    CHECK(scaled.power == doctest::Approx(2.0 * peak.power).epsilon(1e-12));
    expect_error([&] { car_peak(b, noise(0, 0, 0, 0), 0.1, 10.0); }, ErrorKind::Bracket);
    expect_error([&] { car_peak(b, noise(0, 1, 0, 1), 2.0, 10.0); }, ErrorKind::Bracket);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
      const Brightness bb{u(rng), u(rng), u(rng)};
      const auto nn = noise(u(rng), u(rng), u(rng), u(rng), 1e-3);
      const auto pk = car_peak(bb, nn, 1e-6, 1e6);
      CHECK(car_peak_residual(pk.power, bb, nn) < 1e-8);
      CHECK(car(0.9 * pk.power, bb, nn) < pk.car);
      CHECK(car(1.1 * pk.power, bb, nn) < pk.car);

      CHECK(car_shift_delta(pk.power, 1.0, 1.0, bb, nn) == 0.0);
      CHECK(car_shift_delta(pk.power, 1.5, 2.0, bb, nn) > 0.0);
      const auto moved = car_peak(bb, scale_noise(nn, 1.5, 2.0), 1e-6, 1e6);
      CHECK(moved.power > pk.power);

      // A brighter source at equal noise peaks higher.
      const Brightness brighter{std::sqrt(2.0) * bb.coincidence, bb.signal, bb.idler};
      CHECK(car_peak(brighter, nn, 1e-6, 1e6).car > pk.car);
    }
  }

  TEST_CASE("Poisson counts") {
    CountingResult r;
    r.singles_s = 1e6;
    const auto c = simulate_counts(r, 1.0, 5);
    CHECK(c.singles_i == 0);
    CHECK(std::abs(static_cast<double>(c.singles_s) - 1e6) < 5e3);
    const auto again = simulate_counts(r, 1.0, 5);
    CHECK(again.singles_s == c.singles_s);
    expect_error([&] { simulate_counts(r, 0.0, 5); }, ErrorKind::InvalidParameter);
  }

  TEST_CASE("heralded g2") {
    CHECK(heralded_g2({100, 10, 10, 0}) == 0.0);
    CHECK(heralded_g2({100, 10, 10, 1}) == doctest::Approx(1.0));
    expect_error([] { heralded_g2({100, 0, 10, 0}); }, ErrorKind::UndefinedEstimator);

    const auto ideal = simulate_heralded(0.01, 0.0, 0.0, 1000000, 3);
    CHECK(heralded_g2(ideal) < 0.05);
    // Pure noise in both arms is uncorrelated: g2 near one.
    const auto noisy = simulate_heralded(0.0, 0.3, 0.3, 200000, 4);
    CHECK(heralded_g2(noisy) == doctest::Approx(1.0).epsilon(0.05));

    CountingResult rates;
    rates.singles_s = 1e5;
    rates.singles_i = 1e5;
    rates.coincidences = 1e4;
    CHECK(predicted_heralded_g2(rates, 1e-9) < 0.01);
    rates.singles_i = 1e8;
    CHECK(predicted_heralded_g2(rates, 1e-9) > predicted_heralded_g2({1e5, 1e5, 1e4, 0, 0}, 1e-9));
  }

  TEST_CASE("noise fit recovers the polynomial") {
    std::vector<SinglesSample> samples;
    for (double p : {0.5, 1.0, 2.0, 4.0}) samples.push_back({p, 3.0 * p * p + 2.0 * p + 7.0, 1.0 * p * p + 0.5});
    const auto [s, i] = fit_noise(samples);
    CHECK(s.brightness == doctest::Approx(3.0));
    CHECK(s.noise.linear == doctest::Approx(2.0));
    CHECK(s.noise.background == doctest::Approx(7.0));
    CHECK(i.brightness == doctest::Approx(1.0));
    CHECK(std::abs(i.noise.linear) < 1e-9);
    samples.resize(2);
    expect_error([&] { fit_noise(samples); }, ErrorKind::InvalidParameter);

    const auto path = std::filesystem::temp_directory_path() / "sfwm_singles_test.csv";
    {
      std::ofstream out(path);
      out << "power_W,singles_s,singles_i\n1,2,3\n2,x,4\n";
    }
    expect_error([&] { load_singles_table(path.string()); }, ErrorKind::Parse);
    {
      std::ofstream out(path);
      out << "power_W,singles_s,singles_i\n1,2,3\n2,5,4\n";
    }
    CHECK(load_singles_table(path.string()).size() == 2);
    std::filesystem::remove(path);
  }

  TEST_CASE("monochromatic pump collects every twin") {
    auto sc = toy(Coherence::Coherent, 1.0 / 8.0);
    const auto b = brightness(sc);
    CHECK(b.coincidence > 0.0);
    CHECK(b.signal == doctest::Approx(b.coincidence).epsilon(1e-12));
    CHECK(b.idler == doctest::Approx(b.coincidence).epsilon(1e-12));
  }

  TEST_CASE("coincidences never exceed singles") {
    for (auto coherence : {Coherence::Coherent, Coherence::Incoherent}) {
      for (double bw : {4.0, 15.0, 40.0}) {
        auto sc = toy(coherence, bw);
        sc.efficiency = {0.8, 0.5, 0.9, 0.7};
        const auto b = brightness(sc);
        CHECK(b.coincidence <= b.signal);
        CHECK(b.coincidence <= b.idler);
      }
    }
  }

  TEST_CASE("efficiencies scale the brightness") {
    auto sc = toy(Coherence::Incoherent, 15.0);
    const auto base = brightness(sc);
    sc.efficiency = {0.5, 0.8, 0.5, 0.25};
    const auto lossy = brightness(sc);
    CHECK(lossy.coincidence == doctest::Approx(base.coincidence * 0.25 * 0.2));
    CHECK(lossy.signal == doctest::Approx(base.signal * 0.25));
    CHECK(lossy.idler == doctest::Approx(base.idler * 0.2));
    sc.efficiency = {0.0, 1.0, 1.0, 1.0};
    expect_error([&] { brightness(sc); }, ErrorKind::InvalidParameter);
  }

  TEST_CASE("misaligned grids are rejected") {
    const spectral::FrequencyGrid gs(0.0, 1.0, 10), gi(100.0, 1.5, 10);
    const auto bs = ChannelBank::all_pass(gs, "s");
    const auto bi = ChannelBank::all_pass(gi, "i");
    biphoton::DiscretePump pump{50.0, 1.0, {{1.0, 0.0}}, false, {}};
    expect_error([&] { pipeline_counts(pump, {}, {}, bs, bi, {}); }, ErrorKind::InvalidParameter);
  }

  TEST_CASE("coincidences are quadratic in power") {
    const Brightness b{0.7, 2.0, 3.0};
    const NoiseModel silent{};
    for (double p : {1e-3, 0.25, 3.0}) {
      CHECK(evaluate(2.0 * p, b, silent).coincidences == 4.0 * evaluate(p, b, silent).coincidences);
    }
  }

  TEST_CASE("power sweep reproduces car pointwise") {
    auto sc = toy(Coherence::Incoherent, 15.0);
    sc.fixed_brightness = Brightness{0.5, 1.0, 1.0};
    sc.noise = noise(0.1, 2.0, 0.2, 3.0, 1e-3);
    const std::vector<double> powers{0.1, 1.0, 10.0};
    const auto rows = sweep(SweepVariable::Power, powers, sc);
    for (std::size_t k = 0; k < rows.size(); ++k) CHECK(rows[k].rates.car == car(powers[k], *sc.fixed_brightness, sc.noise));
    CHECK(sweep_csv(SweepVariable::Power, rows).rfind("power,b_cc", 0) == 0);
    expect_error([] { parse_sweep_variable("colour"); }, ErrorKind::Config);
    CHECK(parse_sweep_variable(to_string(SweepVariable::Asymmetry)) == SweepVariable::Asymmetry);
  }

  TEST_CASE("square incoherent pump: coincidences track singles in detuning") {
    const std::vector<double> detunings{hz_to_angular(400e9), hz_to_angular(1000e9), hz_to_angular(2000e9)};
    const auto curves = figures::detuning_curves(detunings, {hz_to_angular(100e9)}, hz_to_angular(10e9));
    const auto& cc = curves.coincidences[0];
    const auto& sg = curves.singles[0];
    for (std::size_t k = 0; k < cc.size(); ++k) {
      CHECK(std::abs(cc[k] / cc[0] - sg[k] / sg[0]) <= 0.01);
      if (k > 0) CHECK(cc[k] < cc[k - 1]);
    }
  }

  TEST_CASE("coincidences fall with pump bandwidth at fixed detuning") {
    const std::vector<double> widths{hz_to_angular(50e9), hz_to_angular(100e9), hz_to_angular(200e9),
                                     hz_to_angular(400e9)};
    const auto curve = figures::bandwidth_curve(widths, hz_to_angular(1400e9), hz_to_angular(10e9));
    const auto& cc = curve.coincidences[0];
    for (std::size_t k = 1; k < cc.size(); ++k) CHECK(cc[k] <= cc[k - 1]);
  }
}
