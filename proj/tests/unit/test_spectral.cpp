#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "sfwm/error.hpp"
#include "sfwm/spectral.hpp"
#include "sfwm/units.hpp"

using namespace sfwm;
using namespace sfwm::spectral;

namespace {

// Composite Simpson rule, n even.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

MeasuredSpectrum parse(const std::string& text, std::optional<SpectrumKind> kind = std::nullopt) {
  std::istringstream in(text);
  return parse_measured_spectrum(in, kind, "test.csv");
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("grid invariants") {
    const FrequencyGrid g(10.0, 0.5, 5);
    CHECK(g.last() == doctest::Approx(12.0));
    const auto pts = g.points();
    for (std::size_t k = 1; k < pts.size(); ++k) CHECK(pts[k] > pts[k - 1]);
    CHECK_THROWS_AS(FrequencyGrid(0.0, 0.0, 5), Error);
    CHECK_THROWS_AS(FrequencyGrid(0.0, 1.0, 1), Error);
    const auto c = FrequencyGrid::centered(100.0, 2.0, 4);
    CHECK(0.5 * (c.start() + c.last()) == doctest::Approx(100.0));
    CHECK(c.same_lattice(FrequencyGrid(c.start() + 6.0, 2.0, 3)));
    CHECK_FALSE(c.same_lattice(FrequencyGrid(c.start() + 1.0, 2.0, 3)));
  }

  TEST_CASE("cell overlap of a brick wall") {
    const FrequencyGrid g(0.0, 1.0, 10);
    const auto t = brick_wall(g, {2.0, 5.0});
    // cells [k-0.5, k+0.5]: k=2 and k=5 are half inside
    const std::vector<double> expected{0, 0, 0.5, 1, 1, 0.5, 0, 0, 0, 0};
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(t[k] == doctest::Approx(expected[k]));
    CHECK(std::accumulate(t.begin(), t.end(), 0.0) == doctest::Approx(3.0));
  }

  TEST_CASE("normalize_coherent coefficients") {
    CHECK(normalize_coherent({0.0, 1.0, PumpShape::Gaussian}).coefficient ==
          doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-14));
    CHECK(normalize_coherent({0.0, 1.0, PumpShape::Gaussian}).coefficient == doctest::Approx(0.7511).epsilon(1e-4));
    CHECK(normalize_coherent({0.0, 4.0, PumpShape::Gaussian}).coefficient == doctest::Approx(0.3755).epsilon(1e-4));
    CHECK(normalize_coherent({0.0, 9.0, PumpShape::Rectangular}).coefficient == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(normalize_coherent({0.0, 0.0, PumpShape::Gaussian}), Error);
    CHECK_THROWS_AS(normalize_coherent({0.0, -1.0, PumpShape::Rectangular}), Error);
  }

  TEST_CASE("normalized densities integrate to one") {
    for (double sigma : {0.3, 1.0, 4.0, 2.5e11}) {
      const auto p = normalize_coherent({7.0, sigma, PumpShape::Gaussian});
      const double integral = simpson([&](double w) { return std::pow(p.density(w), 2); },
                                      7.0 - 8.0 * sigma, 7.0 + 8.0 * sigma, 4000);
      CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    }
    const auto box = normalize_coherent({0.0, 2.0, PumpShape::Rectangular});
    CHECK(box.density(0.9) * box.density(0.9) * 2.0 == doctest::Approx(1.0));
    CHECK(box.density(1.1) == 0.0);
  }

  TEST_CASE("pump power") {
    CHECK(pump_power(CoherentPump{0.0, 1.0, PumpShape::Gaussian}) == doctest::Approx(2.0 * std::sqrt(M_PI)));
    CHECK(pump_power(CoherentPump{0.0, 1.0, PumpShape::Gaussian}) == doctest::Approx(3.5449).epsilon(1e-4));
    // Oracle: |integral alpha|^2 by quadrature of the normalized density.
    const auto g = normalize_coherent({0.0, 2.0, PumpShape::Gaussian});
    const double field = simpson([&](double w) { return g.density(w); }, -20.0, 20.0, 4000);
    CHECK(pump_power(g) == doctest::Approx(field * field).epsilon(1e-9));
    CHECK(pump_power(CoherentPump{0.0, 1.0, PumpShape::Gaussian}, {2.5}) == doctest::Approx(5.0 * std::sqrt(M_PI)));

    IncoherentPump inc{{1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}};
    CHECK(pump_power(inc) == 6.0);
    IncoherentPump zero{{1.0}, {0.0}, {0.0}, 1.0};
    CHECK(pump_power(zero) == 0.0);
    CHECK_THROWS_AS(pump_power(IncoherentPump{}), Error);
  }

  TEST_CASE("incoherent power is additive under concatenation") {
    // Dyadic intensities keep every partial sum exact.
    const IncoherentPump a{{0.0, 1.0, 2.0}, {0.5, 1.25, 3.0}, {0.0, 1.0, 2.0}};
    const IncoherentPump b{{3.0, 4.0}, {0.125, 8.0}, {3.0, 4.0}};
    IncoherentPump both = a;
    both.frequencies.insert(both.frequencies.end(), b.frequencies.begin(), b.frequencies.end());
    both.intensities.insert(both.intensities.end(), b.intensities.begin(), b.intensities.end());
    both.phases.insert(both.phases.end(), b.phases.begin(), b.phases.end());
    CHECK(pump_power(both) == pump_power(a) + pump_power(b));
  }

  TEST_CASE("incoherent components sample the envelope") {
    const auto p = make_incoherent_pump(PumpShape::Rectangular, 0.0, 10.0, 1.0, 9);
    CHECK(p.spacing() == doctest::Approx(1.0));
    CHECK(std::accumulate(p.intensities.begin(), p.intensities.end(), 0.0) == doctest::Approx(10.0));
    for (double ph : p.phases) {
      CHECK(ph >= 0.0);
      CHECK(ph < 2.0 * M_PI);
    }
    const auto g = make_incoherent_pump(PumpShape::Gaussian, 0.0, 2.0, 0.5, 9);
    for (std::size_t k = 0; k < g.frequencies.size(); ++k) {
      const double x = g.frequencies[k];
      CHECK(g.intensities[k] == doctest::Approx(std::exp(-x * x / 4.0)));
    }
  }

  TEST_CASE("draw_phases") {
    CHECK(draw_phases(0, 1).empty());
    CHECK(draw_phases(100, 42) == draw_phases(100, 42));
    CHECK(draw_phases(100, 42) != draw_phases(100, 43));
    const auto ph = draw_phases(100000, 7);
    const double mean = std::accumulate(ph.begin(), ph.end(), 0.0) / ph.size();
    const double sd = (2.0 * M_PI / std::sqrt(12.0)) / std::sqrt(1e5);
    CHECK(std::abs(mean - M_PI) < 3.0 * sd);
  }

  TEST_CASE("measured spectrum parsing") {
    const auto two = parse("1550.0,0.5\n1551.0,0.7\n");
    CHECK(two.wavelength_nm.size() == 2);
    CHECK(two.values[1] == 0.7);
    const auto commented = parse("# scan 3\nwavelength_nm,transmittance\n1551,0.2\n# mid\n1550,0.1\n");
    CHECK(commented.kind == SpectrumKind::Transmittance);
    CHECK(commented.wavelength_nm.front() == 1550.0);
    CHECK(commented.values.front() == 0.1);
    CHECK(parse("wavelength_nm,value\n1550,1\n1551,0.5\n", SpectrumKind::Transmittance).kind ==
          SpectrumKind::Transmittance);

    try {
      parse("");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("no samples") != std::string::npos);
    }
    try {
      parse("1550,1\n1551,abc\n");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(std::string(e.what()).find("test.csv:2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("1550,-1\n1551,1\n"), Error);
    CHECK_THROWS_AS(parse("1550,1\n1550,2\n"), Error);
  }

  TEST_CASE("resampling") {
    const auto flat = parse("1549,1\n1550,1\n1551,1\n");
    const double w_hi = wavelength_nm_to_angular(1549.0), w_lo = wavelength_nm_to_angular(1551.0);
    const FrequencyGrid g(w_lo, (w_hi - w_lo) / 9.0, 10);
    for (double v : resample_to_grid(flat, g, 0.1)) CHECK(v == doctest::Approx(1.0));

    const FrequencyGrid outside(w_lo - 1e9, 1e10, 5);
    CHECK_THROWS_AS(resample_to_grid(flat, outside), Error);

    // Triangle in frequency with a 5 % floor: the floor vanishes, the apex stays.
    const double w0 = wavelength_nm_to_angular(1550.0);
    const double half = 1e12;
    std::ostringstream csv;
    csv.precision(17);
    std::vector<double> omega;
    for (int k = 40; k >= -40; --k) omega.push_back(w0 + k * half / 20.0);
    const auto tri = [&](double w) { return std::max(0.05, 1.0 - std::abs(w - w0) / half); };
    for (double w : omega) csv << angular_to_wavelength_nm(w) << "," << tri(w) << "\n";
    const auto m = parse(csv.str());
    const FrequencyGrid fine(w0 - 1.5 * half, half / 40.0, 121);
    const auto v = resample_to_grid(m, fine, 0.1);
    // Hand interpolation of the thresholded samples (omega is descending here).
    const auto oracle = [&](double w) {
      const auto cut = [&](double x) { return tri(x) < 0.1 ? 0.0 : tri(x); };
      if (w <= omega.back()) return cut(omega.back());
      if (w >= omega.front()) return cut(omega.front());
      std::size_t k = 0;
      while (omega[k + 1] > w) ++k;
      const double t = (w - omega[k + 1]) / (omega[k] - omega[k + 1]);
      return cut(omega[k + 1]) + t * (cut(omega[k]) - cut(omega[k + 1]));
    };
    for (std::size_t k = 0; k < fine.size(); ++k) CHECK(v[k] == doctest::Approx(oracle(fine[k])).epsilon(1e-6));
    CHECK(v[0] == 0.0);
    CHECK(v[60] == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("resampling gridded data is idempotent") {
    const FrequencyGrid g(wavelength_nm_to_angular(1560.0), 2e9, 50);
    std::ostringstream csv;
    csv.precision(17);
    for (std::size_t k = g.size(); k-- > 0;) csv << angular_to_wavelength_nm(g[k]) << "," << std::sin(0.1 * k) + 2.0 << "\n";
    const auto v = resample_to_grid(parse(csv.str()), g, 0.0);
    // Bound set by the nm <-> rad/s round trip of the sample positions.
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(v[k] - (std::sin(0.1 * k) + 2.0)) <= 1e-10);
  }

  TEST_CASE("extend_boundaries") {
    const double d = 1.0;
    SUBCASE("symmetric bands are a fixed point") {
      const auto e = extend_boundaries({-8.0, -3.0}, {3.0, 8.0}, 0.0, d);
      CHECK(e.signal.lo == -8.0);
      CHECK(e.signal.hi == -3.0);
      CHECK(e.idler.lo == 3.0);
      CHECK(e.idler.hi == 8.0);
      CHECK(e.max_detuning == 8.0);
      CHECK(e.min_detuning == 3.0);
    }
    SUBCASE("wider signal pads the idler with zeros on the mirrored side") {
      // Signal reaches 2d further from the pump; the idler must gain 2d on its far side.
      const FrequencyGrid gi(3.0, d, 6);  // idler 3..8
      const std::vector<double> ti(6, 1.0);
      const auto e = extend_boundaries({-10.0, -3.0}, {3.0, 8.0}, 0.0, d);
      CHECK(e.idler.hi == 10.0);
      const auto padded = pad_to_band(gi, ti, e.idler);
      CHECK(padded.grid.size() == 8);
      CHECK(padded.values[6] == 0.0);
      CHECK(padded.values[7] == 0.0);
      CHECK(padded.values[5] == 1.0);
    }
    SUBCASE("rounding: maximum up, minimum down") {
      const auto e = extend_boundaries({-8.2, -3.5}, {3.5, 8.2}, 0.0, d);
      CHECK(e.min_detuning == 3.0);
      CHECK(e.max_detuning == 9.0);
    }
    SUBCASE("overlap with the pump is rejected") {
      CHECK_THROWS_AS(extend_boundaries({-3.0, 1.0}, {2.0, 5.0}, 0.0, d), Error);
    }
  }

  TEST_CASE("extend_boundaries output is symmetric (random bands)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.5, 20.0);
    for (int trial = 0; trial < 200; ++trial) {
      const double a = u(rng), b = a + u(rng), c = u(rng), e2 = c + u(rng);
      const double pump = 3.0;
      const auto e = extend_boundaries({pump - b, pump - a}, {pump + c, pump + e2}, pump, 0.25);
      CHECK(pump - e.signal.lo == doctest::Approx(e.idler.hi - pump));
      CHECK(pump - e.signal.hi == doctest::Approx(e.idler.lo - pump));
      CHECK(std::fmod(e.max_detuning / 0.25, 1.0) == doctest::Approx(0.0));
      CHECK(e.max_detuning >= std::max(b, e2));
      CHECK(e.min_detuning <= std::min(a, c));
    }
  }

  TEST_CASE("lattice_grid stays on the anchor lattice") {
    const auto g = lattice_grid({0.3, 5.2}, 0.5, 0.1);
    CHECK(g.start() == doctest::Approx(0.6));
    CHECK(g.last() == doctest::Approx(5.1));
    CHECK_THROWS_AS(lattice_grid({0.0, 0.1}, 0.5, 0.3), Error);
  }
}
