#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "sfwm/cli.hpp"
#include "temp_dir.hpp"

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "sfwm-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = sfwm::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<double> column(const std::string& csv, std::size_t index) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<double> out;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    for (std::size_t k = 0; k <= index; ++k) std::getline(row, cell, ',');
    out.push_back(std::stod(cell));
  }
  return out;
}

// Small incoherent configuration that builds in milliseconds.
const char* kSmall = R"({
  "pump": {"bandwidth": "100 GHz"},
  "grid": {"points": 32},
  "waveguide": {"segments": 4},
  "jsa": {"ensembles": 20}
})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 1") {
    CHECK(run({}).code == 1);
    CHECK(run({"bogus"}).code == 1);
    CHECK(run({"purity", "--config", "/nonexistent/run.json"}).code == 1);
    CHECK(run({"ingest", "--kind", "colour"}).code == 1);
    CHECK(run({"--help"}).code == 0);
  }

  TEST_CASE("misspelled keys name the offending key") {
    TempDir dir;
    const auto cfg = dir.write("bad.json", R"({"pump": {"bandwdth": "200 GHz"}})");
    const auto r = run({"purity", "--config", cfg.string(), "--out", dir.path().string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("pump.bandwdth") != std::string::npos);
    CHECK(r.err.rfind("error: ", 0) == 0);
  }

  TEST_CASE("numerical failures exit with 2") {
    TempDir dir;
    dir.write("zero.json", R"({"grid_s": {"start": 0, "d": 1, "M": 2}, "grid_i": {"start": 0, "d": 1, "M": 2},
                               "kind": "amplitude", "values": [[0,0],[0,0],[0,0],[0,0]]})");
    const auto cfg = dir.write("run.json", R"({"jsa": {"input": "zero.json"}})");
    const auto r = run({"purity", "--config", cfg.string(), "--out", dir.path().string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("identically zero") != std::string::npos);
  }

  TEST_CASE("purity of a separable spectrum is one") {
    TempDir dir;
    // Outer product of (1, 2) and (3, -1, 0.5) stored as amplitudes.
    dir.write("rank1.json", R"({"grid_s": {"start": 0, "d": 1, "M": 2}, "grid_i": {"start": 5, "d": 1, "M": 3},
                                "kind": "amplitude",
                                "values": [[3,0],[-1,0],[0.5,0],[6,0],[-2,0],[1,0]]})");
    const auto cfg = dir.write("run.json", R"({"jsa": {"input": "rank1.json"}})");
    const auto r = run({"purity", "--config", cfg.string(), "--out", dir.path().string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("purity 1.000000") != std::string::npos);
    CHECK(dir.read("schmidt.csv").rfind("k,lambda", 0) == 0);
  }

  TEST_CASE("noise-free CAR falls with power") {
    TempDir dir;
    const auto cfg = dir.write("run.json", R"({
      "car": {"brightness": {"coincidence": 1e9, "signal": 4e9, "idler": 4e9}, "points": 100},
      "noise": {"signal": {"linear": 1e5, "background": 500}, "idler": {"linear": 1e5, "background": 500}}
    })");
    const auto r = run({"car", "--config", cfg.string(), "--out", dir.path().string(), "--no-noise"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("no CAR maximum") != std::string::npos);
    const auto car = column(dir.read("car.csv"), 5);
    REQUIRE(car.size() == 100);
    for (std::size_t k = 1; k < car.size(); ++k) CHECK(car[k] < car[k - 1]);

    const auto noisy = run({"car", "--config", cfg.string(), "--out", dir.path().string()});
    CHECK(noisy.code == 0);
    CHECK(noisy.out.find("peak power_w") != std::string::npos);
  }

  TEST_CASE("identical seeds give identical files") {
    TempDir a, b, c;
    const auto cfg = a.write("run.json", R"({
      "pump": {"bandwidth": "100 GHz"}, "grid": {"points": 24}, "waveguide": {"segments": 4},
      "jsa": {"mode": "monte_carlo", "ensembles": 20}})");
    REQUIRE(run({"jsa", "--config", cfg.string(), "--out", a.path().string(), "--seed", "7"}).code == 0);
    REQUIRE(run({"jsa", "--config", cfg.string(), "--out", b.path().string(), "--seed", "7"}).code == 0);
    REQUIRE(run({"jsa", "--config", cfg.string(), "--out", c.path().string(), "--seed", "8"}).code == 0);
    CHECK(a.read("jsa.json") == b.read("jsa.json"));
    CHECK(a.read("jsa.json") != c.read("jsa.json"));
  }

  TEST_CASE("subcommands produce their artifacts") {
    TempDir dir;
    const auto cfg = dir.write("run.json", kSmall);
    const auto out = dir.path().string();
    CHECK(run({"jsa", "--config", cfg.string(), "--out", out}).code == 0);
    CHECK(dir.read("jsa.json").find("\"kind\":\"amplitude\"") != std::string::npos);
    CHECK(run({"purity", "--config", cfg.string(), "--out", out}).code == 0);
    CHECK(run({"jsi-channels", "--config", cfg.string(), "--out", out}).code == 0);
    CHECK(dir.read("channels.csv").find("C48") != std::string::npos);
    CHECK(run({"sweep", "--config", cfg.string(), "--out", out}).code == 0);
    CHECK(dir.read("sweep.csv").rfind("power,", 0) == 0);

    const auto chsh = run({"chsh", "--config", cfg.string(), "--out", out});
    CHECK(chsh.code == 0);
    CHECK(chsh.out.find("S 2.82842712") != std::string::npos);
    const auto fid = run({"fidelity", "--config", cfg.string(), "--out", out});
    CHECK(fid.out.find("fidelity 1") != std::string::npos);
  }

  TEST_CASE("tomography and ingest read their inputs") {
    TempDir dir;
    std::string counts = "setting_s,setting_i,counts\n";
    // Ideal Phi+ probabilities for {H,V,D,R}^2 scaled to 1000.
    const char* labels = "HVDR";
    const double table[4][4] = {{500, 0, 250, 250}, {0, 500, 250, 250}, {250, 250, 500, 250}, {250, 250, 250, 0}};
    for (int s = 0; s < 4; ++s)
      for (int i = 0; i < 4; ++i)
        counts += std::string(1, labels[s]) + "," + labels[i] + "," + std::to_string(table[s][i]) + "\n";
    dir.write("tomo.csv", counts);
    dir.write("filter.csv", "wavelength_nm,transmittance\n1549.0,0.1\n1550.0,0.9\n1551.0,0.2\n");
    const auto cfg = dir.write("run.json", R"({"tomography": {"counts": "tomo.csv"},
                                               "spectrum": {"path": "filter.csv"}})");
    const auto t = run({"tomo", "--config", cfg.string(), "--out", dir.path().string()});
    CHECK(t.code == 0);
    CHECK(t.out.find("fidelity 1") != std::string::npos);
    CHECK(dir.read("tomo_state.json").size() > 10);
    const auto g = run({"ingest", "--config", cfg.string(), "--out", dir.path().string(), "--kind", "transmittance"});
    CHECK(g.code == 0);
    CHECK(dir.read("ingested.csv").rfind("omega_rad_s,frequency_thz,value", 0) == 0);
  }
}
