#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "app.hpp"
#include "doctest.h"

using namespace deev;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("deev_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall = R"({
  "state": {"m": 3, "sigma_x": 5, "sigma_y": 3, "x0": 2, "y0": 4},
  "grid": {"x": [-15, 19, 41], "y": [-11, 19, 37], "px": [-1, 1, 21], "py": [-1, 1, 23],
           "r": [-2, 2, 21], "s": [-2, 2, 21]}
})";

}  // namespace

TEST_CASE("invalid configurations exit with 2") {
  const fs::path dir = scratch_dir("invalid");
  const auto check = [&](const std::string& text) {
    const Run r = run_cli({"field", "--config", write_config(dir, text).string(), "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
  };
  check("{ not json");
  check(R"({"state": {"m": 1, "sigmax": 2}})");
  check(R"({"state": {"m": -1}})");
  check(R"({"state": {"m": 1.5}})");
  check(R"({"state": {"sigma_x": 0}})");
  check(R"({"state": {"sign": 2}})");
  check(R"({"state": {}, "grid": {"x": [1, 0, 10]}})");
  check(R"({"state": {}, "grid": {"x": [0, 1, 1]}})");
  check(R"({"state": {}, "quadrature": {"truncation_radius": 2}})");
  check(R"({"state": {"eta_x": 0.5, "eta_y": 0.5}, "coupler": {"type": "bs", "theta": 1}})");
  check(R"({"extra": 1})");
  CHECK(run_cli({"field", "--config", (dir / "missing.json").string()}).code == 2);
  CHECK(run_cli({"field"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"draw"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("field writes CSV and PGM deterministically") {
  const fs::path dir = scratch_dir("field");
  const fs::path cfg = write_config(dir, kSmall);
  REQUIRE(run_cli({"field", "--config", cfg.string(), "--out", (dir / "a").string(), "--threads", "1"}).code == 0);
  REQUIRE(run_cli({"field", "--config", cfg.string(), "--out", (dir / "b").string(), "--threads", "3"}).code == 0);
  for (const char* name : {"intensity.csv", "intensity.pgm", "intensity.pgm.map"}) {
    CHECK(fs::exists(dir / "a" / name));
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
  }
  const Field2D f = read_csv(dir / "a" / "intensity.csv");
  const auto [i, j] = f.nearest(2.0, 4.0);
  CHECK(f.at(i, j) == 0.0);
  for (const auto& e : fs::directory_iterator(dir / "a")) CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("wigner writes one pair per plane") {
  const fs::path dir = scratch_dir("wigner");
  const fs::path cfg = write_config(dir, kSmall);
  REQUIRE(run_cli({"wigner", "--config", cfg.string(), "--out", dir.string()}).code == 0);
  for (const char* plane : {"xy", "pxpy", "xpx", "ypy", "xpy", "ypx"}) {
    CHECK(fs::exists(dir / ("wigner_" + std::string(plane) + ".csv")));
    CHECK(fs::exists(dir / ("wigner_" + std::string(plane) + ".pgm")));
  }
  const fs::path single = dir / "single";
  REQUIRE(run_cli({"wigner", "--config", cfg.string(), "--out", single.string(), "--plane", "ypx", "--m", "4"}).code ==
          0);
  const Field2D f = read_csv(single / "wigner_ypx.csv");
  CHECK(f.spec.axis1.label == "y");
  CHECK(f.metadata.at("m") == "4");
  CHECK(run_cli({"wigner", "--config", cfg.string(), "--out", single.string(), "--plane", "xz"}).code == 2);
}

TEST_CASE("sit") {
  const fs::path dir = scratch_dir("sit");
  const fs::path cfg = write_config(dir, kSmall);
  const Run r = run_cli({"sit", "--config", cfg.string(), "--out", dir.string()});
  REQUIRE(r.code == 0);
  for (int m = 1; m <= 4; ++m) {
    CHECK(fs::exists(dir / ("sit_m" + std::to_string(m) + ".csv")));
    CHECK(fs::exists(dir / ("sit_m" + std::to_string(m) + ".pgm")));
  }
  const Field2D f = read_csv(dir / "sit_m1.csv");
  for (int i = 0; i < 21; ++i) {
    for (int j = 0; j < 21; ++j) {
      const double a = f.spec.axis1.node(i), b = f.spec.axis2.node(j);
      if (a == 0.0 && b == 0.0) continue;
      CHECK(std::abs(f.at(i, j) - 2 * a * b / (a * a + b * b)) <= 1e-12);
    }
  }
  CHECK(slurp(dir / "sit_m1.pgm.map").find("clamp=1\n") != std::string::npos);
  CHECK(run_cli({"sit", "--config", cfg.string(), "--out", dir.string(), "--m", "0"}).code == 2);
  CHECK(run_cli({"sit", "--config", cfg.string(), "--out", dir.string(), "--clamp", "-1"}).code == 2);
  CHECK(run_cli({"sit", "--config", cfg.string(), "--out", dir.string(), "--clamp", "abc"}).code == 2);
  CHECK(run_cli({"sit", "--config", cfg.string(), "--out", (dir / "c").string(), "--m", "2", "--clamp", "3"}).code ==
        0);
  CHECK(slurp(dir / "c" / "sit_m2.pgm.map").find("clamp=3\n") != std::string::npos);
}

TEST_CASE("coupler") {
  const fs::path dir = scratch_dir("coupler");
  Run r = run_cli({"coupler", "--config",
                   write_config(dir, R"({"coupler": {"type": "dcdc", "g": 1, "delta": 0, "t": 0.78539816339744831}})")
                       .string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("a1=0.70710678118654") != std::string::npos);
  CHECK(r.out.find("a2=0,0.70710678118654") != std::string::npos);

  r = run_cli({"coupler", "--config",
               write_config(dir, R"({"coupler": {"type": "bs", "theta": 0.78539816339744831}})").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("eta_x=0.70710678118654") != std::string::npos);

  r = run_cli({"coupler", "--config",
               write_config(dir, R"({"coupler": {"type": "dcdc", "g": 1, "delta": 0, "ratio": 1}})").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("t=0.78539816339744") != std::string::npos);

  r = run_cli({"coupler", "--config",
               write_config(dir, R"({"coupler": {"type": "dcdc", "g": 3, "delta": 4, "ratio": 1}})").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("1.33") != std::string::npos);

  CHECK(run_cli({"coupler", "--config", write_config(dir, R"({"state": {}})").string()}).code == 2);
}

TEST_CASE("verify writes a report and exits per the verdict") {
  const fs::path dir = scratch_dir("verify");
  const fs::path cfg = write_config(dir, R"({
    "state": {"m": 0, "sigma_x": 1, "sigma_y": 1},
    "grid": {"x": [-5, 5, 41], "y": [-5, 5, 41], "px": [-3, 3, 41]},
    "verify": {"random_points": 2, "marginal_points": 1, "seed": 3}
  })");
  const Run r = run_cli({"verify", "--config", cfg.string(), "--out", dir.string()});
  const fs::path report = dir / "verify_report.txt";
  REQUIRE(fs::exists(report));
  const std::string text = slurp(report);
  CHECK(text.find("suite normalization: pass") != std::string::npos);
  CHECK(text.find("suite marginal: pass") != std::string::npos);
  CHECK(text.find("suite symmetry: pass") != std::string::npos);
  CHECK(text.find("suite stability: pass") != std::string::npos);
  // The printed closed form is shape-mismatched against the transform, so
  // verify exits 1 and names the report.
  CHECK(text.substr(text.rfind("verdict=")) == "verdict=shape-mismatch\n");
  CHECK(r.code == 1);
  CHECK(r.err.find(report.string()) != std::string::npos);
}
