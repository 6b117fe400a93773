// Acceptance run: one PASS/FAIL line per criterion. Exits non-zero when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "app.hpp"
#include "deev/coupling.hpp"
#include "deev/oracle.hpp"
#include "deev/state.hpp"
#include "deev/wigner.hpp"
#include "exact_sit.hpp"

using namespace deev;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

int failures = 0;

void verdict_line(int n, bool pass, const std::string& what, const std::string& measured) {
  std::printf("criterion %d: %s  %s  [%s]\n", n, pass ? "PASS" : "FAIL", what.c_str(), measured.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* pattern, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::vector<std::string>& args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

bool c1_normalization() {
  double worst = 0.0;
  double slowest = 0.0;
  for (int m = 0; m <= 4; ++m) {
    for (auto [sx, sy] : {std::pair{1.0, 1.0}, {5.0, 3.0}, {2.0, 0.7}}) {
      const auto t0 = std::chrono::steady_clock::now();
      const DeevState s(DeevParams::tied(m, sx, sy));
      worst = std::max(worst, std::abs(lattice_norm(s) - 1.0));
      slowest = std::max(slowest, seconds_since(t0));
    }
  }
  const bool pass = worst <= 1e-8 && slowest <= 5.0;
  verdict_line(1, pass, "unit norm, m=0..4 x {(1,1),(5,3),(2,0.7)}, tol 1e-8",
               "max |norm-1| = " + fmt("%.2e", worst) + ", slowest case " + fmt("%.3f s", slowest));
  return pass;
}

void c2_circular() {
  const DeevState vac(DeevParams::tied(0, 1.0, 1.0));
  const double centre = oracle_wigner(vac, {}, {}).value;
  const bool anchor = std::abs(centre - 1.0 / (pi * pi)) <= 1e-8;

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  std::string per_m;
  for (int m = 0; m <= 3; ++m) {
    const DeevState s(DeevParams::tied(m, 1.0, 1.0));
    const DiscrepancyReport rep = build_discrepancy_report(s, default_probes(s.params()), {});
    const double k = rep.calibrated_constant;
    double dev = 0.0;
    int used = 0;
    while (used < 200) {
      const PhasePoint pt{u(rng), u(rng), u(rng), u(rng)};
      const double w = oracle_wigner(s, pt, {}).value;
      if (std::abs(w) <= 1e-10) continue;
      ++used;
      dev = std::max(dev, std::abs(k * wigner_shape(s.params(), pt) - w) / std::abs(w));
    }
    worst = std::max(worst, dev);
    per_m += " m" + std::to_string(m) + "=" + fmt("%.2e", dev);
  }
  const bool pass = anchor && worst <= 1e-6;
  verdict_line(2, pass, "circular limit: calibrated closed form vs oracle at 200 points, tol 1e-6; vacuum centre 1/pi^2",
               "anchor " + std::string(anchor ? "ok" : "off") + " (|W-1/pi^2| = " +
                   fmt("%.2e", std::abs(centre - 1.0 / (pi * pi))) + "), max rel dev" + per_m);
}

struct Outcome {
  bool pass;
  std::string measured;
};

Outcome c4_marginals() {
  const DeevState s(DeevParams::tied(3, 5.0, 3.0));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ux(-10.0, 10.0);
  std::uniform_real_distribution<double> uy(-6.0, 6.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    worst = std::max(worst, std::abs(oracle_marginal_xy(s, ux(rng), uy(rng), {}).difference()));
  }
  return {worst <= 1e-5, "max |difference| = " + fmt("%.2e", worst)};
}

void c3_adjudication(bool c1, bool c4, const fs::path& work) {
  bool produced = true, stable = true;
  std::string verdicts;
  for (int m = 1; m <= 3; ++m) {
    const fs::path dir = work / ("verify_m" + std::to_string(m));
    const fs::path cfg = write_config(
        work, "verify_m" + std::to_string(m) + ".json",
        R"({"state": {"m": )" + std::to_string(m) +
            R"(, "sigma_x": 5, "sigma_y": 3}, "verify": {"random_points": 8, "marginal_points": 1, "seed": 7}})");
    const int code = cli({"verify", "--config", cfg.string(), "--out", dir.string()});
    const fs::path report = dir / "verify_report.txt";
    if (!fs::exists(report)) {
      produced = false;
      continue;
    }
    const std::string text = slurp(report);
    stable = stable && text.find("suite stability: pass") != std::string::npos;
    const auto v = text.rfind("verdict=");
    verdicts += " m" + std::to_string(m) + "=" + text.substr(v + 8, text.size() - v - 9) + "(exit " +
                std::to_string(code) + ")";
  }
  verdict_line(3, produced && stable && c1 && c4,
               "elliptic (5,3), m=1..3: report produced, stable under halved tolerances, oracle passes 1 and 4",
               "verdicts" + verdicts + (stable ? ", stable" : ", UNSTABLE"));
}

void c5_intensity() {
  const DeevParams p = DeevParams::tied(3, 5.0, 3.0, {2.0, 4.0});
  const DeevState s(p);
  const GridSpec g{{"x", -15.0, 19.0, 201}, {"y", -11.0, 19.0, 201}};
  const Field2D f = intensity_field(s, g);
  std::size_t argmin = 0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    if (f.values[k] < f.values[argmin]) argmin = k;
  }
  const auto [ci, cj] = f.nearest(2.0, 4.0);
  const bool min_ok = argmin == static_cast<std::size_t>(ci) * g.axis2.count + cj && f.values[argmin] <= 1e-20;

  // Radius of the brightest node along the row and column through the core.
  double rx = 0.0, ry = 0.0, best = -1.0;
  for (int i = 0; i < g.axis1.count; ++i) {
    if (f.at(i, cj) > best) best = f.at(i, cj), rx = std::abs(g.axis1.node(i) - 2.0);
  }
  best = -1.0;
  for (int j = 0; j < g.axis2.count; ++j) {
    if (f.at(ci, j) > best) best = f.at(ci, j), ry = std::abs(g.axis2.node(j) - 4.0);
  }
  const bool ring_ok = rx > ry;

  const DeevState swapped(p.swapped_axes());
  const GridSpec gt{{"x", -11.0, 19.0, 201}, {"y", -15.0, 19.0, 201}};
  const Field2D t = intensity_field(swapped, gt);
  double peak = 0.0, dev = 0.0;
  for (double v : f.values) peak = std::max(peak, v);
  for (int i = 0; i < 201; ++i)
    for (int j = 0; j < 201; ++j) dev = std::max(dev, std::abs(f.at(i, j) - t.at(j, i)));
  const bool swap_ok = dev / peak <= 1e-10;
  verdict_line(5, min_ok && ring_ok && swap_ok,
               "intensity (5,3), core at (2,4), ring major axis along x, sigma swap = transpose within 1e-10",
               "min " + fmt("%.1e", f.values[argmin]) + (min_ok ? " at core node" : " NOT at core node") +
                   ", ring radii x=" + fmt("%.2f", rx) + " y=" + fmt("%.2f", ry) + ", transpose dev " +
                   fmt("%.1e", dev / peak));
}

void c6_minima() {
  auto grid = [](SlicePlane plane) {
    const auto [a1, a2] = plane_axes(plane);
    auto axis = [](std::string_view l) {
      return Axis{std::string(l), l[0] == 'p' ? -1.0 : -20.0, l[0] == 'p' ? 1.0 : 20.0, 301};
    };
    return GridSpec{axis(a1), axis(a2)};
  };
  const DeevParams p3 = DeevParams::tied(3, 5.0, 3.0);
  const DeevParams p4 = DeevParams::tied(4, 5.0, 3.0);
  const int xpx3 = count_strict_minima(wigner_slice(p3, SlicePlane::XPX, grid(SlicePlane::XPX)));
  const int ypx3 = count_strict_minima(wigner_slice(p3, SlicePlane::YPX, grid(SlicePlane::YPX)));
  const int xpx4 = count_strict_minima(wigner_slice(p4, SlicePlane::XPX, grid(SlicePlane::XPX)));
  const int ypx4 = count_strict_minima(wigner_slice(p4, SlicePlane::YPX, grid(SlicePlane::YPX)));
  verdict_line(6, xpx3 == 3 && ypx3 == 3 && xpx4 == 4 && ypx4 == 4,
               "strict minima on 301x301 XPX/YPX slices: 3 for m=3, 4 for m=4",
               "m3 xpx=" + std::to_string(xpx3) + " ypx=" + std::to_string(ypx3) + ", m4 xpx=" +
                   std::to_string(xpx4) + " ypx=" + std::to_string(ypx4));
}

void c7_sit() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> w(0.2, 8.0);
  double m1 = 0.0;
  bool mirror = true;
  for (int i = 0; i < 10000; ++i) {
    const double sx = w(rng), sy = w(rng), r = u(rng), s = u(rng);
    m1 = std::max(m1, std::abs(sit(1, sx, sy, r, s, SitForm::Sum) - 2 * r * s / (r * r + s * s)));
    for (int m = 1; m <= 4; ++m) {
      mirror = mirror && sit(m, sx, sy, r, s, SitForm::Difference) == sit(m, sx, sy, r, -s, SitForm::Sum);
    }
  }
  double exact = 0.0;
  const GridSpec g{{"r", -2.0, 2.0, 201}, {"s", -2.0, 2.0, 201}};
  std::uniform_int_distribution<int> node(0, 200);
  for (int m = 2; m <= 4; ++m) {
    const Field2D f = sit_field(m, 5.0, 3.0, g, SitForm::Sum);
    for (int k = 0; k < 100; ++k) {
      const int i = node(rng), j = node(rng);
      const double want = deev::testing::exact_sit(m, 5.0, 3.0, g.axis1.node(i), g.axis2.node(j), true);
      if (std::isnan(want) && std::isnan(f.at(i, j))) continue;
      exact = std::max(exact, std::abs(f.at(i, j) - want) / std::max(1.0, std::abs(want)));
    }
  }
  verdict_line(7, m1 <= 1e-12 && mirror && exact <= 1e-10,
               "SIT: m=1 closed form (1e-12, 1e4 points), difference = sum with s->-s, m=2..4 exact rationals (1e-10)",
               "m1 dev " + fmt("%.1e", m1) + ", mirror " + (mirror ? "exact" : "BROKEN") + ", exact dev " +
                   fmt("%.1e", exact));
}

void c8_coupler() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> angle(-50.0, 50.0);
  std::uniform_real_distribution<double> pos(1e-3, 20.0);
  std::uniform_real_distribution<double> det(-20.0, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 500000; ++i) {
    const ModeCoupler b = bs_coupler(angle(rng), angle(rng));
    worst = std::max(worst, std::abs(std::norm(b.a1()) + std::norm(b.a2()) - 1.0));
    const ModeCoupler d = dcdc_coupler({pos(rng), det(rng), pos(rng)});
    worst = std::max(worst, std::abs(std::norm(d.a1()) + std::norm(d.a2()) - 1.0));
  }
  const double t = dcdc_time_for_ratio(1.0, 1.0, 0.0);
  verdict_line(8, worst <= 1e-12 && std::abs(t - pi / 4) <= 1e-10,
               "|A1|^2+|A2|^2 = 1 over 1e6 random BS/DCDC parameters (1e-12); time for ratio 1 at g=1, delta=0 = pi/4",
               "max unitarity dev " + fmt("%.1e", worst) + ", t - pi/4 = " + fmt("%.1e", t - pi / 4));
}

void c9_determinism(const fs::path& work) {
  const fs::path cfg = write_config(work, "det.json", R"({
    "state": {"m": 3, "sigma_x": 5, "sigma_y": 3, "x0": 2, "y0": 4},
    "grid": {"x": [-15, 19, 201], "y": [-11, 19, 201]}
  })");
  const unsigned n = std::max(4u, std::thread::hardware_concurrency());
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"run1", "1"}, {"run2", "1"}, {"run3", std::to_string(n)}};
  bool ok = true;
  for (const auto& [name, threads] : runs) {
    for (const char* cmd : {"field", "wigner", "sit"}) {
      ok = ok && cli({cmd, "--config", cfg.string(), "--out", (work / name).string(), "--threads", threads}) == 0;
    }
  }
  int files = 0;
  for (const auto& e : fs::directory_iterator(work / "run1")) {
    const std::string bytes = slurp(e.path());
    const auto leaf = e.path().filename();
    ok = ok && bytes == slurp(work / "run2" / leaf) && bytes == slurp(work / "run3" / leaf);
    ++files;
  }
  verdict_line(9, ok && files == 33,
               "field/wigner/sit outputs byte-identical across two runs and --threads 1 vs " + std::to_string(n),
               std::to_string(files) + " files compared");
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "deev_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const bool c1 = c1_normalization();
  c2_circular();
  const Outcome c4 = c4_marginals();
  c3_adjudication(c1, c4.pass, work);
  verdict_line(4, c4.pass, "momentum marginal of the oracle = |psi|^2 at 50 points (m=3, sigma 5,3), tol 1e-5",
               c4.measured);
  c5_intensity();
  c6_minima();
  c7_sit();
  c8_coupler();
  c9_determinism(work);

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
