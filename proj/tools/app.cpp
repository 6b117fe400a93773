#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "deev/oracle.hpp"
#include "deev/report.hpp"

namespace deev::cli {

namespace {

constexpr double kNormTolerance = 1e-8;
constexpr double kMarginalTolerance = 1e-5;
constexpr double kTransposeTolerance = 1e-10;
constexpr double kStabilityTolerance = 1e-6;

DeevParams with_order(const DeevParams& p, std::optional<int> m) {
  if (!m || *m == p.m()) return p;
  if (*m < 0) throw ConfigError("--m must be non-negative for this command");
  return DeevParams::general(*m, p.eta_x(), p.eta_y(), p.sign(), p.sigma_x(), p.sigma_y(), p.displacement());
}

void emit(const Field2D& f, const std::filesystem::path& base, std::optional<double> clamp, std::ostream& out) {
  auto csv = base;
  auto pgm = base;
  csv += ".csv";
  pgm += ".pgm";
  write_csv(f, csv);
  write_pgm(f, pgm, clamp);
  out << "wrote " << csv.string() << "\n" << "wrote " << pgm.string() << "\n";
}

/// Grid with the two axes exchanged in role: the x axis takes the y range and
/// the other way round.
GridSpec transposed(const GridSpec& g) {
  return {{g.axis1.label, g.axis2.min, g.axis2.max, g.axis2.count},
          {g.axis2.label, g.axis1.min, g.axis1.max, g.axis1.count}};
}

double transpose_deviation(const Field2D& a, const Field2D& b) {
  double peak = 0.0;
  for (double v : a.values) peak = std::max(peak, std::abs(v));
  double worst = 0.0;
  for (int i = 0; i < a.spec.axis1.count; ++i) {
    for (int j = 0; j < a.spec.axis2.count; ++j) {
      worst = std::max(worst, std::abs(a.at(i, j) - b.at(j, i)));
    }
  }
  return peak > 0.0 ? worst / peak : worst;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

struct SuiteLog {
  std::vector<std::string> failed;
  std::vector<std::string>& notes;

  void record(const std::string& name, bool pass, const std::string& detail) {
    notes.push_back("suite " + name + ": " + (pass ? "pass" : "FAIL") + " (" + detail + ")");
    if (!pass) failed.push_back(name);
  }
};

std::vector<PhasePoint> random_probes(const DeevParams& p, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<PhasePoint> pts;
  for (int i = 0; i < n; ++i) {
    const double ax = u(rng), ay = u(rng), bx = u(rng), by = u(rng);
    pts.push_back({p.x0() + ax * p.sigma_x(), p.y0() + ay * p.sigma_y(), p.px0() + bx / p.sigma_x(),
                   p.py0() + by / p.sigma_y()});
  }
  return pts;
}

std::filesystem::path prepare_out(const Options& opts) {
  std::error_code ec;
  std::filesystem::create_directories(opts.out, ec);
  if (ec) throw IoError("cannot create output directory " + opts.out.string() + ": " + ec.message());
  return opts.out;
}

}  // namespace

int cmd_field(const RunConfig& cfg, const Options& opts, std::ostream& out, std::ostream&) {
  const DeevState state(with_order(cfg.params, opts.m), cfg.quadrature);
  const Field2D f = intensity_field(state, cfg.grid("x", "y"), opts.par);
  emit(f, prepare_out(opts) / "intensity", opts.clamp, out);
  return kExitOk;
}

int cmd_wigner(const RunConfig& cfg, const Options& opts, std::ostream& out, std::ostream&) {
  const DeevParams p = with_order(cfg.params, opts.m);
  std::vector<SlicePlane> planes(std::begin(kAllPlanes), std::end(kAllPlanes));
  if (opts.plane && *opts.plane != "all") {
    try {
      planes = {parse_plane(*opts.plane)};
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  const auto dir = prepare_out(opts);
  for (SlicePlane plane : planes) {
    const auto [a1, a2] = plane_axes(plane);
    const Field2D f = wigner_slice(p, plane, cfg.grid(std::string(a1), std::string(a2)), opts.par);
    emit(f, dir / ("wigner_" + std::string(plane_name(plane))), opts.clamp, out);
  }
  return kExitOk;
}

int cmd_sit(const RunConfig& cfg, const Options& opts, std::ostream& out, std::ostream&) {
  std::vector<int> orders = cfg.sit_orders;
  if (opts.m) orders = {*opts.m};
  for (int m : orders) {
    if (m < 1) throw ConfigError("SIT needs m >= 1: L_0 has no interference terms");
  }
  const auto dir = prepare_out(opts);
  const GridSpec grid = cfg.grid("r", "s");
  for (int m : orders) {
    const Field2D f = sit_field(m, cfg.params.sigma_x(), cfg.params.sigma_y(), grid, cfg.sit_form, opts.par);
    const double cap = parse_real(f.metadata.at("render_cap"));
    emit(f, dir / ("sit_m" + std::to_string(m)), opts.clamp.value_or(cap), out);
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const Options& opts, std::ostream& out, std::ostream& err) {
  const DeevParams p = with_order(cfg.params, opts.m);
  const QuadratureSpec& q = cfg.quadrature;
  const auto dir = prepare_out(opts);
  const auto report_path = dir / "verify_report.txt";
  const DeevState state(p, q);
  std::mt19937_64 rng(cfg.verify.seed);

  std::vector<PhasePoint> probes = default_probes(p);
  const std::vector<PhasePoint> extra = random_probes(p, cfg.verify.random_points, rng);
  probes.insert(probes.end(), extra.begin(), extra.end());

  DiscrepancyReport rep;
  DiscrepancyReport rep_half;
  std::vector<std::string> notes;
  SuiteLog log{{}, notes};
  try {
    rep = build_discrepancy_report(state, probes, q);
    rep_half = build_discrepancy_report(state, probes, q.halved());
  } catch (const QuadratureError& e) {
    rep.label = "oracle failed";
    rep.notes.push_back(std::string("oracle-equivalence aborted: ") + e.what());
    rep.max_relative_deviation = std::numeric_limits<double>::infinity();
    rep.verdict = Verdict::ShapeMismatch;
    write_report(rep, report_path);
    err << "verify: " << e.what() << "; report: " << report_path.string() << "\n";
    return kExitVerifyFailed;
  }

  {
    const double n = lattice_norm(state);
    log.record("normalization", std::abs(n - 1.0) <= kNormTolerance,
               "lattice integral of |psi|^2 = " + format_real(n));
  }
  {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < cfg.verify.marginal_points; ++i) {
      const double x = p.x0() + u(rng) * p.sigma_x();
      const double y = p.y0() + u(rng) * p.sigma_y();
      try {
        worst = std::max(worst, std::abs(oracle_marginal_xy(state, x, y, q).difference()));
      } catch (const QuadratureError& e) {
        ok = false;
        notes.push_back(std::string("marginal quadrature failed: ") + e.what());
      }
    }
    log.record("marginal", ok && worst <= kMarginalTolerance,
               std::to_string(cfg.verify.marginal_points) + " points, max |difference| = " + fmt("%.3e", worst));
  }
  {
    const bool same_verdict = rep.verdict == rep_half.verdict;
    const double dk = std::abs(rep.calibrated_constant - rep_half.calibrated_constant) /
                      std::max(std::abs(rep.calibrated_constant), 1e-300);
    const double dd = std::abs(rep.max_relative_deviation - rep_half.max_relative_deviation) /
                      std::max(1.0, std::abs(rep.max_relative_deviation));
    log.record("stability", same_verdict && dk <= kStabilityTolerance && dd <= kStabilityTolerance,
               "halved tolerances: verdict " + std::string(verdict_name(rep_half.verdict)) +
                   ", constant change " + fmt("%.3e", dk) + ", deviation change " + fmt("%.3e", dd));
  }
  {
    const Field2D a = intensity_field(state, cfg.grid("x", "y"), opts.par);
    const Field2D b = intensity_field(DeevState(p.swapped_axes(), q), transposed(cfg.grid("x", "y")), opts.par);
    const double di = transpose_deviation(a, b);
    const GridSpec xy = cfg.grid("x", "y");
    const Field2D wa = wigner_slice(p, SlicePlane::XY, xy, opts.par);
    const Field2D wb = wigner_slice(p.swapped_axes(), SlicePlane::XY, transposed(xy), opts.par);
    const double dw = transpose_deviation(wa, wb);
    log.record("symmetry", di <= kTransposeTolerance && dw <= kTransposeTolerance,
               "sigma swap vs transpose: intensity " + fmt("%.3e", di) + ", wigner xy " + fmt("%.3e", dw));
  }
  {
    const int cx = count_strict_minima(wigner_slice(p, SlicePlane::XPX, cfg.grid("x", "px"), opts.par));
    const int cy = count_strict_minima(wigner_slice(p, SlicePlane::YPX, cfg.grid("y", "px"), opts.par));
    log.record("minima", cx == p.m() && cy == p.m(),
               "strict minima xpx = " + std::to_string(cx) + ", ypx = " + std::to_string(cy) +
                   ", m = " + std::to_string(p.m()));
  }
  log.record("oracle-equivalence", rep.verdict != Verdict::ShapeMismatch,
             "verdict " + std::string(verdict_name(rep.verdict)) + ", max relative deviation " +
                 fmt("%.3e", rep.max_relative_deviation));
  if (rep.verdict == Verdict::ConstantOnlyMismatch) {
    notes.push_back("calibrated constant replaces the printed one: " + format_real(rep.calibrated_constant));
  }

  notes.push_back("normalization ratio N / printed prefactor = " + format_real(state.normalization_ratio()));
  notes.push_back("integral of the printed closed form over phase space = " + format_real(printed_form_integral(p)));
  if (p.weights_tied()) {
    double worst = 0.0;
    for (const ProbeRecord& r : rep.probes) {
      worst = std::max(worst, std::abs(fock_reference_wigner(p, {r.x, r.y, r.px, r.py}) - r.oracle));
    }
    notes.push_back("two-mode Fock reference form vs oracle: max |difference| = " + fmt("%.3e", worst));
  }
  rep.notes.insert(rep.notes.end(), notes.begin(), notes.end());
  write_report(rep, report_path);

  out << "wrote " << report_path.string() << "\n";
  for (const std::string& n : notes) out << n << "\n";
  out << "verdict=" << verdict_name(rep.verdict) << "\n";
  if (!log.failed.empty()) {
    err << "verify failed (";
    for (std::size_t i = 0; i < log.failed.size(); ++i) err << (i ? ", " : "") << log.failed[i];
    err << "); report: " << report_path.string() << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

int cmd_coupler(const RunConfig& cfg, const Options&, std::ostream& out, std::ostream&) {
  if (!cfg.coupler) throw ConfigError("coupler command needs a 'coupler' section");
  const CouplerConfig& c = *cfg.coupler;
  const ModeCoupler mc = c.build();
  out << "type=" << c.type << "\n";
  if (c.type == "bs") {
    out << "theta=" << format_real(c.theta) << "\nphi=" << format_real(c.phi) << "\n";
  } else {
    out << "g=" << format_real(c.g) << "\ndelta=" << format_real(c.delta) << "\n";
    if (c.ratio) out << "requested_ratio=" << format_real(*c.ratio) << "\n";
    out << "t=" << format_real(c.dcdc_time()) << "\n";
  }
  out << "a1=" << format_real(mc.a1().real()) << "," << format_real(mc.a1().imag()) << "\n";
  out << "a2=" << format_real(mc.a2().real()) << "," << format_real(mc.a2().imag()) << "\n";
  out << "norm=" << format_real(std::norm(mc.a1()) + std::norm(mc.a2())) << "\n";
  const Ellipticity e = coupler_to_ellipticity(mc);
  out << "eta_x=" << format_real(e.eta_x) << "\neta_y=" << format_real(e.eta_y) << "\n";
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Displaced elliptical vortex states: intensity, Wigner slices, SIT maps, checks", "deev"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::string plane;
  int m = 0;
  unsigned threads = 0;
  std::string clamp = "auto";

  auto common = [&](CLI::App* sub, bool with_m, bool with_clamp) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    if (sub->get_name() == "coupler") return;
    sub->add_option("--out", out_dir, "output directory (default: config 'output' or .)");
    sub->add_option("--threads", threads, "worker threads, 0 = available parallelism");
    if (with_m) sub->add_option("--m", m, "vorticity override");
    if (with_clamp) sub->add_option("--clamp", clamp, "symmetric render range REAL, or auto");
  };
  CLI::App* field = app.add_subcommand("field", "intensity |psi(x, y)|^2");
  common(field, true, true);
  CLI::App* wigner = app.add_subcommand("wigner", "closed-form Wigner slices");
  common(wigner, true, true);
  wigner->add_option("--plane", plane, "xy, pxpy, xpx, ypy, xpy, ypx or all (default all)");
  CLI::App* sit_cmd = app.add_subcommand("sit", "scaled interference terms");
  common(sit_cmd, true, true);
  CLI::App* verify = app.add_subcommand("verify", "checks against the numerical Wigner transform");
  common(verify, true, false);
  CLI::App* coupler = app.add_subcommand("coupler", "beam splitter or directional coupler coefficients");
  common(coupler, false, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    const RunConfig cfg = load_config(config_path);
    Options opts;
    opts.out = !out_dir.empty() ? std::filesystem::path(out_dir) : cfg.output.value_or(".");
    opts.par.threads = threads;
    if (sub->get_option_no_throw("--plane") && sub->count("--plane")) opts.plane = plane;
    if (sub->get_option_no_throw("--m") && sub->count("--m")) opts.m = m;
    if (clamp != "auto") {
      double v = 0.0;
      try {
        v = parse_real(clamp);
      } catch (const std::exception&) {
        throw ConfigError("--clamp must be a positive number or auto, got '" + clamp + "'");
      }
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("--clamp must be a positive finite number");
      opts.clamp = v;
    }
    if (sub == field) return cmd_field(cfg, opts, out, err);
    if (sub == wigner) return cmd_wigner(cfg, opts, out, err);
    if (sub == sit_cmd) return cmd_sit(cfg, opts, out, err);
    if (sub == verify) return cmd_verify(cfg, opts, out, err);
    return cmd_coupler(cfg, opts, out, err);
  } catch (const ConfigError& e) {
    err << "deev: invalid configuration: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const IoError& e) {
    err << "deev: " << e.what() << "\n";
    return kExitIo;
  } catch (const QuadratureError& e) {
    err << "deev: " << e.what() << "\n";
    return kExitVerifyFailed;
  } catch (const std::invalid_argument& e) {
    err << "deev: invalid configuration: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::out_of_range& e) {
    err << "deev: invalid configuration: " << e.what() << "\n";
    return kExitBadConfig;
  }
}

}  // namespace deev::cli
