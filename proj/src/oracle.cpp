#include "deev/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace deev {

namespace {

constexpr double kProbeFloor = 1e-8;
constexpr double kDeviationFloor = 1e-10;

}  // namespace

OracleValue oracle_wigner(const DeevState& state, const PhasePoint& pt, const QuadratureSpec& q) {
  q.validate();
  const DeevParams& p = state.params();
  const double radius = q.truncation_radius * std::max(p.sigma_x(), p.sigma_y());
  const double pi2 = std::numbers::pi * std::numbers::pi;
  // Tolerances refer to W itself; the integral carries an extra pi^2.
  const double outer_abs = q.abs_tol * pi2;
  const double inner_abs = 0.1 * outer_abs / (2.0 * radius);
  const double inner_rel = 0.1 * q.rel_tol;
  double worst_inner_error = 0.0;

  auto inner = [&](double u) -> Complex {
    const Complex phase_u = std::polar(1.0, 2.0 * pt.px * u);
    auto f = [&](double v) -> Complex {
      const Complex a = std::conj(state.psi(pt.x + u, pt.y + v));
      const Complex b = state.psi(pt.x - u, pt.y - v);
      return a * b * std::polar(1.0, 2.0 * pt.py * v);
    };
    auto r = integrate_adaptive<Complex>(f, -radius, radius, inner_abs, inner_rel, q.max_subdivisions);
    if (!r.converged) {
      throw QuadratureError("oracle inner integral did not converge", r.value.real() / pi2, r.error / pi2);
    }
    worst_inner_error = std::max(worst_inner_error, r.error);
    return r.value * phase_u;
  };
  auto r = integrate_adaptive<Complex>(inner, -radius, radius, outer_abs, q.rel_tol, q.max_subdivisions);
  const double error = (r.error + 2.0 * radius * worst_inner_error) / pi2;
  if (!r.converged) {
    throw QuadratureError("oracle outer integral did not converge", r.value.real() / pi2, error);
  }
  return {r.value.real() / pi2, r.value.imag() / pi2, error};
}

MarginalCheck oracle_marginal_xy(const DeevState& state, double x, double y, const QuadratureSpec& q) {
  const DeevParams& p = state.params();
  const GaussHermiteRule rule = gauss_hermite(p.m() + 4);
  const std::size_t n = rule.nodes.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = rule.nodes[i];
    const double wi = rule.weights[i] * std::exp(ti * ti);
    for (std::size_t j = 0; j < n; ++j) {
      const double tj = rule.nodes[j];
      const double wj = rule.weights[j] * std::exp(tj * tj);
      const PhasePoint pt{x, y, p.px0() + ti / p.sigma_x(), p.py0() + tj / p.sigma_y()};
      total += wi * wj * oracle_wigner(state, pt, q).value;
    }
  }
  total /= p.sigma_x() * p.sigma_y();
  return {state.intensity(x, y), total};
}

std::vector<PhasePoint> default_probes(const DeevParams& p) {
  const double sx = p.sigma_x();
  const double sy = p.sigma_y();
  auto at = [&](double ax, double ay, double bx, double by) {
    return PhasePoint{p.x0() + ax * sx, p.y0() + ay * sy, p.px0() + bx / sx, p.py0() + by / sy};
  };
  return {at(0.0, 0.0, 0.0, 0.0),    at(0.5, -0.3, 0.2, -0.1),   at(-0.7, 0.4, -0.3, 0.25),
          at(0.2, 0.6, 0.5, 0.35),   at(-0.4, -0.5, -0.15, -0.45), at(0.9, 0.1, -0.6, 0.05),
          at(-0.25, 0.8, 0.4, -0.3), at(0.35, -0.9, 0.05, 0.6)};
}

DiscrepancyReport build_discrepancy_report(const DeevState& state, const std::vector<PhasePoint>& probes,
                                           const QuadratureSpec& q) {
  const DeevParams& p = state.params();
  DiscrepancyReport rep;
  {
    std::ostringstream os;
    os << "m=" << p.m() << ",sigma_x=" << p.sigma_x() << ",sigma_y=" << p.sigma_y();
    rep.label = os.str();
  }
  rep.printed_constant = printed_wigner_constant(p.m(), p.sigma_x(), p.sigma_y());
  bool calibrated = false;
  for (const PhasePoint& pt : probes) {
    const double shape = wigner_shape(p, pt);
    const OracleValue o = oracle_wigner(state, pt, q);
    ProbeRecord rec{pt.x, pt.y, pt.px, pt.py, rep.printed_constant * shape, shape, o.value, o.error,
                    o.value / shape};
    if (!calibrated && std::abs(o.value) > kProbeFloor && std::abs(shape) > kProbeFloor) {
      rep.calibrated_constant = rec.ratio;
      calibrated = true;
    }
    rep.probes.push_back(rec);
  }
  if (!calibrated) {
    rep.notes.push_back("no probe had both oracle and shape above 1e-8; calibration impossible");
    rep.max_relative_deviation = std::numeric_limits<double>::infinity();
    rep.verdict = Verdict::ShapeMismatch;
    return rep;
  }
  double worst = 0.0;
  for (const ProbeRecord& rec : rep.probes) {
    if (std::abs(rec.oracle) <= kDeviationFloor) {
      // The closed form must then vanish too, measured against the peak scale.
      const double scale = std::abs(rep.probes.front().oracle) + kDeviationFloor;
      worst = std::max(worst, std::abs(rep.calibrated_constant * rec.shape - rec.oracle) / scale);
      continue;
    }
    worst = std::max(worst, std::abs(rep.calibrated_constant * rec.shape - rec.oracle) / std::abs(rec.oracle));
  }
  rep.max_relative_deviation = worst;
  rep.verdict = classify(worst, rep.calibrated_constant, rep.printed_constant);
  return rep;
}

ShapeMismatch::ShapeMismatch(DiscrepancyReport report)
    : std::runtime_error("closed form and numerical transform differ in shape (" + report.label + ")"),
      report_(std::move(report)) {}

double calibrate_constant(const DeevState& state, const QuadratureSpec& q) {
  DiscrepancyReport rep = build_discrepancy_report(state, default_probes(state.params()), q);
  if (rep.verdict == Verdict::ShapeMismatch) throw ShapeMismatch(std::move(rep));
  return rep.calibrated_constant;
}

}  // namespace deev
