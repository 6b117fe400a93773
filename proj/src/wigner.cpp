#include "deev/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "deev/quadrature.hpp"
#include "deev/special.hpp"

namespace deev {

namespace {
constexpr double kHalfAlpha = -0.5;
}

ScaledCoords scaled_coords(const DeevParams& p, const PhasePoint& pt) {
  const double sx = p.sigma_x();
  const double sy = p.sigma_y();
  const double dx = pt.x - p.x0();
  const double dy = pt.y - p.y0();
  const double dpx = pt.px - p.px0();
  const double dpy = pt.py - p.py0();
  const double r2 = std::numbers::sqrt2;
  return ScaledCoords{
      dx / sx,
      dy / sy,
      sx * dpx / r2,
      sy * dpy / r2,
      sy * dx / (2.0 * sx),
      sx * dy / (2.0 * sy),
      sy * sy * sy * dpx / r2,
      sx * sx * sx * dpy / r2,
  };
}

double printed_wigner_constant(int m, double sigma_x, double sigma_y) {
  if (m < 0) throw std::invalid_argument("vorticity m must be non-negative");
  const double s2 = sigma_x * sigma_x + sigma_y * sigma_y;
  const double pi = std::numbers::pi;
  return std::pow(2.0, m - 4) * factorial(m) / (pi * std::sqrt(pi) * gamma_half_integer(m)) *
         std::pow(-2.0 * s2, m);
}

WignerConstant WignerConstant::for_params(const DeevParams& p) {
  return {printed_wigner_constant(p.m(), p.sigma_x(), p.sigma_y()), std::nullopt};
}

double wigner_shape(const DeevParams& p, const PhasePoint& pt) {
  const ScaledCoords c = scaled_coords(p, pt);
  const double s2 = p.sigma_x() * p.sigma_x() + p.sigma_y() * p.sigma_y();
  const double gauss = std::exp(-(c.x1 * c.x1 + c.y1 * c.y1 + c.px1 * c.px1 + c.py1 * c.py1));
  const double d = c.px2 + c.py2 - c.x2 - c.y2;
  return gauss * alp_eval(p.m(), kHalfAlpha, d * d / s2);
}

double wigner4d(const DeevParams& p, const PhasePoint& pt) {
  return wigner4d(p, pt, printed_wigner_constant(p.m(), p.sigma_x(), p.sigma_y()));
}

double wigner4d(const DeevParams& p, const PhasePoint& pt, double constant) {
  return constant * wigner_shape(p, pt);
}

double printed_form_integral(const DeevParams& p) {
  const double sx = p.sigma_x();
  const double sy = p.sigma_y();
  const double s2 = sx * sx + sy * sy;
  // In the Gaussian variables v = (X1, Y1, Px1, Py1) the volume element is
  // 2 d^4v and the Laguerre numerator is (a . v) with
  const double a[4] = {-sy / 2.0, -sx / 2.0, sy * sy * sy / sx, sx * sx * sx / sy};
  double a2 = 0.0;
  for (double c : a) a2 += c * c;
  const GaussHermiteRule rule = gauss_hermite(p.m() + 4);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    sum += rule.weights[i] * alp_eval(p.m(), kHalfAlpha, a2 * t * t / s2);
  }
  const double pi = std::numbers::pi;
  return 2.0 * printed_wigner_constant(p.m(), sx, sy) * pi * std::sqrt(pi) * sum;
}

double fock_reference_wigner(const DeevParams& p, const PhasePoint& pt) {
  if (!p.weights_tied()) {
    throw std::invalid_argument("fock_reference_wigner needs eta_i = 1/(sqrt(2) sigma_i)");
  }
  const double xi = (pt.x - p.x0()) / p.sigma_x();
  const double yi = (pt.y - p.y0()) / p.sigma_y();
  const double kx = p.sigma_x() * (pt.px - p.px0());
  const double ky = p.sigma_y() * (pt.py - p.py0());
  const double q = xi * xi + yi * yi + kx * kx + ky * ky;
  const double lz = xi * ky - yi * kx;
  const double sign = (p.m() % 2 == 0) ? 1.0 : -1.0;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return sign / pi2 * std::exp(-q) * alp_eval(p.m(), 0.0, q + 2.0 * p.sign() * lz);
}

std::string_view plane_name(SlicePlane plane) {
  switch (plane) {
    case SlicePlane::XY: return "xy";
    case SlicePlane::PXPY: return "pxpy";
    case SlicePlane::XPX: return "xpx";
    case SlicePlane::YPY: return "ypy";
    case SlicePlane::XPY: return "xpy";
    case SlicePlane::YPX: return "ypx";
  }
  throw std::logic_error("unknown slice plane");
}

SlicePlane parse_plane(std::string_view name) {
  for (SlicePlane p : kAllPlanes) {
    if (plane_name(p) == name) return p;
  }
  throw std::invalid_argument("unknown plane '" + std::string(name) +
                              "' (expected xy, pxpy, xpx, ypy, xpy or ypx)");
}

std::pair<std::string_view, std::string_view> plane_axes(SlicePlane plane) {
  switch (plane) {
    case SlicePlane::XY: return {"x", "y"};
    case SlicePlane::PXPY: return {"px", "py"};
    case SlicePlane::XPX: return {"x", "px"};
    case SlicePlane::YPY: return {"y", "py"};
    case SlicePlane::XPY: return {"x", "py"};
    case SlicePlane::YPX: return {"y", "px"};
  }
  throw std::logic_error("unknown slice plane");
}

PhasePoint plane_point(const DeevParams& p, SlicePlane plane, double a, double b) {
  PhasePoint pt{p.x0(), p.y0(), p.px0(), p.py0()};
  switch (plane) {
    case SlicePlane::XY: pt.x = a; pt.y = b; break;
    case SlicePlane::PXPY: pt.px = a; pt.py = b; break;
    case SlicePlane::XPX: pt.x = a; pt.px = b; break;
    case SlicePlane::YPY: pt.y = a; pt.py = b; break;
    case SlicePlane::XPY: pt.x = a; pt.py = b; break;
    case SlicePlane::YPX: pt.y = a; pt.px = b; break;
  }
  return pt;
}

Field2D wigner_slice(const DeevParams& p, SlicePlane plane, const GridSpec& grid,
                     const WignerConstant& k, Parallelism par) {
  grid.validate();
  const auto [a1, a2] = plane_axes(plane);
  if (grid.axis1.label != a1 || grid.axis2.label != a2) {
    throw std::invalid_argument("grid axes (" + grid.axis1.label + ", " + grid.axis2.label +
                                ") do not match plane " + std::string(plane_name(plane)));
  }
  const double constant = k.value();
  Field2D f = sample_field(
      grid, [&](double a, double b) { return wigner4d(p, plane_point(p, plane, a, b), constant); },
      par);
  f.metadata = {{"quantity", "wigner"},
                {"plane", std::string(plane_name(plane))},
                {"m", std::to_string(p.m())},
                {"sigma_x", format_real(p.sigma_x())},
                {"sigma_y", format_real(p.sigma_y())},
                {"x0", format_real(p.x0())},
                {"y0", format_real(p.y0())},
                {"px0", format_real(p.px0())},
                {"py0", format_real(p.py0())},
                {"constant", format_real(constant)},
                {"constant_source", k.calibrated ? "calibrated" : "printed"},
                {"printed_constant", format_real(k.printed)}};
  return f;
}

int count_strict_minima(const Field2D& field, double threshold) {
  const int n1 = field.spec.axis1.count;
  const int n2 = field.spec.axis2.count;
  int count = 0;
  for (int i = 1; i + 1 < n1; ++i) {
    for (int j = 1; j + 1 < n2; ++j) {
      const double v = field.at(i, j);
      if (!(std::abs(v) > threshold)) continue;
      bool strict = true;
      for (int di = -1; di <= 1 && strict; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          if (!(v < field.at(i + di, j + dj))) {
            strict = false;
            break;
          }
        }
      }
      if (strict) ++count;
    }
  }
  return count;
}

std::string_view sit_form_name(SitForm f) { return f == SitForm::Sum ? "sum" : "difference"; }

SitForm parse_sit_form(std::string_view name) {
  if (name == "sum") return SitForm::Sum;
  if (name == "difference") return SitForm::Difference;
  throw std::invalid_argument("unknown SIT form '" + std::string(name) + "' (expected sum or difference)");
}

SitPolynomial::SitPolynomial(int m, double sigma_x, double sigma_y) : m_(m) {
  if (m < 1) throw std::invalid_argument("SIT needs m >= 1: L_0 has no interference terms");
  if (!(sigma_x > 0.0) || !(sigma_y > 0.0)) throw std::invalid_argument("sigma must be positive");
  const double s2 = sigma_x * sigma_x + sigma_y * sigma_y;
  const AlpCoeffs series = alp_coeffs(m, kHalfAlpha);
  scaled_.resize(static_cast<std::size_t>(m) + 1);
  double scale = 1.0;
  for (int k = 0; k <= m; ++k) {
    scaled_[k] = static_cast<double>(series.coeffs[k] / scale);
    scale *= s2;
  }
}

double SitPolynomial::cross_terms(double r, double s, SitForm form) const {
  const double t = form == SitForm::Sum ? s : -s;
  double total = 0.0;
  for (int k = 1; k <= m_; ++k) {
    const int n = 2 * k;
    double inner = 0.0;
    for (int j = 1; j < n; ++j) {
      inner += binom_real(n, j) * std::pow(r, j) * std::pow(t, n - j);
    }
    total += scaled_[k] * inner;
  }
  return total;
}

double SitPolynomial::single_terms(double r, double s) const {
  double total = 0.0;
  for (int k = 1; k <= m_; ++k) {
    total += scaled_[k] * (std::pow(r, 2 * k) + std::pow(s, 2 * k));
  }
  return total;
}

double SitPolynomial::operator()(double r, double s, SitForm form) const {
  // IEEE division yields +-inf for x/0 and NaN for 0/0, which is the contract.
  return cross_terms(r, s, form) / single_terms(r, s);
}

double sit(int m, double sigma_x, double sigma_y, double r, double s, SitForm form) {
  if (!std::isfinite(r) || !std::isfinite(s)) throw std::invalid_argument("SIT arguments must be finite");
  return SitPolynomial(m, sigma_x, sigma_y)(r, s, form);
}

Field2D sit_field(int m, double sigma_x, double sigma_y, const GridSpec& grid, SitForm form,
                  Parallelism par) {
  grid.validate();
  if (grid.axis1.label != "r" || grid.axis2.label != "s") {
    throw std::invalid_argument("SIT grid must have axes (r, s)");
  }
  const SitPolynomial poly(m, sigma_x, sigma_y);
  Field2D f = sample_field(grid, [&](double r, double s) { return poly(r, s, form); }, par);
  std::vector<double> mags;
  mags.reserve(f.values.size());
  for (double v : f.values) {
    if (std::isfinite(v)) mags.push_back(std::abs(v));
  }
  double cap = 1.0;
  if (!mags.empty()) {
    const auto q = static_cast<std::ptrdiff_t>(0.99 * static_cast<double>(mags.size() - 1));
    std::nth_element(mags.begin(), mags.begin() + q, mags.end());
    cap = mags[q] > 0.0 ? mags[q] : 1.0;
  }
  f.metadata = {{"quantity", "sit"},
                {"m", std::to_string(m)},
                {"sigma_x", format_real(sigma_x)},
                {"sigma_y", format_real(sigma_y)},
                {"form", std::string(sit_form_name(form))},
                {"render_cap", format_real(cap)}};
  return f;
}

}  // namespace deev
