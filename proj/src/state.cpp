#include "deev/state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "deev/special.hpp"

namespace deev {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

std::complex<double> ipow(std::complex<double> z, int m) {
  std::complex<double> out(1.0, 0.0);
  for (int k = 0; k < m; ++k) out *= z;
  return out;
}

}  // namespace

void DeevParams::validate() const {
  if (m_ < 0) throw std::invalid_argument("vorticity m must be non-negative");
  if (sign_ != 1 && sign_ != -1) throw std::invalid_argument("vortex sign must be +1 or -1");
  require_positive(sigma_x_, "sigma_x");
  require_positive(sigma_y_, "sigma_y");
  if (!std::isfinite(eta_x_) || !std::isfinite(eta_y_) || eta_x_ * eta_x_ + eta_y_ * eta_y_ <= 0.0) {
    throw std::invalid_argument("vortex weights must be finite and not both zero");
  }
  for (double v : {d_.x0, d_.y0, d_.px0, d_.py0}) {
    if (!std::isfinite(v)) throw std::invalid_argument("displacements must be finite");
  }
}

DeevParams DeevParams::general(int m, double eta_x, double eta_y, int sign, double sigma_x,
                               double sigma_y, Displacement d) {
  DeevParams p;
  p.m_ = m;
  p.eta_x_ = eta_x;
  p.eta_y_ = eta_y;
  p.sign_ = sign;
  p.sigma_x_ = sigma_x;
  p.sigma_y_ = sigma_y;
  p.d_ = d;
  p.validate();
  return p;
}

DeevParams DeevParams::general_from_squeezing(int m, double eta_x, double eta_y, int sign,
                                              double zeta_x, double zeta_y, Displacement d) {
  return general(m, eta_x, eta_y, sign, std::exp(2.0 * zeta_x), std::exp(2.0 * zeta_y), d);
}

DeevParams DeevParams::tied(int m, double sigma_x, double sigma_y, Displacement d, int sign) {
  require_positive(sigma_x, "sigma_x");
  require_positive(sigma_y, "sigma_y");
  return general(m, 1.0 / (std::numbers::sqrt2 * sigma_x), 1.0 / (std::numbers::sqrt2 * sigma_y),
                 sign, sigma_x, sigma_y, d);
}

DeevParams DeevParams::from_coupler(int m, const ModeCoupler& c, int sign, double sigma_x,
                                    double sigma_y, Displacement d) {
  const Ellipticity e = coupler_to_ellipticity(c);
  return general(m, e.eta_x, e.eta_y, sign, sigma_x, sigma_y, d);
}

double DeevParams::zeta_x() const { return 0.5 * std::log(sigma_x_); }
double DeevParams::zeta_y() const { return 0.5 * std::log(sigma_y_); }

bool DeevParams::weights_tied() const {
  auto close = [](double eta, double sigma) {
    const double want = 1.0 / (std::numbers::sqrt2 * sigma);
    return std::abs(eta - want) <= 1e-12 * want;
  };
  return close(eta_x_, sigma_x_) && close(eta_y_, sigma_y_);
}

DeevParams DeevParams::swapped_axes() const {
  return general(m_, eta_y_, eta_x_, sign_, sigma_y_, sigma_x_, {d_.y0, d_.x0, d_.py0, d_.px0});
}

DeevParams DeevParams::with_displacement(Displacement d) const {
  return general(m_, eta_x_, eta_y_, sign_, sigma_x_, sigma_y_, d);
}

std::complex<double> VortexDecomposition::resum(std::complex<double> u,
                                                std::complex<double> v) const {
  std::complex<double> acc(0.0, 0.0);
  for (int k = 0; k <= m; ++k) {
    if (coefficients[k] == 0.0) continue;
    acc += coefficients[k] * ipow(u, k) * ipow(v, m - k);
  }
  return acc;
}

VortexDecomposition circular_decomposition(const DeevParams& p) {
  const int m = p.m();
  const double c_plus = 0.5 * (p.eta_x() + p.sign() * p.eta_y());
  const double c_minus = 0.5 * (p.eta_x() - p.sign() * p.eta_y());
  VortexDecomposition out{m, std::vector<double>(static_cast<std::size_t>(m) + 1)};
  for (int k = 0; k <= m; ++k) {
    out.coefficients[k] = binom_real(m, k) * std::pow(c_plus, k) * std::pow(c_minus, m - k);
  }
  return out;
}

double raw_norm_squared(const DeevParams& p, const QuadratureSpec& q) {
  q.validate();
  const double radius = q.truncation_radius * std::max(p.sigma_x(), p.sigma_y());
  auto inner = [&](double x) {
    auto f = [&](double y) { return std::norm(raw_amplitude(p, x, y)); };
    auto r = integrate_adaptive<double>(f, p.y0() - radius, p.y0() + radius, 0.1 * q.abs_tol,
                                        0.1 * q.rel_tol, q.max_subdivisions);
    if (!r.converged) throw QuadratureError("normalization inner integral did not converge", r.value, r.error);
    return r.value;
  };
  auto r = integrate_adaptive<double>(inner, p.x0() - radius, p.x0() + radius, q.abs_tol, q.rel_tol,
                                      q.max_subdivisions);
  if (!r.converged) throw QuadratureError("normalization integral did not converge", r.value, r.error);
  return r.value;
}

DeevState::DeevState(DeevParams params, const QuadratureSpec& q)
    : params_(std::move(params)) {
  norm_ = 1.0 / std::sqrt(raw_norm_squared(params_, q));
}

double DeevState::printed_normalization() const {
  const int m = params_.m();
  return std::pow(2.0, m - 2) /
         std::sqrt(params_.sigma_x() * params_.sigma_y() * gamma_half_integer(m) *
                   std::sqrt(std::numbers::pi));
}

std::complex<double> raw_amplitude(const DeevParams& p, double x, double y) {
  const double dx = x - p.x0();
  const double dy = y - p.y0();
  const std::complex<double> vortex(p.eta_x() * dx, p.sign() * p.eta_y() * dy);
  const double gx = dx / p.sigma_x();
  const double gy = dy / p.sigma_y();
  const double envelope = std::exp(-0.5 * (gx * gx + gy * gy));
  std::complex<double> out = ipow(vortex, p.m()) * envelope;
  if (p.px0() != 0.0 || p.py0() != 0.0) out *= std::polar(1.0, p.px0() * dx + p.py0() * dy);
  return out;
}

std::complex<double> DeevState::psi(double x, double y) const {
  return norm_ * raw_amplitude(params_, x, y);
}

double lattice_norm(const DeevState& state, int nodes_per_sigma, double radius_sigmas) {
  const DeevParams& p = state.params();
  const double hx = p.sigma_x() / nodes_per_sigma;
  const double hy = p.sigma_y() / nodes_per_sigma;
  const int nx = static_cast<int>(std::ceil(radius_sigmas * nodes_per_sigma));
  const int ny = nx;
  double total = 0.0;
  // Tails are below double precision at the window edge, so the endpoint
  // weights of the trapezoid rule do not matter.
  for (int i = -nx; i <= nx; ++i) {
    const double x = p.x0() + i * hx;
    double row = 0.0;
    for (int j = -ny; j <= ny; ++j) row += state.intensity(x, p.y0() + j * hy);
    total += row;
  }
  return total * hx * hy;
}

Field2D intensity_field(const DeevState& state, const GridSpec& grid, Parallelism par) {
  grid.validate();
  if (grid.axis1.label != "x" || grid.axis2.label != "y") {
    throw std::invalid_argument("intensity grid must have axes (x, y)");
  }
  Field2D f = sample_field(grid, [&](double x, double y) { return state.intensity(x, y); }, par);
  const DeevParams& p = state.params();
  f.metadata = {{"quantity", "intensity"},
                {"m", std::to_string(p.m())},
                {"sigma_x", format_real(p.sigma_x())},
                {"sigma_y", format_real(p.sigma_y())},
                {"eta_x", format_real(p.eta_x())},
                {"eta_y", format_real(p.eta_y())},
                {"sign", std::to_string(p.sign())},
                {"x0", format_real(p.x0())},
                {"y0", format_real(p.y0())},
                {"px0", format_real(p.px0())},
                {"py0", format_real(p.py0())},
                {"normalization", format_real(state.normalization())},
                {"printed_normalization", format_real(state.printed_normalization())}};
  return f;
}

}  // namespace deev
