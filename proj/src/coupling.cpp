#include "deev/coupling.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace deev {

namespace {
constexpr double kUnitarityTol = 1e-12;
}

ModeCoupler::ModeCoupler(Complex a1, Complex a2) : a1_(a1), a2_(a2) {
  const double norm = std::norm(a1) + std::norm(a2);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kUnitarityTol) {
    std::ostringstream os;
    os << "coupler is not unitary: |a1|^2 + |a2|^2 = " << norm;
    throw std::invalid_argument(os.str());
  }
}

double ModeCoupler::phase_condition() const {
  return 2.0 * std::real(std::conj(a1_) * a2_);
}

double DcdcParams::omega() const { return std::hypot(delta, g); }

void DcdcParams::validate() const {
  if (!(g > 0.0) || !std::isfinite(g)) {
    throw std::invalid_argument("dcdc coupling strength g must be positive");
  }
  if (!std::isfinite(delta)) throw std::invalid_argument("dcdc detuning must be finite");
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("dcdc interaction time must be non-negative");
  }
}

ModeCoupler bs_coupler(double theta, double phi) {
  theta = std::remainder(theta, 2.0 * std::numbers::pi);
  phi = std::remainder(phi, 2.0 * std::numbers::pi);
  const Complex a1(std::cos(theta), 0.0);
  const Complex a2 = Complex(0.0, -1.0) * std::polar(1.0, phi) * std::sin(theta);
  return ModeCoupler(a1, a2);
}

ModeCoupler dcdc_coupler(const DcdcParams& p) {
  p.validate();
  const double omega = p.omega();
  // Reducing the phase keeps the result periodic to rounding for long times.
  const double phase = std::remainder(omega * p.t, 2.0 * std::numbers::pi);
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  return ModeCoupler(Complex(c, -(p.delta / omega) * s), Complex(0.0, (p.g / omega) * s));
}

Ellipticity coupler_to_ellipticity(const ModeCoupler& c) {
  return {std::abs(c.a1()), std::abs(c.a2())};
}

InfeasibleRatio::InfeasibleRatio(double requested, double infimum)
    : std::domain_error([&] {
        std::ostringstream os;
        os << "ratio " << requested << " is below the achievable infimum " << infimum;
        return os.str();
      }()),
      requested_(requested),
      infimum_(infimum) {}

double dcdc_time_for_ratio(double ratio, double g, double delta) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw std::invalid_argument("ratio must be positive and finite");
  }
  DcdcParams{g, delta, 0.0}.validate();
  const double omega = std::hypot(delta, g);
  const double infimum = std::abs(delta) / g;
  // ratio^2 = (cos^2 + (delta/W)^2 sin^2) / ((g/W)^2 sin^2)
  //   => tan^2(W t) = W^2 / (ratio^2 g^2 - delta^2)
  const double denom = (ratio * g - std::abs(delta)) * (ratio * g + std::abs(delta));
  if (denom < 0.0) throw InfeasibleRatio(ratio, infimum);
  if (denom == 0.0) return 0.5 * std::numbers::pi / omega;
  return std::atan2(omega, std::sqrt(denom)) / omega;
}

}  // namespace deev
