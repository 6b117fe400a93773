#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace deev {

using Complex = std::complex<double>;

/// SU(2) pair (A1, A2) of a lossless two-mode coupler: transmittivity and
/// reflectivity of a beam splitter, or the evolution coefficients of a
/// dual-channel directional coupler.
class ModeCoupler {
 public:
  /// Throws std::invalid_argument unless |a1|^2 + |a2|^2 = 1 within 1e-12.
  ModeCoupler(Complex a1, Complex a2);

  Complex a1() const { return a1_; }
  Complex a2() const { return a2_; }

  /// a1* a2 + a1 a2*. For a mixing-angle coupler this is sin(phi) sin(2 theta).
  double phase_condition() const;

 private:
  Complex a1_;
  Complex a2_;
};

/// Evanescent coupling parameters, hbar = 1 and zero central energy.
struct DcdcParams {
  double g = 1.0;      ///< coupling strength
  double delta = 0.0;  ///< half energy detuning
  double t = 0.0;      ///< interaction time

  double omega() const;
  void validate() const;
};

/// Beam splitter with mixing angle theta and phase phi:
/// a1 = cos(theta), a2 = -i exp(i phi) sin(theta).
ModeCoupler bs_coupler(double theta, double phi);

/// A1 = cos(Wt) - i (delta/W) sin(Wt), A2 = i (g/W) sin(Wt), W = sqrt(delta^2 + g^2).
ModeCoupler dcdc_coupler(const DcdcParams& p);

struct Ellipticity {
  double eta_x;
  double eta_y;
};

/// Vortex generator weights (|a1|, |a2|). Phases are absorbed into the
/// vortex sign and an overall phase.
Ellipticity coupler_to_ellipticity(const ModeCoupler& c);

/// No interaction time on the first branch reaches the requested ratio.
class InfeasibleRatio : public std::domain_error {
 public:
  InfeasibleRatio(double requested, double infimum);
  double requested() const { return requested_; }
  /// Smallest |A1|/|A2| the coupler reaches, |delta| / g.
  double infimum() const { return infimum_; }

 private:
  double requested_;
  double infimum_;
};

/// Smallest t > 0 with |A1(t)| / |A2(t)| = ratio, restricted to the first
/// monotone branch W t in (0, pi/2] where the ratio falls from +inf to |delta|/g.
double dcdc_time_for_ratio(double ratio, double g, double delta);

}  // namespace deev
