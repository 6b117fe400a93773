#pragma once

#include <complex>
#include <vector>

#include "deev/coupling.hpp"
#include "deev/grid_io.hpp"
#include "deev/quadrature.hpp"

namespace deev {

/// Displaced elliptical-elliptical vortex state
///   N [eta_x a_x^+ +- i eta_y a_y^+]^m S_x(zeta_x) S_y(zeta_y) D_x(alpha_x) D_y(alpha_y) |0,0>
/// with widths sigma_i = exp(2 zeta_i), alpha_x = x0 + i px0, alpha_y = y0 + i py0.
///
/// The widths are stored directly so that states built from sigma keep the
/// exact values; zeta is derived.
struct Displacement {
  double x0 = 0.0;
  double y0 = 0.0;
  double px0 = 0.0;
  double py0 = 0.0;
};

class DeevParams {
 public:

  /// General state with independent vortex weights.
  static DeevParams general(int m, double eta_x, double eta_y, int sign, double sigma_x,
                            double sigma_y, Displacement d = {});
  static DeevParams general_from_squeezing(int m, double eta_x, double eta_y, int sign,
                                           double zeta_x, double zeta_y, Displacement d = {});
  /// Weights tied to the widths, eta_i = 1 / (sqrt(2) sigma_i).
  static DeevParams tied(int m, double sigma_x, double sigma_y, Displacement d = {}, int sign = +1);
  /// Weights taken from a coupler, (eta_x, eta_y) = (|A1|, |A2|).
  static DeevParams from_coupler(int m, const ModeCoupler& c, int sign, double sigma_x,
                                 double sigma_y, Displacement d = {});

  int m() const { return m_; }
  double eta_x() const { return eta_x_; }
  double eta_y() const { return eta_y_; }
  int sign() const { return sign_; }
  double sigma_x() const { return sigma_x_; }
  double sigma_y() const { return sigma_y_; }
  double zeta_x() const;
  double zeta_y() const;
  const Displacement& displacement() const { return d_; }
  double x0() const { return d_.x0; }
  double y0() const { return d_.y0; }
  double px0() const { return d_.px0; }
  double py0() const { return d_.py0; }

  /// True when eta_i = 1/(sqrt(2) sigma_i) within 1e-12 relative.
  bool weights_tied() const;

  /// Same state with x and y roles exchanged in widths and weights.
  DeevParams swapped_axes() const;
  DeevParams with_displacement(Displacement d) const;

 private:
  DeevParams() = default;
  void validate() const;

  int m_ = 0;
  double eta_x_ = 0.0;
  double eta_y_ = 0.0;
  int sign_ = +1;
  double sigma_x_ = 1.0;
  double sigma_y_ = 1.0;
  Displacement d_{};
};

/// Expansion of the vortex factor into circular vortices,
///   eta_x x' +- i eta_y y' = c_+ u + c_- v,  u = x' + i y', v = x' - i y',
///   [..]^m = sum_k coefficients[k] u^k v^(m-k).
struct VortexDecomposition {
  int m = 0;
  std::vector<double> coefficients;

  std::complex<double> resum(std::complex<double> u, std::complex<double> v) const;
};

VortexDecomposition circular_decomposition(const DeevParams& p);

/// A DEEV state with its normalization constant fixed by quadrature.
class DeevState {
 public:
  explicit DeevState(DeevParams params, const QuadratureSpec& q = {});

  const DeevParams& params() const { return params_; }
  double normalization() const { return norm_; }
  /// Prefactor 2^(m-2) / sqrt(sigma_x sigma_y Gamma(m+1/2) sqrt(pi)) as printed
  /// alongside the wavefunction.
  double printed_normalization() const;
  /// normalization() / printed_normalization().
  double normalization_ratio() const { return norm_ / printed_normalization(); }

  /// N [eta_x x' +- i eta_y y']^m exp(-(x'/sigma_x)^2/2 - (y'/sigma_y)^2/2)
  ///   * exp(i (px0 x' + py0 y')),   x' = x - x0, y' = y - y0.
  std::complex<double> psi(double x, double y) const;
  double intensity(double x, double y) const { return std::norm(psi(x, y)); }

 private:
  DeevParams params_;
  double norm_ = 1.0;
};

/// The wavefunction expression without N.
std::complex<double> raw_amplitude(const DeevParams& p, double x, double y);

/// Integral of |raw_amplitude|^2 over the plane by nested adaptive quadrature.
double raw_norm_squared(const DeevParams& p, const QuadratureSpec& q);

/// Integral of |psi|^2 by the tensor trapezoid rule on a lattice with
/// nodes_per_sigma points per width out to radius_sigmas widths. Independent
/// of the adaptive rule that fixes N; spectrally accurate for these states.
double lattice_norm(const DeevState& state, int nodes_per_sigma = 6, double radius_sigmas = 10.0);

Field2D intensity_field(const DeevState& state, const GridSpec& grid, Parallelism par = {});

}  // namespace deev
