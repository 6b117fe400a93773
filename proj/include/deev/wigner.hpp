#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "deev/grid_io.hpp"
#include "deev/state.hpp"

namespace deev {

struct PhasePoint {
  double x = 0.0;
  double y = 0.0;
  double px = 0.0;
  double py = 0.0;
};

/// Displaced and scaled phase-space variables. The first set enters the
/// Gaussian factor of the closed form, the second the Laguerre argument.
struct ScaledCoords {
  double x1, y1, px1, py1;
  double x2, y2, px2, py2;
};

ScaledCoords scaled_coords(const DeevParams& p, const PhasePoint& pt);

/// 2^(m-4) m! / (pi sqrt(pi) Gamma(m+1/2)) * [-2 (sigma_x^2 + sigma_y^2)]^m.
double printed_wigner_constant(int m, double sigma_x, double sigma_y);

/// Constant multiplying the closed-form shape: the printed value, optionally
/// replaced by one calibrated against the numerical transform.
struct WignerConstant {
  double printed = 0.0;
  std::optional<double> calibrated;

  static WignerConstant for_params(const DeevParams& p);
  double value() const { return calibrated.value_or(printed); }
};

/// exp[-(X1^2 + Y1^2 + Px1^2 + Py1^2)] L_m^{-1/2}[(Px2 + Py2 - X2 - Y2)^2 / (sigma_x^2 + sigma_y^2)]
double wigner_shape(const DeevParams& p, const PhasePoint& pt);

/// Closed-form four-dimensional Wigner function with the printed constant.
double wigner4d(const DeevParams& p, const PhasePoint& pt);
double wigner4d(const DeevParams& p, const PhasePoint& pt, double constant);

/// Integral of the printed closed form (printed constant) over all of phase
/// space. The Laguerre argument depends on one linear combination of the
/// Gaussian variables, so the four-fold integral reduces to a Gauss-Hermite
/// sum along that direction.
double printed_form_integral(const DeevParams& p);

/// Wigner function of the weight-tied state obtained from its two-mode Fock
/// structure: in scaled variables xi = x'/sigma_x, k_x = sigma_x p_x' (and y
/// alike) the state is |m> in the circular mode, giving
///   (-1)^m / pi^2 exp(-Q) L_m(Q + 2 s (xi_x k_y - xi_y k_x)),  Q = |xi|^2 + |k|^2.
/// Requires weights_tied(). Used to describe how the printed closed form
/// departs from the transform of the wavefunction.
double fock_reference_wigner(const DeevParams& p, const PhasePoint& pt);

/// The six two-variable reductions. Off-plane variables are pinned to their
/// displacement values.
enum class SlicePlane { XY, PXPY, XPX, YPY, XPY, YPX };

inline constexpr SlicePlane kAllPlanes[] = {SlicePlane::XY,  SlicePlane::PXPY, SlicePlane::XPX,
                                            SlicePlane::YPY, SlicePlane::XPY,  SlicePlane::YPX};

std::string_view plane_name(SlicePlane plane);
SlicePlane parse_plane(std::string_view name);
/// Axis labels (axis1, axis2) of the plane, e.g. YPX -> (y, px).
std::pair<std::string_view, std::string_view> plane_axes(SlicePlane plane);
/// Phase-space point with the plane's two variables set to (a, b).
PhasePoint plane_point(const DeevParams& p, SlicePlane plane, double a, double b);

Field2D wigner_slice(const DeevParams& p, SlicePlane plane, const GridSpec& grid,
                     const WignerConstant& k, Parallelism par = {});
inline Field2D wigner_slice(const DeevParams& p, SlicePlane plane, const GridSpec& grid,
                            Parallelism par = {}) {
  return wigner_slice(p, plane, grid, WignerConstant::for_params(p), par);
}

/// Interior nodes strictly below all eight neighbours with |value| > threshold.
int count_strict_minima(const Field2D& field, double threshold = 1e-12);

// Scaled interference term --------------------------------------------------

enum class SitForm { Sum, Difference };

std::string_view sit_form_name(SitForm f);
SitForm parse_sit_form(std::string_view name);

/// Expansion of L_m^{-1/2}((r +- s)^2 / (sigma_x^2 + sigma_y^2)) in monomials
/// r^i s^j. The ratio of the cross monomials (i, j >= 1) to the single-variable
/// ones (exactly one of i, j nonzero); the constant monomial is in neither.
class SitPolynomial {
 public:
  SitPolynomial(int m, double sigma_x, double sigma_y);

  int m() const { return m_; }
  /// Returns +-inf when only the denominator vanishes and NaN when both do.
  double operator()(double r, double s, SitForm form) const;
  double cross_terms(double r, double s, SitForm form) const;
  double single_terms(double r, double s) const;

 private:
  int m_;
  std::vector<double> scaled_;  ///< ALP series coefficient of z^k divided by S^k
};

double sit(int m, double sigma_x, double sigma_y, double r, double s, SitForm form);

/// Raw SIT samples (IEEE infinities kept). metadata["render_cap"] holds the
/// 99th percentile of the finite magnitudes, the symmetric clamp used when
/// rendering with an automatic range.
Field2D sit_field(int m, double sigma_x, double sigma_y, const GridSpec& grid, SitForm form,
                  Parallelism par = {});

}  // namespace deev
