#pragma once

#include <vector>

#include "deev/quadrature.hpp"
#include "deev/report.hpp"
#include "deev/state.hpp"
#include "deev/wigner.hpp"

namespace deev {

struct OracleValue {
  double value = 0.0;     ///< real part of the transform
  double imag = 0.0;      ///< imaginary residue, zero up to quadrature error
  double error = 0.0;     ///< combined error bound of the nested rules
};

/// Numerical Wigner transform of the normalized wavefunction,
///   W = (1/pi^2) Int Int psi*(x+u, y+v) psi(x-u, y-v) exp(2i(px u + py v)) du dv,
/// by nested adaptive Gauss-Kronrod quadrature (outer u, inner v) over
/// [-R, R]^2 with R = truncation_radius * max(sigma_x, sigma_y).
/// Throws QuadratureError when either level runs out of subdivisions.
OracleValue oracle_wigner(const DeevState& state, const PhasePoint& pt, const QuadratureSpec& q);

struct MarginalCheck {
  double shortcut = 0.0;  ///< |psi(x, y)|^2
  double direct = 0.0;    ///< momentum quadrature of oracle values
  double difference() const { return direct - shortcut; }
};

/// Position marginal at (x, y). The direct route applies a tensor
/// Gauss-Hermite rule in the scaled momenta sigma_i (p_i - p_i0); the momentum
/// dependence is a Gaussian of width 1/sigma_i times a polynomial of degree
/// 2m, so m + 4 nodes per axis integrate it exactly up to oracle error.
MarginalCheck oracle_marginal_xy(const DeevState& state, double x, double y, const QuadratureSpec& q);

/// Deterministic probe points where closed form and oracle are compared.
std::vector<PhasePoint> default_probes(const DeevParams& p);

/// Compares the closed-form shape with the oracle at the probe points and
/// classifies the outcome. The calibrated constant is the ratio at the first
/// probe whose oracle and shape both exceed 1e-8 in magnitude.
DiscrepancyReport build_discrepancy_report(const DeevState& state, const std::vector<PhasePoint>& probes,
                                           const QuadratureSpec& q);

/// Constant that makes the closed form agree with the oracle. Throws
/// ShapeMismatch (carrying the report) when the ratio is not constant over the
/// default probes to 1e-6 relative.
double calibrate_constant(const DeevState& state, const QuadratureSpec& q);

class ShapeMismatch : public std::runtime_error {
 public:
  explicit ShapeMismatch(DiscrepancyReport report);
  const DiscrepancyReport& report() const { return report_; }

 private:
  DiscrepancyReport report_;
};

}  // namespace deev
