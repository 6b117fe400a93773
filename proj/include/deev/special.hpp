#pragma once

#include <vector>

namespace deev {

/// L_m^alpha(z) by the upward three-term recurrence.
double alp_eval(int m, double alpha, double z);

/// Explicit power-series form of L_m^alpha, c_k = (-1)^k binom(m+alpha, m-k) / k!.
struct AlpCoeffs {
  int m = 0;
  double alpha = 0.0;
  std::vector<long double> coeffs;  ///< coefficient of z^k at index k

  /// Horner evaluation of the series in extended precision.
  double operator()(double z) const;
};

AlpCoeffs alp_coeffs(int m, double alpha);

/// L_m^{-1/2}(x^2) recovered from H_{2m}(x) = (-1)^m 4^m m! L_m^{-1/2}(x^2),
/// with H_{2m} built by the physicists' Hermite recurrence. m <= 8.
double rodrigues_check(int m, double x);

/// Generalized binomial coefficient binom(n, k) for real n.
double binom_real(double n, int k);

/// Gamma(m + 1/2) = (2m)! sqrt(pi) / (4^m m!).
double gamma_half_integer(int m);

double factorial(int n);

}  // namespace deev
