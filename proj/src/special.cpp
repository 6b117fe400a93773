#include "deev/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace deev {

namespace {
void require_order(int m) {
  if (m < 0) throw std::invalid_argument("polynomial order must be non-negative");
}
}  // namespace

double alp_eval(int m, double alpha, double z) {
  require_order(m);
  if (m == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - z;
  for (int k = 2; k <= m; ++k) {
    const double next = ((2.0 * k - 1.0 + alpha - z) * cur - (k - 1.0 + alpha) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

double binom_real(double n, int k) {
  if (k < 0) return 0.0;
  double out = 1.0;
  for (int j = 1; j <= k; ++j) out *= (n - k + j) / j;
  return out;
}

double factorial(int n) {
  require_order(n);
  double out = 1.0;
  for (int j = 2; j <= n; ++j) out *= j;
  return out;
}

double gamma_half_integer(int m) {
  require_order(m);
  double out = std::sqrt(std::numbers::pi);
  for (int k = 1; k <= m; ++k) out *= (k - 0.5);
  return out;
}

AlpCoeffs alp_coeffs(int m, double alpha) {
  require_order(m);
  AlpCoeffs out{m, alpha, std::vector<long double>(static_cast<std::size_t>(m) + 1)};
  // Extended precision: the alternating series cancels heavily near roots.
  const long double n = static_cast<long double>(m) + alpha;
  long double inv_fact = 1.0L;
  for (int k = 0; k <= m; ++k) {
    if (k > 0) inv_fact /= k;
    long double binom = 1.0L;
    for (int j = 1; j <= m - k; ++j) binom *= (n - (m - k) + j) / j;
    out.coeffs[k] = ((k % 2 == 0) ? binom : -binom) * inv_fact;
  }
  return out;
}

double AlpCoeffs::operator()(double z) const {
  long double acc = 0.0L;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return static_cast<double>(acc);
}

double rodrigues_check(int m, double x) {
  require_order(m);
  if (m > 8) throw std::invalid_argument("rodrigues_check supports m <= 8");
  const int n = 2 * m;
  double h_prev = 1.0;  // H_0
  double h = 2.0 * x;   // H_1
  if (n == 0) {
    h = h_prev;
  } else {
    for (int k = 1; k < n; ++k) {
      const double next = 2.0 * x * h - 2.0 * k * h_prev;
      h_prev = h;
      h = next;
    }
  }
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * h / (std::pow(4.0, m) * factorial(m));
}

}  // namespace deev
