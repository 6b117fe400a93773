#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace deev {

/// Tolerances and window for the numerical Wigner transform and the
/// normalization integrals.
struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 400;
  /// Half-width of the integration window in units of max(sigma_x, sigma_y).
  double truncation_radius = 8.0;

  void validate() const;
  QuadratureSpec halved() const;
};

/// Raised when an adaptive rule runs out of subdivisions. Carries the best
/// estimate reached so callers can still report it.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

template <typename T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod nodes on [-1, 1] (non-negative half) with the embedded
// 7-point Gauss weights at the odd positions.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename T, typename F>
Segment<T> gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const T sum = f(center - dx) + f(center + dx);
    kronrod += sum * kKronrodWeights[j];
    if (j % 2 == 1) gauss += sum * kGaussWeights[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, magnitude(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Works for any
/// value type closed under addition and scaling by double (double, complex).
/// The interval with the largest error estimate is bisected until the summed
/// error drops below max(abs_tol, rel_tol * |I|) or the interval budget is
/// exhausted, in which case converged is false.
template <typename T, typename F>
QuadResult<T> integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                                 int max_subdivisions) {
  using Seg = detail::Segment<T>;
  std::priority_queue<Seg> heap;
  Seg first = detail::gk15<T>(f, a, b);
  T total = first.value;
  double error = first.error;
  heap.push(first);
  int intervals = 1;
  while (error > std::max(abs_tol, rel_tol * detail::magnitude(total))) {
    if (intervals >= max_subdivisions) {
      return {total, error, intervals, false};
    }
    Seg worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Seg left = detail::gk15<T>(f, worst.a, mid);
    Seg right = detail::gk15<T>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed the drift of the incremental updates.
  T resummed{};
  double err = 0.0;
  while (!heap.empty()) {
    resummed += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {resummed, err, intervals, true};
}

/// Gauss-Hermite nodes and weights for the weight exp(-t^2) on the real line.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(int n);

}  // namespace deev
