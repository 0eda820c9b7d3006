#ifndef MALAB_INTERPOLATION_HPP
#define MALAB_INTERPOLATION_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "malab/errors.hpp"

namespace malab {

/// Monotone cubic Hermite interpolant (Fritsch-Carlson slope limiting).
/// Preserves monotonicity of the data; queries outside the table range
/// raise a domain error.
class MonotoneCubic {
public:
  MonotoneCubic() = default;

  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw_domain("table-too-small", "need at least two samples");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(x_[i] < x_[i + 1])) throw_domain("table-not-sorted", "abscissae must increase strictly");
    d_.resize(n);
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    d_[0] = delta[0];
    d_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
      d_[i] = (delta[i - 1] * delta[i] <= 0.0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
    // Fritsch-Carlson limiter
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (delta[i] == 0.0) {
        d_[i] = 0.0;
        d_[i + 1] = 0.0;
        continue;
      }
      const double a = d_[i] / delta[i];
      const double b = d_[i + 1] / delta[i];
      const double s = a * a + b * b;
      if (s > 9.0) {
        const double tau = 3.0 / std::sqrt(s);
        d_[i] = tau * a * delta[i];
        d_[i + 1] = tau * b * delta[i];
      }
    }
  }

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

  double operator()(double x) const {
    // tolerate rounding-level overshoot from quadrature endpoints
    const double slack = 1e-9 * (x_.back() - x_.front());
    if (x < x_.front() - slack || x > x_.back() + slack)
      throw_domain("out-of-domain", "query outside table range");
    x = std::min(std::max(x, x_.front()), x_.back());
    // binary search for the bracketing interval
    std::size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (x_[mid] <= x ? lo : hi) = mid;
    }
    const double h = x_[lo + 1] - x_[lo];
    const double t = (x - x_[lo]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[lo] + h10 * h * d_[lo] + h01 * y_[lo + 1] + h11 * h * d_[lo + 1];
  }

  /// Derivative of the interpolant.
  double derivative(double x) const {
    const double slack = 1e-9 * (x_.back() - x_.front());
    if (x < x_.front() - slack || x > x_.back() + slack)
      throw_domain("out-of-domain", "query outside table range");
    x = std::min(std::max(x, x_.front()), x_.back());
    std::size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (x_[mid] <= x ? lo : hi) = mid;
    }
    const double h = x_[lo + 1] - x_[lo];
    const double t = (x - x_[lo]) / h;
    const double t2 = t * t;
    const double g00 = (6 * t2 - 6 * t) / h, g10 = 3 * t2 - 4 * t + 1;
    const double g01 = (-6 * t2 + 6 * t) / h, g11 = 3 * t2 - 2 * t;
    return g00 * y_[lo] + g10 * d_[lo] + g01 * y_[lo + 1] + g11 * d_[lo + 1];
  }

private:
  std::vector<double> x_, y_, d_;
};

/// Bisection for a continuous nonincreasing or nondecreasing function g on
/// [lo, hi] with g(lo), g(hi) bracketing zero. Returns the root to relative
/// tolerance rel_tol.
template <typename F>
double bisect(F&& g, double lo, double hi, double rel_tol = 1e-12, int max_iter = 200) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0) == (ghi > 0)) throw_precondition("no-bracket", "bisection endpoints do not bracket a root");
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0) == (glo > 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace malab

#endif
