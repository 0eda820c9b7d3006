#ifndef MALAB_QUADRATURE_HPP
#define MALAB_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace malab {

/// Composite Simpson rule on [a, b] with m panels (m >= 1).
template <typename Scalar = double, typename F>
Scalar simpson(F&& f, Scalar a, Scalar b, std::size_t m = 256) {
  if (a == b) return Scalar(0);
  const Scalar h = (b - a) / Scalar(2 * m);
  Scalar acc = f(a) + f(b);
  for (std::size_t i = 1; i < 2 * m; ++i) {
    const Scalar x = a + h * Scalar(i);
    acc += (i % 2 == 1 ? Scalar(4) : Scalar(2)) * f(x);
  }
  return acc * h / Scalar(3);
}

/// Composite Simpson where the integrand is supplied as log f(x) (f > 0).
/// Accumulates with a running max shift so that integrands spanning many
/// hundreds of e-folds neither overflow nor vanish prematurely.
template <typename F>
double simpson_log(F&& log_f, double a, double b, std::size_t m = 256) {
  if (a == b) return 0.0;
  const double h = (b - a) / double(2 * m);
  double shift = -std::numeric_limits<double>::infinity();
  std::vector<double> lv(2 * m + 1), wv(2 * m + 1);
  for (std::size_t i = 0; i <= 2 * m; ++i) {
    const double x = a + h * double(i);
    double w = (i == 0 || i == 2 * m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    lv[i] = log_f(x);
    wv[i] = w;
    if (lv[i] > shift) shift = lv[i];
  }
  if (shift == -std::numeric_limits<double>::infinity()) return 0.0;
  if (!std::isfinite(shift)) return std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (std::size_t i = 0; i <= 2 * m; ++i) acc += wv[i] * std::exp(lv[i] - shift);
  return acc * std::exp(shift) * h / 3.0;
}

/// Three-state verdict for truncation studies of improper integrals.
enum class TailVerdict { Converged, Diverged, Inconclusive };

inline const char* to_string(TailVerdict v) {
  switch (v) {
    case TailVerdict::Converged: return "Converged";
    case TailVerdict::Diverged: return "Diverged";
    default: return "Inconclusive";
  }
}

struct TruncationStudy {
  double value = 0.0;            // integral at the deepest truncation
  TailVerdict verdict = TailVerdict::Inconclusive;
  double last_rel_change = 0.0;  // relative change at the final step
  double threshold = 0.0;        // truncation parameter where the verdict fired
  std::vector<double> trace;     // successive truncated values
};

/// How divergence is called in a truncation study.
///   RelativeChange    : relative change > div_tol sustained for three steps.
///   GrowingIncrements : three consecutive increments that fail to decay
///                       (ratio >= 0.95) while staying above a noise floor.
/// The second mode distinguishes slowly convergent integrals (increments
/// decay geometrically under a geometric cutoff schedule) from genuinely
/// divergent ones (increments persist or grow).
enum class DivergenceMode { RelativeChange, GrowingIncrements };

inline TruncationStudy truncation_study(const std::function<double(double)>& eval,
                                        double t0, const std::function<double(double)>& advance,
                                        int max_steps = 24, double rel_tol = 1e-3,
                                        double div_tol = 0.1,
                                        DivergenceMode mode = DivergenceMode::RelativeChange) {
  TruncationStudy out;
  double t = t0;
  double prev = eval(t);
  out.trace.push_back(prev);
  int streak = 0;
  double prev_inc = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_steps; ++k) {
    t = advance(t);
    const double cur = eval(t);
    out.trace.push_back(cur);
    const double denom = std::max(std::abs(cur), 1e-300);
    const double rel = std::abs(cur - prev) / denom;
    out.value = cur;
    out.last_rel_change = rel;
    if (!std::isfinite(cur) || std::abs(cur) > 1e100) {
      out.verdict = TailVerdict::Diverged;
      out.threshold = t;
      return out;
    }
    if (rel < rel_tol) {
      out.verdict = TailVerdict::Converged;
      out.threshold = t;
      return out;
    }
    if (mode == DivergenceMode::RelativeChange) {
      streak = (rel > div_tol) ? streak + 1 : 0;
    } else {
      const double inc = std::abs(cur - prev);
      const bool persists = inc >= 0.95 * prev_inc && inc >= 1e-3 * std::max(1.0, std::abs(cur));
      streak = persists ? streak + 1 : 0;
      prev_inc = inc;
    }
    if (streak >= 3) {
      out.verdict = TailVerdict::Diverged;
      out.threshold = t;
      return out;
    }
    prev = cur;
  }
  out.verdict = TailVerdict::Inconclusive;
  out.threshold = t;
  return out;
}

}  // namespace malab

#endif
