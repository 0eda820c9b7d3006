#ifndef MALAB_WEIGHTS_HPP
#define MALAB_WEIGHTS_HPP

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "malab/errors.hpp"
#include "malab/interpolation.hpp"
#include "malab/quadrature.hpp"

namespace malab::weights {

enum class WeightFamily { PowerP, LogP, LogLogP, Tabulated };

const char* to_string(WeightFamily f);
WeightFamily family_from_string(const std::string& s);

/// An Orlicz weight w on [0, infinity). The named families are
///   PowerP   : w(t) = t^p
///   LogP     : w(t) = t (log(t+10))^p
///   LogLogP  : w(t) = t (log(t+10))^n (log log(t+10))^p
/// Tabulated weights carry monotone samples and are evaluated by monotone
/// cubic interpolation.
struct WeightSpec {
  WeightFamily family = WeightFamily::PowerP;
  double p = 2.0;
  int n = 1;
  std::vector<double> table_t, table_w;

  void validate() const;
  std::string label() const;
};

/// Closed-form evaluation of the named families, templated on the scalar so
/// tests can drive it at extended precision.
template <typename Scalar>
Scalar eval_weight_closed(WeightFamily family, Scalar p, int n, Scalar t) {
  using std::log;
  using std::pow;
  switch (family) {
    case WeightFamily::PowerP:
      return t == Scalar(0) ? Scalar(0) : pow(t, p);
    case WeightFamily::LogP:
      return t * pow(log(t + Scalar(10)), p);
    case WeightFamily::LogLogP:
      return t * pow(log(t + Scalar(10)), Scalar(n)) * pow(log(log(t + Scalar(10))), p);
    default:
      throw_domain("not-closed-form", "tabulated weight has no closed form");
  }
}

/// w(t). Tabulated specs use monotone cubic interpolation and reject
/// queries outside the table range.
double eval_weight(const WeightSpec& spec, double t);

/// Condition (K) verdicts.
enum class KVerdict { SatisfiesK, FailsK, Unknown };
const char* to_string(KVerdict v);

/// An increasing positive function h on [t_min, infinity), carried in log
/// form so that doubly-exponential growth stays representable.
struct TailFunction {
  std::function<double(double)> log_h;
  double t_min = 1.0;
  std::string label;
  std::optional<bool> integrable;  // analytic hint for int^infty dt/h, when known

  double h(double s) const { return std::exp(log_h(s)); }
};

TailFunction tail_power(double a, double t_min = 1.0);
TailFunction tail_exponential(double eps, double t_min = 0.0);
TailFunction tail_constant(double c, double t_min = 1.0);

struct KReport {
  KVerdict verdict = KVerdict::Unknown;
  std::optional<TailFunction> tail;
  std::string detail;
};

/// Classifies a named weight against condition (K) and attaches the tail
/// function extracted from the normalized growth ratio
///   h(s) = [ w(t) / (t (log t)^n) ]^{1/n},  t = exp(exp(s)).
/// Tabulated weights return Unknown with no tail.
KReport check_condition_K(const WeightSpec& spec);

/// Truncated tail integral I(T) = int_{t_min}^{T} dt / h(t) with a
/// doubling study of the cutoff.
TruncationStudy tail_integral_study(const TailFunction& tail, int max_doublings = 140,
                                    double rel_tol = 1e-6, double div_tol = 0.1);

/// A density sampled against a probability measure: values f_i >= 0 with
/// masses m_i > 0 summing to 1.
struct DensitySample {
  Eigen::ArrayXd f, m;

  DensitySample() = default;
  DensitySample(Eigen::ArrayXd values, Eigen::ArrayXd masses);

  static DensitySample uniform(Eigen::ArrayXd values);
};

/// Luxembourg norm: inf { r > 0 : sum_i m_i w(f_i / r) < w(1) }, resolved
/// as the equality root of the nonincreasing map r -> sum_i m_i w(f_i/r).
double luxembourg_norm(const DensitySample& f, const WeightSpec& spec, double rel_tol = 1e-10);

/// Tabulated convex conjugate w*(s) = sup_{t>=0} (s t - w(t)).
struct ConjugateTable {
  Eigen::ArrayXd s, w_star;
};

/// Linear-time monotone-supporting-point sweep over a dense t-grid with a
/// local ternary refinement per query point.
ConjugateTable legendre_conjugate(const WeightSpec& spec, const Eigen::ArrayXd& s_grid);

/// Conjugate of a tabulated convex function (exact for the polyline through
/// the samples). Rejects nonconvex tables.
Eigen::ArrayXd conjugate_of_table(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                                  const Eigen::ArrayXd& s_grid);

/// Pointwise w*(s) by bracketed ternary search (no grid).
double conjugate_point(const WeightSpec& spec, double s);

struct InverseConjugate {
  double s = 0.0;
  bool below_range = false;
};

/// h_HY(y) = (w*)^{-1}(y): monotone inversion of the conjugate by bisection.
InverseConjugate inverse_conjugate(const WeightSpec& spec, double y, double rel_tol = 1e-10);

/// (w*)^{-1} packaged as a TailFunction (increasing, unbounded).
TailFunction conjugate_inverse_tail(const WeightSpec& spec);

}  // namespace malab::weights

#endif
