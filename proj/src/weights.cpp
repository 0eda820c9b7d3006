#include "malab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace malab::weights {

const char* to_string(WeightFamily f) {
  switch (f) {
    case WeightFamily::PowerP: return "powerp";
    case WeightFamily::LogP: return "logp";
    case WeightFamily::LogLogP: return "loglogp";
    default: return "tabulated";
  }
}

WeightFamily family_from_string(const std::string& s) {
  if (s == "powerp") return WeightFamily::PowerP;
  if (s == "logp") return WeightFamily::LogP;
  if (s == "loglogp") return WeightFamily::LogLogP;
  if (s == "tabulated") return WeightFamily::Tabulated;
  throw_domain("unknown-family", "unknown weight family: " + s);
}

void WeightSpec::validate() const {
  if (n < 1) throw_domain("bad-dimension", "weight dimension n must be >= 1");
  if (!std::isfinite(p)) throw_domain("bad-exponent", "weight exponent p must be finite");
  if (family == WeightFamily::Tabulated) {
    if (table_t.size() != table_w.size() || table_t.size() < 2)
      throw_domain("bad-table", "tabulated weight needs matching samples, at least two");
    for (std::size_t i = 0; i + 1 < table_t.size(); ++i) {
      if (!(table_t[i] < table_t[i + 1]))
        throw_domain("bad-table", "tabulated abscissae must increase");
      if (table_w[i] > table_w[i + 1])
        throw_domain("bad-table", "tabulated weight must be nondecreasing");
    }
  } else if (family != WeightFamily::PowerP && p < 0) {
    throw_domain("bad-exponent", "log-family exponent p must be >= 0");
  }
}

std::string WeightSpec::label() const {
  std::string out = to_string(family);
  if (family != WeightFamily::Tabulated) {
    out += "_p" + std::to_string(p);
    if (family != WeightFamily::PowerP) out += "_n" + std::to_string(n);
  }
  return out;
}

double eval_weight(const WeightSpec& spec, double t) {
  if (t < 0) throw_domain("negative-argument", "weight argument must be >= 0");
  if (spec.family == WeightFamily::Tabulated) {
    MonotoneCubic interp(spec.table_t, spec.table_w);
    return interp(t);
  }
  return eval_weight_closed<double>(spec.family, spec.p, spec.n, t);
}

const char* to_string(KVerdict v) {
  switch (v) {
    case KVerdict::SatisfiesK: return "SatisfiesK";
    case KVerdict::FailsK: return "FailsK";
    default: return "Unknown";
  }
}

TailFunction tail_power(double a, double t_min) {
  TailFunction tf;
  tf.log_h = [a](double s) { return a * std::log(s); };
  tf.t_min = t_min;
  tf.label = "s^" + std::to_string(a);
  tf.integrable = (a > 1.0);
  return tf;
}

TailFunction tail_exponential(double eps, double t_min) {
  TailFunction tf;
  tf.log_h = [eps](double s) { return eps * s; };
  tf.t_min = t_min;
  tf.label = "exp(" + std::to_string(eps) + " s)";
  tf.integrable = (eps > 0.0);
  return tf;
}

TailFunction tail_constant(double c, double t_min) {
  if (c <= 0) throw_domain("bad-tail", "constant tail must be positive");
  TailFunction tf;
  const double lc = std::log(c);
  tf.log_h = [lc](double) { return lc; };
  tf.t_min = t_min;
  tf.label = "const " + std::to_string(c);
  tf.integrable = false;
  return tf;
}

namespace {

// log(log(t+10)) with t = exp(exp(s)), stable for arbitrarily large s.
double log_log_t10(double s) {
  const double es = std::exp(s);
  if (es > 600.0) return s;  // log(t+10) = e^s to double precision
  const double t = std::exp(es);
  return std::log(std::log(t + 10.0));
}

TailFunction extracted_tail(const WeightSpec& spec) {
  TailFunction tf;
  const double p = spec.p;
  const int n = spec.n;
  switch (spec.family) {
    case WeightFamily::PowerP:
      // h(s) = exp( ((p-1)/n) e^s - s )
      tf.log_h = [p, n](double s) { return (p - 1.0) / n * std::exp(s) - s; };
      tf.t_min = (p > 1.0) ? std::max(1.0, std::log(n / (p - 1.0)) + 0.5) : 1.0;
      tf.label = "exp(((p-1)/n) e^s - s)";
      tf.integrable = (p > 1.0);
      break;
    case WeightFamily::LogP:
      // h(s) = (log(t+10) / log t)^{p/n} * e^{(p-n) s / n}
      tf.log_h = [p, n](double s) { return (p / n) * log_log_t10(s) - s; };
      tf.t_min = 2.0;
      tf.label = "~ e^{(p-n)s/n}";
      tf.integrable = (p > n);
      break;
    case WeightFamily::LogLogP:
      // h(s) = (log(t+10)/log t) * (log log(t+10))^{p/n} ~ s^{p/n}
      tf.log_h = [p, n](double s) {
        const double llt = log_log_t10(s);
        return (llt - s) + (p / n) * std::log(llt);
      };
      tf.t_min = 2.0;
      tf.label = "~ s^{p/n}";
      tf.integrable = (p > n);
      break;
    default:
      throw_domain("no-tail", "tabulated weights have no canonical tail");
  }
  return tf;
}

}  // namespace

KReport check_condition_K(const WeightSpec& spec) {
  spec.validate();
  KReport rep;
  if (spec.family == WeightFamily::Tabulated) {
    rep.verdict = KVerdict::Unknown;
    rep.detail = "tabulated weight: asymptotics not recoverable from a finite table";
    return rep;
  }
  const double p = spec.p;
  const int n = spec.n;
  bool sat = false;
  switch (spec.family) {
    case WeightFamily::PowerP:
      sat = (p > 1.0);
      rep.detail = sat ? "t^p with p > 1" : "t^p with p <= 1";
      break;
    case WeightFamily::LogP:
      sat = (p > n);
      rep.detail = sat ? "t (log(t+10))^p with p > n" : "t (log(t+10))^p with p <= n";
      break;
    case WeightFamily::LogLogP:
      sat = (p > n);
      rep.detail = sat ? "t (log(t+10))^n (loglog(t+10))^p with p > n"
                       : "t (log(t+10))^n (loglog(t+10))^p with p <= n";
      break;
    default:
      break;
  }
  rep.verdict = sat ? KVerdict::SatisfiesK : KVerdict::FailsK;
  rep.tail = extracted_tail(spec);
  return rep;
}

TruncationStudy tail_integral_study(const TailFunction& tail, int max_doublings,
                                    double rel_tol, double div_tol) {
  const double s0 = tail.t_min;
  // I(T) = int_{s0}^{T} ds / h(s), evaluated on a log abscissa u = log s so
  // that cutoffs up to ~1e40 stay resolved.
  auto eval = [&](double T) {
    const double u_lo = std::log(s0);
    const double u_hi = std::log(T);
    const std::size_t panels = std::max<std::size_t>(512, std::size_t(64 * (u_hi - u_lo)));
    return simpson_log([&](double u) { return u - tail.log_h(std::exp(u)); }, u_lo, u_hi,
                       panels);
  };
  return truncation_study(eval, 2.0 * s0, [](double T) { return 2.0 * T; }, max_doublings,
                          rel_tol, div_tol, DivergenceMode::GrowingIncrements);
}

DensitySample::DensitySample(Eigen::ArrayXd values, Eigen::ArrayXd masses)
    : f(std::move(values)), m(std::move(masses)) {
  if (f.size() != m.size() || f.size() == 0)
    throw_domain("bad-sample", "density values and masses must match and be nonempty");
  if ((f < 0).any()) throw_domain("bad-sample", "density values must be >= 0");
  if ((m <= 0).any()) throw_domain("bad-sample", "masses must be > 0");
  if (std::abs(m.sum() - 1.0) > 1e-12)
    throw_domain("bad-sample", "masses must sum to 1 within 1e-12");
}

DensitySample DensitySample::uniform(Eigen::ArrayXd values) {
  Eigen::ArrayXd masses = Eigen::ArrayXd::Constant(values.size(), 1.0 / double(values.size()));
  // renormalize the rounding residue onto the last mass
  masses(masses.size() - 1) += 1.0 - masses.sum();
  return DensitySample(std::move(values), std::move(masses));
}

namespace {

// Smallest t with w(t) >= target, located by doubling (t capped at 1e300).
double weight_upper_inverse(const WeightSpec& spec, double target) {
  double t = 1.0;
  for (int i = 0; i < 1100 && eval_weight(spec, t) < target; ++i) t *= 2.0;
  return t;
}

}  // namespace

double luxembourg_norm(const DensitySample& f, const WeightSpec& spec, double rel_tol) {
  spec.validate();
  const double max_f = f.f.maxCoeff();
  if (max_f == 0.0) return 0.0;
  const double w1 = eval_weight(spec, 1.0);
  if (!(w1 > 0)) throw_precondition("w1-not-positive", "Luxembourg norm needs w(1) > 0");

  auto G = [&](double r) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < f.f.size(); ++i) acc += f.m(i) * eval_weight(spec, f.f(i) / r);
    return acc - w1;
  };

  double hi = max_f;
  if (G(hi) >= 0.0) return hi;  // ties resolve to the equality root

  const double m_min = f.m.minCoeff();
  double lo = max_f / weight_upper_inverse(spec, w1 / m_min + w1 + 1.0);
  for (int i = 0; i < 200 && G(lo) < 0.0; ++i) lo *= 0.5;
  return bisect(G, lo, hi, rel_tol);
}

namespace {

void reject_if_nonconvex_samples(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
  for (Eigen::Index i = 0; i + 2 < x.size(); ++i) {
    const double s0 = (y(i + 1) - y(i)) / (x(i + 1) - x(i));
    const double s1 = (y(i + 2) - y(i + 1)) / (x(i + 2) - x(i + 1));
    const double scale = std::max({std::abs(s0), std::abs(s1), 1.0});
    if (s1 < s0 - 1e-9 * scale)
      throw_domain("convexity-violation", "tabulated function is not convex");
  }
}

void check_spec_convexity(const WeightSpec& spec) {
  if (spec.family == WeightFamily::Tabulated) {
    Eigen::Map<const Eigen::ArrayXd> x(spec.table_t.data(), Eigen::Index(spec.table_t.size()));
    Eigen::Map<const Eigen::ArrayXd> y(spec.table_w.data(), Eigen::Index(spec.table_w.size()));
    reject_if_nonconvex_samples(x, y);
    return;
  }
  if (spec.family == WeightFamily::PowerP && spec.p < 1.0)
    throw_domain("convexity-violation", "t^p is not convex for p < 1");
  // sampled check for the log families
  Eigen::ArrayXd x(64), y(64);
  for (int i = 0; i < 64; ++i) {
    x(i) = std::pow(10.0, -2.0 + 8.0 * i / 63.0);
    y(i) = eval_weight(spec, x(i));
  }
  reject_if_nonconvex_samples(x, y);
}

// Supporting-point value of s t - w(t).
double fenchel_value(const WeightSpec& spec, double s, double t) {
  return s * t - eval_weight(spec, t);
}

// Ternary refinement of sup_t (s t - w(t)) on [a, b].
double refine_max(const WeightSpec& spec, double s, double a, double b) {
  for (int i = 0; i < 200 && (b - a) > 1e-14 * std::max(1.0, b); ++i) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (fenchel_value(spec, s, m1) < fenchel_value(spec, s, m2))
      a = m1;
    else
      b = m2;
  }
  const double mid = 0.5 * (a + b);
  return std::max({fenchel_value(spec, s, mid), fenchel_value(spec, s, a),
                   fenchel_value(spec, s, b), 0.0});
}

// Numerical slope of w at t (forward difference with relative step).
double weight_slope(const WeightSpec& spec, double t) {
  const double h = std::max(1e-8, 1e-8 * t);
  return (eval_weight(spec, t + h) - eval_weight(spec, t)) / h;
}

double slope_bracket(const WeightSpec& spec, double s_max) {
  double t = 1.0;
  for (int i = 0; i < 80; ++i) {
    if (weight_slope(spec, t) >= s_max) return t;
    t *= 2.0;
    if (t > 1e15)
      throw_domain("conjugate-infinite",
                   "weight slope stays below the requested s range; conjugate is infinite there");
  }
  return t;
}

}  // namespace

double conjugate_point(const WeightSpec& spec, double s) {
  if (s < 0) throw_domain("negative-argument", "conjugate evaluated at s < 0");
  if (s == 0.0) return 0.0;  // sup of -w(t) is attained at t = 0 when w(0) = 0
  const double t_hi = slope_bracket(spec, s);
  return refine_max(spec, s, 0.0, t_hi);
}

ConjugateTable legendre_conjugate(const WeightSpec& spec, const Eigen::ArrayXd& s_grid) {
  spec.validate();
  check_spec_convexity(spec);
  if (s_grid.size() == 0) throw_domain("empty-grid", "conjugate grid empty");
  for (Eigen::Index i = 0; i + 1 < s_grid.size(); ++i)
    if (!(s_grid(i) < s_grid(i + 1))) throw_domain("bad-grid", "s grid must increase");
  if (s_grid(0) < 0) throw_domain("bad-grid", "s grid must be >= 0");

  const double s_max = s_grid(s_grid.size() - 1);
  const double t_max = (s_max == 0.0) ? 1.0 : slope_bracket(spec, s_max);

  // dense candidate grid, quadratically clustered near 0
  const int K = 8192;
  Eigen::ArrayXd tc(K + 1);
  for (int j = 0; j <= K; ++j) {
    const double u = double(j) / K;
    tc(j) = t_max * u * u;
  }
  Eigen::ArrayXd wc(K + 1);
  for (int j = 0; j <= K; ++j) wc(j) = eval_weight(spec, tc(j));

  ConjugateTable out;
  out.s = s_grid;
  out.w_star.resize(s_grid.size());
  int j = 0;
  for (Eigen::Index i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid(i);
    while (j + 1 <= K && s * tc(j + 1) - wc(j + 1) >= s * tc(j) - wc(j)) ++j;
    const double a = tc(std::max(j - 1, 0));
    const double b = tc(std::min(j + 1, K));
    out.w_star(i) = refine_max(spec, s, a, b);
  }
  return out;
}

Eigen::ArrayXd conjugate_of_table(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                                  const Eigen::ArrayXd& s_grid) {
  if (x.size() != y.size() || x.size() < 2) throw_domain("bad-table", "conjugate table too small");
  reject_if_nonconvex_samples(x, y);
  Eigen::ArrayXd out(s_grid.size());
  int j = 0;
  const int K = int(x.size()) - 1;
  for (Eigen::Index i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid(i);
    while (j + 1 <= K && s * x(j + 1) - y(j + 1) >= s * x(j) - y(j)) ++j;
    out(i) = s * x(j) - y(j);
  }
  return out;
}

InverseConjugate inverse_conjugate(const WeightSpec& spec, double y, double rel_tol) {
  InverseConjugate out;
  if (y < 0) {
    out.s = 0.0;
    out.below_range = true;
    return out;
  }
  if (y == 0.0) {
    out.s = 0.0;  // smallest s with w*(s) = 0
    return out;
  }
  double hi = 1.0;
  for (int i = 0; i < 400 && conjugate_point(spec, hi) < y; ++i) hi *= 2.0;
  out.s = bisect([&](double s) { return conjugate_point(spec, s) - y; }, 0.0, hi, rel_tol);
  return out;
}

TailFunction conjugate_inverse_tail(const WeightSpec& spec) {
  TailFunction tf;
  tf.log_h = [spec](double y) { return std::log(inverse_conjugate(spec, y).s); };
  tf.t_min = 0.0;
  tf.label = "(w*)^{-1} of " + spec.label();
  return tf;
}

}  // namespace malab::weights
