#include "malab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace malab::radial {

namespace {

constexpr double kPi = 3.14159265358979323846264338;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(10000 - t) at x = log(-t), stable for all x
double log_u(double x) {
  if (x < 30.0) return std::log(std::exp(x) + 10000.0);
  return x + std::log1p(10000.0 * std::exp(-x));
}

// Integral of exp(L(x)) dx over [a, b], switching to a log abscissa past
// x = 20 so that cutoffs like x = 1e13 stay resolved.
double integral_logx(const std::function<double(double)>& L, double a, double b) {
  if (b <= a) return 0.0;
  const double split = 20.0;
  double acc = 0.0;
  const double b0 = std::min(b, split);
  if (b0 > a) {
    const std::size_t panels = std::max<std::size_t>(256, std::size_t(96.0 * (b0 - a)));
    acc += simpson_log(L, a, b0, panels);
  }
  if (b > split) {
    const double va = std::log(std::max(a, split));
    const double vb = std::log(b);
    const std::size_t panels = std::max<std::size_t>(256, std::size_t(192.0 * (vb - va)));
    acc += simpson_log([&](double v) { return L(std::exp(v)) + v; }, va, vb, panels);
  }
  return acc;
}

}  // namespace

double pinned_cn(int n) {
  if (n != 1 && n != 2) throw_domain("bad-dimension", "c_n pinned for n in {1,2}");
  // Discrete complex Hessian of v = |z|^2 on a local stencil, spacing d,
  // evaluated off-center; second differences are exact on quadratics.
  const double d = 1.0 / 64.0;
  const double inv_d2 = 1.0 / (d * d);
  auto v = [n](double x1, double y1, double x2, double y2) {
    double s = x1 * x1 + y1 * y1;
    if (n == 2) s += x2 * x2 + y2 * y2;
    return s;
  };
  const double cx = 0.31, cy = 0.17, cz = -0.05, cw = 0.23;
  auto dxx = [&](int axis_a) {
    double p[4] = {cx, cy, cz, cw}, m[4] = {cx, cy, cz, cw};
    p[axis_a] += d;
    m[axis_a] -= d;
    return (v(p[0], p[1], p[2], p[3]) + v(m[0], m[1], m[2], m[3]) - 2.0 * v(cx, cy, cz, cw)) *
           inv_d2;
  };
  auto dij = [&](int a, int b) {
    double pp[4] = {cx, cy, cz, cw}, pm[4] = {cx, cy, cz, cw};
    double mp[4] = {cx, cy, cz, cw}, mm[4] = {cx, cy, cz, cw};
    pp[a] += d; pp[b] += d;
    pm[a] += d; pm[b] -= d;
    mp[a] -= d; mp[b] += d;
    mm[a] -= d; mm[b] -= d;
    return (v(pp[0], pp[1], pp[2], pp[3]) - v(pm[0], pm[1], pm[2], pm[3]) -
            v(mp[0], mp[1], mp[2], mp[3]) + v(mm[0], mm[1], mm[2], mm[3])) * 0.25 * inv_d2;
  };
  double det;
  if (n == 1) {
    det = 0.25 * (dxx(0) + dxx(1));
  } else {
    const double a = 0.25 * (dxx(0) + dxx(1));
    const double c = 0.25 * (dxx(2) + dxx(3));
    const double re = 0.25 * (dij(0, 2) + dij(1, 3));
    const double im = 0.25 * (dij(0, 3) - dij(1, 2));
    det = a * c - re * re - im * im;
  }
  if (std::abs(det - 1.0) > 1e-9)
    throw_convergence("cn-oracle", "discrete Hessian of |z|^2 is off its exact value");
  // form algebra of (i/pi) d dbar: (dd^c v)^n = (2^n n! / pi^n) det(H) dV
  const double fact = (n == 1) ? 1.0 : 2.0;
  return det * std::pow(2.0, n) * fact / std::pow(kPi, n);
}

void RadialProfile::validate() const {
  if (n < 1) throw_domain("bad-dimension", "profile dimension must be >= 1");
  if (kind != ProfileKind::Sampled) return;
  const std::size_t m = ts.size();
  if (m < 4 || chis.size() != m || chi1s.size() != m || chi2s.size() != m)
    throw_domain("bad-profile", "sampled profile needs matching tables of length >= 4");
  for (std::size_t i = 0; i < m; ++i) {
    if (!(ts[i] < 0)) throw_domain("bad-profile", "profile abscissae must be negative");
    if (i + 1 < m && !(ts[i] < ts[i + 1]))
      throw_domain("bad-profile", "profile abscissae must increase");
    if (chi1s[i] < 0) throw_domain("bad-profile", "chi' must be nonnegative");
    if (chi2s[i] < -1e-10 * std::max(1.0, std::abs(chi2s[i])))
      throw_domain("bad-profile", "chi'' must be nonnegative (convexity)");
  }
}

double RadialProfile::chi(double t) const {
  if (t > 0) throw_domain("positive-argument", "profiles live on t <= 0");
  switch (kind) {
    case ProfileKind::TripleLog:
      return -std::log(std::log(std::log(10000.0 - t)));
    case ProfileKind::Exponential:
      return std::exp(t) - 1.0;
    case ProfileKind::Linear:
      return t;
    default:
      return (*interp_chi)(t);
  }
}

double RadialProfile::chi1(double t) const {
  if (t > 0) throw_domain("positive-argument", "profiles live on t <= 0");
  switch (kind) {
    case ProfileKind::TripleLog: {
      const double u = 10000.0 - t;
      const double lu = std::log(u), llu = std::log(lu);
      return 1.0 / (u * lu * llu);
    }
    case ProfileKind::Exponential:
      return std::exp(t);
    case ProfileKind::Linear:
      return 1.0;
    default:
      return (*interp_chi1)(t);
  }
}

double RadialProfile::chi2(double t) const {
  if (t > 0) throw_domain("positive-argument", "profiles live on t <= 0");
  switch (kind) {
    case ProfileKind::TripleLog: {
      const double u = 10000.0 - t;
      const double lu = std::log(u), llu = std::log(lu);
      const double denom = u * lu * llu;
      return (lu * llu + llu + 1.0) / (denom * denom);
    }
    case ProfileKind::Exponential:
      return std::exp(t);
    case ProfileKind::Linear:
      return 0.0;
    default:
      return (*interp_chi2)(t);
  }
}

double RadialProfile::log_chi1_x(double x) const {
  switch (kind) {
    case ProfileKind::TripleLog: {
      const double lu = log_u(x);
      const double llu = std::log(lu);
      return -(lu + std::log(lu) + std::log(llu));
    }
    case ProfileKind::Exponential:
      return -std::exp(x);
    case ProfileKind::Linear:
      return 0.0;
    default: {
      const double t = -std::exp(x);
      const double c1 = chi1(t);
      return c1 > 0 ? std::log(c1) : kNegInf;
    }
  }
}

double RadialProfile::log_chi2_x(double x) const {
  switch (kind) {
    case ProfileKind::TripleLog: {
      const double lu = log_u(x);
      const double llu = std::log(lu);
      return std::log(lu * llu + llu + 1.0) - 2.0 * (lu + std::log(lu) + std::log(llu));
    }
    case ProfileKind::Exponential:
      return -std::exp(x);
    case ProfileKind::Linear:
      return kNegInf;
    default: {
      const double t = -std::exp(x);
      const double c2 = chi2(t);
      return c2 > 0 ? std::log(c2) : kNegInf;
    }
  }
}

RadialProfile triple_log(int n) {
  RadialProfile p;
  p.kind = ProfileKind::TripleLog;
  p.n = n;
  return p;
}

RadialProfile exponential(int n) {
  RadialProfile p;
  p.kind = ProfileKind::Exponential;
  p.n = n;
  return p;
}

RadialProfile linear(int n) {
  RadialProfile p;
  p.kind = ProfileKind::Linear;
  p.n = n;
  return p;
}

RadialProfile sampled(int n, std::vector<double> ts, std::vector<double> chis,
                      std::vector<double> chi1s, std::vector<double> chi2s) {
  RadialProfile p;
  p.kind = ProfileKind::Sampled;
  p.n = n;
  p.ts = std::move(ts);
  p.chis = std::move(chis);
  p.chi1s = std::move(chi1s);
  p.chi2s = std::move(chi2s);
  p.validate();
  p.interp_chi = std::make_shared<const MonotoneCubic>(p.ts, p.chis);
  p.interp_chi1 = std::make_shared<const MonotoneCubic>(p.ts, p.chi1s);
  p.interp_chi2 = std::make_shared<const MonotoneCubic>(p.ts, p.chi2s);
  p.t_cut = p.ts.front();
  return p;
}

double forward_density(const RadialProfile& profile, double t) {
  if (t > 0) throw_domain("positive-argument", "forward density needs t <= 0");
  const int n = profile.n;
  const double cn = pinned_cn(n);
  if (t > -1e100) {
    const double c1 = profile.chi1(t);
    const double c2 = profile.chi2(t);
    if (c2 == 0.0) return 0.0;
    const double lg = std::log(cn) + (n - 1) * std::log(c1) + std::log(c2) - n * t;
    return std::exp(lg);
  }
  return std::exp(forward_log_density_x(profile, std::log(-t)));
}

double forward_log_density_x(const RadialProfile& profile, double x) {
  const int n = profile.n;
  const double cn = pinned_cn(n);
  const double l1 = profile.log_chi1_x(x);
  const double l2 = profile.log_chi2_x(x);
  if (l2 == kNegInf) return kNegInf;
  return std::log(cn) + (n - 1) * l1 + l2 + n * std::exp(x);
}

DensityProfile forward_density_profile(const RadialProfile& profile) {
  DensityProfile F;
  F.n = profile.n;
  F.c_n = pinned_cn(profile.n);
  RadialProfile p = profile;
  const int n = profile.n;
  const double log_cn = std::log(F.c_n);
  F.F = [p](double t) { return forward_density(p, t); };
  if (profile.has_log_domain()) {
    F.log_F_x = [p](double x) { return forward_log_density_x(p, x); };
    F.log_F_mass_x = [p, n, log_cn](double x) {
      const double l2 = p.log_chi2_x(x);
      if (l2 == kNegInf) return kNegInf;
      return log_cn + (n - 1) * p.log_chi1_x(x) + l2;
    };
  } else {
    F.log_F_mass_x = [p, n, log_cn](double x) {
      const double t = -std::exp(x);
      const double c2 = p.chi2(t);
      if (!(c2 > 0)) return kNegInf;
      return log_cn + (n - 1) * std::log(p.chi1(t)) + std::log(c2);
    };
  }
  return F;
}

RadialProfile inverse_profile(const DensityProfile& F, const InverseOptions& opt) {
  const int n = F.n;
  if (n < 1) throw_domain("bad-dimension", "density profile dimension must be >= 1");
  const double cn = (F.c_n > 0) ? F.c_n : pinned_cn(n);
  auto log_F = [&](double x) -> double {
    if (F.log_F_x) return (*F.log_F_x)(x);
    const double val = F.F(-std::exp(x));
    if (val < 0) throw_domain("negative-density", "density profile must be >= 0");
    return val > 0 ? std::log(val) : kNegInf;
  };
  // log of F(s) e^{n s} at sigma = log(-s); prefer the analytically
  // cancelled product when the caller provides it
  auto log_mass = [&](double s) -> double {
    if (F.log_F_mass_x) return (*F.log_F_mass_x)(s);
    return log_F(s) - n * std::exp(s);
  };
  // integrand of the inner integral in sigma = log(-s):
  //   F(s) e^{n s} ds = exp(log_mass + sigma) dsigma
  auto inner_log = [&](double s) { return log_mass(s) + s; };

  // extend the top until the integrand is negligible; growing values mean
  // the inner integral diverges at -infinity
  double x_top = std::max(opt.x_hi + 4.0, 8.0);
  for (int guard = 0;; ++guard) {
    const double cur = inner_log(x_top);
    if (cur < -60.0) break;
    if (guard > 100 || (cur > inner_log(x_top - 1.0) && cur > -20.0))
      throw_domain("non-integrable-density",
                   "inner integral of F e^{ns} diverges near -infinity");
    x_top += 4.0;
  }

  // cumulative trapezoid of the inner integral from the top down
  const double h = opt.step;
  const int m = int(std::ceil((x_top - opt.x_lo) / h));
  std::vector<double> xs(m + 1), gv(m + 1);
  for (int i = 0; i <= m; ++i) {
    xs[i] = opt.x_lo + (x_top - opt.x_lo) * double(i) / m;
    const double lg = inner_log(xs[i]);
    gv[i] = lg > -700.0 ? std::exp(lg) : 0.0;
  }
  const double hh = (x_top - opt.x_lo) / m;
  std::vector<double> inner(m + 1);
  inner[m] = 0.0;
  for (int i = m - 1; i >= 0; --i) inner[i] = inner[i + 1] + 0.5 * hh * (gv[i] + gv[i + 1]);

  // chi' on the requested subrange, then chi by a second quadrature
  const int k_hi = int(std::floor((opt.x_hi - opt.x_lo) / hh));
  std::vector<double> t_out, chi1_out, chi2_out;
  std::vector<double> p_cum(k_hi + 1, 0.0);
  std::vector<double> chi1_grid(k_hi + 1);
  for (int i = 0; i <= k_hi; ++i)
    chi1_grid[i] = std::pow(std::max(inner[i], 0.0) * double(n) / cn, 1.0 / n);
  for (int i = 1; i <= k_hi; ++i) {
    const double e0 = std::exp(xs[i - 1]), e1 = std::exp(xs[i]);
    p_cum[i] = p_cum[i - 1] + 0.5 * hh * (chi1_grid[i - 1] * e0 + chi1_grid[i] * e1);
  }
  const double tail0 = chi1_grid[0] * std::exp(xs[0]);

  // assemble in increasing t (descending x)
  for (int i = k_hi; i >= 0; --i) {
    const double x = xs[i];
    const double t = -std::exp(x);
    const double c1 = chi1_grid[i];
    double c2 = 0.0;
    if (inner[i] > 0.0 && c1 > 0.0) {
      const double lg = log_F(x) + n * t - std::log(cn) - (n - 1) * std::log(c1);
      c2 = lg > -700.0 ? std::exp(lg) : 0.0;
    }
    t_out.push_back(t);
    chi1_out.push_back(c1);
    chi2_out.push_back(c2);
  }
  std::vector<double> chi_out(t_out.size());
  for (std::size_t j = 0; j < t_out.size(); ++j) {
    const int i = k_hi - int(j);
    chi_out[j] = -(p_cum[i] + tail0);
  }
  // anchor chi(0) = 0: the table ends at t = -e^{x_lo}, where chi is -tail0
  return sampled(n, std::move(t_out), std::move(chi_out), std::move(chi1_out),
                 std::move(chi2_out));
}

namespace {

std::function<double(double)> integrability_log_integrand(const RadialProfile& profile,
                                                          const weights::TailFunction& h) {
  const RadialProfile p = profile;
  const weights::TailFunction tail = h;
  const int n = profile.n;
  return [p, tail, n](double x) {
    return p.log_chi2_x(x) + (n - 1) * p.log_chi1_x(x) + n * x + n * tail.log_h(x) + x;
  };
}

}  // namespace

IntegrabilityResult integrability_functional(const RadialProfile& profile,
                                             const weights::TailFunction& h, double T) {
  profile.validate();
  if (!(T < -std::exp(1.0))) throw_domain("bad-truncation", "need T < -e");
  if (h.t_min > 1.0 + 1e-12)
    throw_domain("h-domain", "tail h undefined at log|t| = 1, i.e. t = " +
                                 std::to_string(-std::exp(h.t_min)) + " inward");
  if (profile.kind == ProfileKind::Sampled && T < profile.ts.front())
    throw_domain("bad-truncation", "T below the sampled range of the profile");

  auto L = integrability_log_integrand(profile, h);
  auto eval = [&](double Tcur) { return integral_logx(L, 1.0, std::log(-Tcur)); };

  IntegrabilityResult out;
  out.value = eval(T);

  double t_limit = (profile.kind == ProfileKind::Sampled) ? profile.ts.front() : -1e290;
  auto study = truncation_study(
      [&](double Tc) { return eval(std::max(Tc, t_limit)); }, T,
      [&](double Tc) { return std::max(2.0 * Tc, -1e290); }, 24, 1e-3, 0.1,
      DivergenceMode::RelativeChange);
  out.verdict = study.verdict;
  out.last_rel_change = study.last_rel_change;

  // same integral written in the s = log|t| variable, different rule and step
  {
    const double X = std::log(-T);
    const int m = int(std::ceil((X - 1.0) * 100));
    double acc = 0.0, prev = std::exp(L(1.0));
    for (int i = 1; i <= m; ++i) {
      const double s = 1.0 + (X - 1.0) * double(i) / m;
      const double cur = std::exp(L(s));
      acc += 0.5 * (X - 1.0) / m * (prev + cur);
      prev = cur;
    }
    out.substituted_value = acc;
  }
  // the asymptotic tail shape int h(s)^n / (s^n (log s)^n) ds
  {
    const double X = std::log(-T);
    const int n = profile.n;
    if (X > 3.0)
      out.asymptotic_form_value = integral_logx(
          [&](double s) { return n * h.log_h(s) - n * std::log(s) - n * std::log(std::log(s)); },
          3.0, X);
  }
  return out;
}

BoundednessResult is_bounded_profile(const RadialProfile& profile) {
  profile.validate();
  // near-zero part: t in (-e, 0] contributes a bounded piece
  const double near0 = simpson<double>([&](double t) { return profile.chi1(t); },
                                       -std::exp(1.0), 0.0, 512);
  auto L = [&](double x) { return profile.log_chi1_x(x) + x; };
  double x_limit = std::numeric_limits<double>::infinity();
  if (profile.kind == ProfileKind::Sampled) x_limit = std::log(-profile.ts.front());
  auto eval = [&](double X) { return near0 + integral_logx(L, 1.0, std::min(X, x_limit)); };

  const int max_steps = 42;
  auto study = truncation_study(eval, 4.0, [&](double X) { return std::min(2.0 * X, 1e13); },
                                max_steps, 1e-6, 0.1, DivergenceMode::GrowingIncrements);
  BoundednessResult out;
  out.verdict = study.verdict;
  if (profile.kind == ProfileKind::Sampled && study.threshold >= x_limit &&
      study.verdict == TailVerdict::Converged) {
    // the sampled domain ended before the study could distinguish; demote
    out.verdict = TailVerdict::Inconclusive;
  }
  out.tail_integral = study.value;
  out.deepest_x = study.threshold;
  return out;
}

RigidityReport rigidity_chain(const RadialProfile& profile, double p, double T) {
  profile.validate();
  const int n = profile.n;
  if (!(p > n - 1)) throw_precondition("bad-exponent", "rigidity chain needs p > n-1");
  if (!(T < -std::exp(1.0))) throw_domain("bad-truncation", "need T < -e");
  const double X = std::log(-T);

  auto LA = [&](double x) {
    return n * profile.log_chi1_x(x) + (n - 1) * x + p * std::log(x) + x;
  };
  auto LAm = [&](double x) {
    return n * profile.log_chi1_x(x) + (n - 1) * x + (p - 1.0) * std::log(x) + x;
  };
  auto LB = [&](double x) {
    return profile.log_chi2_x(x) + (n - 1) * profile.log_chi1_x(x) + n * x + p * std::log(x) +
           x;
  };
  auto LC = [&](double x) { return profile.log_chi1_x(x) + x; };

  RigidityReport rep;
  rep.A = integral_logx(LA, 1.0, X);
  rep.A_minus = integral_logx(LAm, 1.0, X);
  rep.B = integral_logx(LB, 1.0, X);
  rep.C = integral_logx(LC, 1.0, X);

  auto boundary_val = [&](double x) {
    return std::exp(n * profile.log_chi1_x(x) + n * x + p * std::log(x));
  };
  rep.boundary = boundary_val(1.0) - boundary_val(X);
  const double lhs = n * rep.A;
  const double rhs = n * rep.B - p * rep.A_minus - rep.boundary;
  rep.ibp_residual = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
  rep.ratio_AB = rep.B > 0 ? rep.A / rep.B : std::numeric_limits<double>::infinity();

  if (n > 1) {
    rep.D_display =
        integral_logx([&](double x) { return x + p / (n - 1.0) * std::log(x) + x; }, 1.0, X);
    rep.D_sharp =
        integral_logx([&](double x) { return -x - p / (n - 1.0) * std::log(x) + x; }, 1.0, X);
    const double e1 = 1.0 / n, e2 = 1.0 - 1.0 / n;
    rep.holder_sharp_ok =
        rep.C <= std::pow(rep.A, e1) * std::pow(rep.D_sharp, e2) * (1.0 + 1e-9) + 1e-12;
    rep.holder_display_ok =
        rep.C <= std::pow(rep.A, e1) * std::pow(rep.D_display, e2) * (1.0 + 1e-9) + 1e-12;
  } else {
    rep.D_display = rep.D_sharp = std::numeric_limits<double>::quiet_NaN();
    rep.holder_sharp_ok = rep.C <= rep.A * (1.0 + 1e-9) + 1e-12;
    rep.holder_display_ok = rep.holder_sharp_ok;
  }

  double x_limit = std::numeric_limits<double>::infinity();
  if (profile.kind == ProfileKind::Sampled) x_limit = std::log(-profile.ts.front());
  auto flag_of = [&](const std::function<double(double)>& L) {
    auto study = truncation_study(
        [&](double Xc) { return integral_logx(L, 1.0, std::min(Xc, x_limit)); }, 4.0,
        [&](double Xc) { return std::min(2.0 * Xc, 1e10); }, 30, 1e-6, 0.1,
        DivergenceMode::GrowingIncrements);
    return study.verdict;
  };
  rep.flag_A = flag_of(LA);
  rep.flag_B = flag_of(LB);
  rep.flag_C = flag_of(LC);
  return rep;
}

}  // namespace malab::radial
