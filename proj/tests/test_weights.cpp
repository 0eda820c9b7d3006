#include "doctest.h"

#include <cmath>
#include <vector>

#include "malab/rng.hpp"
#include "malab/weights.hpp"

using namespace malab;
using namespace malab::weights;

namespace {

// Independent extended-precision evaluation of the named weights, composed
// through logs rather than direct products.
long double hp_weight(WeightFamily fam, long double p, int n, long double t) {
  if (t == 0.0L) return 0.0L;
  const long double lt10 = logl(t + 10.0L);
  switch (fam) {
    case WeightFamily::PowerP:
      return expl(p * logl(t));
    case WeightFamily::LogP:
      return expl(logl(t) + p * logl(lt10));
    default:
      return expl(logl(t) + (long double)n * logl(lt10) + p * logl(logl(lt10)));
  }
}

WeightSpec power(double p) { return {WeightFamily::PowerP, p, 1, {}, {}}; }
WeightSpec logp(double p, int n) { return {WeightFamily::LogP, p, n, {}, {}}; }
WeightSpec loglogp(double p, int n) { return {WeightFamily::LogLogP, p, n, {}, {}}; }

DensitySample random_density(Rng& rng, int size) {
  Eigen::ArrayXd f(size);
  for (int i = 0; i < size; ++i) f(i) = rng.uniform(0.0, 5.0);
  return DensitySample::uniform(f);
}

// Brute-force admissibility scan: the norm is the edge of the set
// { r : sum m_i w(f_i/r) < w(1) }.
void check_norm_is_admissibility_edge(const DensitySample& d, const WeightSpec& spec, double r) {
  auto modular = [&](double rr) {
    double acc = 0;
    for (Eigen::Index i = 0; i < d.f.size(); ++i) acc += d.m(i) * eval_weight(spec, d.f(i) / rr);
    return acc;
  };
  const double w1 = eval_weight(spec, 1.0);
  CHECK(modular(r * (1 + 1e-6)) <= w1 * (1 + 1e-9));
  CHECK(modular(r * (1 - 1e-6)) >= w1 * (1 - 1e-9));
}

}  // namespace

TEST_CASE("eval_weight: closed forms and domain errors") {
  CHECK(eval_weight(power(2.0), 3.0) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(eval_weight(logp(1.0, 1), 0.0) == 0.0);
  CHECK_THROWS_AS(eval_weight(power(2.0), -1.0), Error);

  // LogLogP cross-checked against the extended-precision evaluator
  const WeightSpec w = loglogp(2.0, 2);
  const double e_to_e = std::exp(std::exp(1.0));
  std::vector<double> probes = {0.5, 1.0, 2.0, e_to_e - 10.0, 17.0, 150.0, 3e3, 8e5, 1e9, 4e12};
  for (double t : probes) {
    const double want = double(hp_weight(WeightFamily::LogLogP, 2.0L, 2, (long double)t));
    CHECK(eval_weight(w, t) == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("eval_weight: tabulated interpolation stays in range") {
  WeightSpec spec;
  spec.family = WeightFamily::Tabulated;
  spec.table_t = {0.0, 1.0, 2.0, 4.0, 8.0};
  spec.table_w = {0.0, 1.0, 4.0, 16.0, 64.0};
  CHECK(eval_weight(spec, 1.0) == doctest::Approx(1.0));
  CHECK(eval_weight(spec, 2.0) == doctest::Approx(4.0));
  // monotone interpolation between knots
  CHECK(eval_weight(spec, 1.5) > 1.0);
  CHECK(eval_weight(spec, 1.5) < 4.0);
  CHECK_THROWS_AS(eval_weight(spec, 9.0), Error);
}

TEST_CASE("check_condition_K: the three families classify as published") {
  CHECK(check_condition_K(power(2.0)).verdict == KVerdict::SatisfiesK);
  CHECK(check_condition_K(logp(2.0, 2)).verdict == KVerdict::FailsK);
  CHECK(check_condition_K(loglogp(4.0, 3)).verdict == KVerdict::SatisfiesK);

  WeightSpec tab;
  tab.family = WeightFamily::Tabulated;
  tab.table_t = {0.0, 1.0, 2.0};
  tab.table_w = {0.0, 1.0, 4.0};
  CHECK(check_condition_K(tab).verdict == KVerdict::Unknown);
  CHECK(!check_condition_K(tab).tail.has_value());
}

TEST_CASE("check_condition_K: full boundary-probe table") {
  for (double p : {0.5, 1.0, 1.5, 2.0}) {
    const auto rep = check_condition_K(power(p));
    CHECK(rep.verdict == (p > 1.0 ? KVerdict::SatisfiesK : KVerdict::FailsK));
  }
  for (int n : {1, 2, 3}) {
    for (double dp : {-1.0, 0.0, 0.5, 1.0}) {
      const double p = n + dp;
      if (p < 0) continue;
      CHECK(check_condition_K(logp(p, n)).verdict ==
            (p > n ? KVerdict::SatisfiesK : KVerdict::FailsK));
      CHECK(check_condition_K(loglogp(p, n)).verdict ==
            (p > n ? KVerdict::SatisfiesK : KVerdict::FailsK));
    }
  }
}

TEST_CASE("condition (K) verdict consistency: tail integrals Cauchy vs bounded below") {
  // satisfying weights: the truncated integrals of 1/h converge
  for (const WeightSpec& spec : {power(2.0), logp(3.0, 2), loglogp(4.0, 3)}) {
    const auto rep = check_condition_K(spec);
    REQUIRE(rep.verdict == KVerdict::SatisfiesK);
    REQUIRE(rep.tail.has_value());
    const auto study = tail_integral_study(*rep.tail);
    CHECK(study.verdict == TailVerdict::Converged);
    CHECK(study.value > 0.0);
  }
  // failing weights: increments stay bounded below (divergence detected)
  for (const WeightSpec& spec : {logp(2.0, 2), loglogp(3.0, 3), power(1.0)}) {
    const auto rep = check_condition_K(spec);
    REQUIRE(rep.verdict == KVerdict::FailsK);
    const auto study = tail_integral_study(*rep.tail);
    CHECK(study.verdict == TailVerdict::Diverged);
  }
}

TEST_CASE("extracted tails are increasing on their domain for satisfying weights") {
  for (const WeightSpec& spec : {power(2.0), logp(3.0, 2), logp(2.5, 2), loglogp(4.0, 3)}) {
    const auto rep = check_condition_K(spec);
    const auto& tail = *rep.tail;
    double prev = tail.log_h(tail.t_min);
    for (double s = tail.t_min * 1.1; s < 1e4; s *= 1.3) {
      const double cur = tail.log_h(s);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("luxembourg_norm: constant density has norm one") {
  for (const WeightSpec& spec : {power(2.0), logp(3.0, 2), loglogp(4.0, 2)}) {
    const auto d = DensitySample::uniform(Eigen::ArrayXd::Constant(64, 1.0));
    CHECK(luxembourg_norm(d, spec) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("luxembourg_norm: two-valued density against the closed form") {
  // f = 2 on half the mass, 0 on the rest; w(t) = t^2 gives r = sqrt(2)
  Eigen::ArrayXd f(2);
  f << 2.0, 0.0;
  const auto d = DensitySample::uniform(f);
  const double r = luxembourg_norm(d, power(2.0));
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  check_norm_is_admissibility_edge(d, power(2.0), r);
}

TEST_CASE("luxembourg_norm: closed form for t^p on random densities") {
  Rng rng(42);
  for (int rep = 0; rep < 25; ++rep) {
    const double p = 1.0 + 3.0 * rng.uniform();
    const auto d = random_density(rng, 40);
    const double want = std::pow((d.m * d.f.pow(p)).sum(), 1.0 / p);
    if (want == 0.0) continue;
    CHECK(luxembourg_norm(d, power(p)) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("luxembourg_norm: homogeneity and zero density") {
  Rng rng(7);
  const auto d = random_density(rng, 50);
  const WeightSpec spec = logp(3.0, 2);
  const double base = luxembourg_norm(d, spec);
  DensitySample scaled(d.f * 3.0, d.m);
  CHECK(luxembourg_norm(scaled, spec) == doctest::Approx(3.0 * base).epsilon(1e-8));

  const auto zero = DensitySample::uniform(Eigen::ArrayXd::Zero(8));
  CHECK(luxembourg_norm(zero, spec) == 0.0);
}

TEST_CASE("luxembourg_norm: monotone in the density") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto d = random_density(rng, 30);
    Eigen::ArrayXd bigger = d.f;
    for (Eigen::Index i = 0; i < bigger.size(); ++i) bigger(i) += rng.uniform(0.0, 1.0);
    DensitySample g(bigger, d.m);
    CHECK(luxembourg_norm(d, power(2.5)) <= luxembourg_norm(g, power(2.5)) + 1e-10);
  }
}

TEST_CASE("legendre_conjugate: closed form for t^2 and the origin") {
  Eigen::ArrayXd s(4);
  s << 0.0, 1.0, 2.0, 4.0;
  const auto table = legendre_conjugate(power(2.0), s);
  for (int i = 0; i < 4; ++i)
    CHECK(table.w_star(i) == doctest::Approx(s(i) * s(i) / 4.0).epsilon(1e-6));
  CHECK(table.w_star(0) == doctest::Approx(0.0).epsilon(1e-12));

  // dense grid-search oracle at s = 2
  double best = 0.0;
  for (double t = 0.0; t <= 10.0; t += 1e-5) best = std::max(best, 2.0 * t - t * t);
  CHECK(table.w_star(2) == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("conjugate is convex and increasing in s") {
  Eigen::ArrayXd s = Eigen::ArrayXd::LinSpaced(60, 0.0, 30.0);
  for (const WeightSpec& spec : {power(3.0), logp(3.0, 2)}) {
    const auto table = legendre_conjugate(spec, s);
    for (int i = 0; i + 1 < 60; ++i) CHECK(table.w_star(i + 1) >= table.w_star(i) - 1e-10);
    for (int i = 0; i + 2 < 60; ++i) {
      const double d0 = table.w_star(i + 1) - table.w_star(i);
      const double d1 = table.w_star(i + 2) - table.w_star(i + 1);
      CHECK(d1 >= d0 - 1e-8);
    }
  }
}

TEST_CASE("Young's inequality holds with grid slack") {
  for (const WeightSpec& spec : {power(2.0), logp(3.0, 2), loglogp(3.0, 2)}) {
    Eigen::ArrayXd s = Eigen::ArrayXd::LinSpaced(50, 0.0, 20.0);
    const auto table = legendre_conjugate(spec, s);
    for (int i = 0; i < 50; ++i) {
      for (double t = 0.0; t <= 50.0; t += 0.5) {
        CHECK(s(i) * t - eval_weight(spec, t) <= table.w_star(i) + 1e-8);
      }
    }
  }
}

TEST_CASE("biconjugacy: (w*)* = w on the sample grid") {
  const WeightSpec spec = logp(3.0, 2);
  // conjugate on a fine grid, then conjugate the table back
  const int K = 200000;
  const double s_max = 130.0;
  Eigen::ArrayXd s = Eigen::ArrayXd::LinSpaced(K, 0.0, s_max);
  const auto table = legendre_conjugate(spec, s);
  Eigen::ArrayXd t_probe = Eigen::ArrayXd::LinSpaced(23, 0.0, 44.0);
  Eigen::ArrayXd back = conjugate_of_table(table.s, table.w_star, t_probe);
  for (int i = 0; i < t_probe.size(); ++i) {
    const double want = eval_weight(spec, t_probe(i));
    CHECK(back(i) == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("conjugate_of_table rejects nonconvex input") {
  Eigen::ArrayXd x(4), y(4);
  x << 0.0, 1.0, 2.0, 3.0;
  y << 0.0, 2.0, 2.5, 2.6;  // concave
  Eigen::ArrayXd s(2);
  s << 0.0, 1.0;
  CHECK_THROWS_AS(conjugate_of_table(x, y, s), Error);
}

TEST_CASE("inverse_conjugate: invert s^2/4 and round trips") {
  const auto inv = inverse_conjugate(power(2.0), 1.0);
  CHECK(inv.s == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(!inv.below_range);
  CHECK(conjugate_point(power(2.0), inv.s) == doctest::Approx(1.0).epsilon(1e-9));

  CHECK(inverse_conjugate(power(2.0), 0.0).s == 0.0);
  CHECK(inverse_conjugate(power(2.0), -1.0).below_range);

  Rng rng(3);
  for (const WeightSpec& spec : {power(2.0), logp(3.0, 2)}) {
    for (int i = 0; i < 20; ++i) {
      const double y = rng.uniform(1e-3, 50.0);
      const double s = inverse_conjugate(spec, y).s;
      CHECK(conjugate_point(spec, s) == doctest::Approx(y).epsilon(1e-8));
    }
  }
}

TEST_CASE("conjugate_inverse_tail is increasing and unbounded") {
  const auto tail = conjugate_inverse_tail(power(2.0));
  // (w*)^{-1}(y) = 2 sqrt(y) for w = t^2
  CHECK(tail.h(1.0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(tail.h(4.0) == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(tail.h(100.0) > tail.h(10.0));
}

TEST_CASE("density sample invariants are enforced") {
  Eigen::ArrayXd f(2), m(2);
  f << 1.0, -0.5;
  m << 0.5, 0.5;
  CHECK_THROWS_AS(DensitySample(f, m), Error);
  f << 1.0, 0.5;
  m << 0.6, 0.5;  // sums to 1.1
  CHECK_THROWS_AS(DensitySample(f, m), Error);
}
