#include <cmath>

#include "conc/profile.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace conc;

TEST_CASE("iso profile closed forms") {
  auto g1 = build_gamma_p(1.0);
  auto iso = iso_profile_1d(g1);
  CHECK(iso.exactness == Exactness::exact);
  double err = 0.0;
  for (std::size_t i = 0; i < iso.x.size(); ++i) err = std::max(err, std::abs(iso.y[i] - iso.x[i]));
  CHECK(err < 1e-9);
  auto g2 = build_gamma_p(2.0);
  CHECK(half_line_iso(g2, 0.5) == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-5));
  CHECK_THROWS_AS(half_line_iso(g2, 0.7), Rejection);
  // Symmetric measure: both half-lines give the same value.
  for (double v : {1e-6, 0.01, 0.3})
    CHECK(g2.density(g2.quantile(v)) == doctest::Approx(g2.density(g2.quantile(1.0 - v))).epsilon(1e-6));
}

TEST_CASE("non log-concave measures give half-line upper bounds") {
  std::vector<double> x, v;
  for (int i = 0; i <= 2000; ++i) {
    x.push_back(-4.0 + 0.004 * i);
    v.push_back(std::pow(x.back(), 4) / 4 - 2 * x.back() * x.back());
  }
  auto mu = build_from_potential(x, v);
  CHECK_FALSE(mu.logconcave());
  CHECK(iso_profile_1d(mu).exactness == Exactness::half_line_upper_bound);
  CHECK(conc_profile_1d(mu).exactness == Exactness::candidate_lower_bound);
}

TEST_CASE("property: unions of cells never beat half-lines on log-concave measures") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const double p = rng.uniform(1.0, 3.0);
    auto mu = build_gamma_p(p, {2049, 1e-40});
    const int n = 12;
    std::vector<double> cuts;
    for (int k = 0; k <= n; ++k) cuts.push_back(mu.quantile(0.02 + 0.96 * k / n));
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
      double mass = mu.cdf(cuts[0]);
      double boundary = 0.0;
      const bool first_in = mask & 1;
      if (first_in) mass = mu.cdf(cuts[0]);  // the left tail belongs to the set
      else mass = 0.0;
      for (int k = 0; k < n; ++k) {
        const bool in = mask >> k & 1;
        if (in) mass += mu.mass_between(cuts[k], cuts[k + 1]);
        const bool next = k + 1 < n ? (mask >> (k + 1) & 1) : in;
        if (k + 1 < n && in != next) boundary += mu.density(cuts[k + 1]);
      }
      if (mask >> (n - 1) & 1) mass += mu.survival(cuts[n]);
      const double v = std::min(mass, 1.0 - mass);
      if (v <= 0.0) continue;
      CHECK(boundary >= half_line_iso(mu, v) * (1.0 - 1e-9));
    }
  }
}

TEST_CASE("concentration profile closed forms") {
  auto g1 = build_gamma_p(1.0);
  std::vector<double> rs;
  for (int i = 0; i <= 400; ++i) rs.push_back(0.05 * i);
  auto k1 = conc_profile_1d(g1, rs);
  CHECK(k1.exactness == Exactness::exact);
  double err = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) err = std::max(err, std::abs(k1.y[i] - rs[i] - kLog2));
  CHECK(err < 1e-9);
  auto g2 = build_gamma_p(2.0);
  std::vector<double> one{1.0};
  auto k2 = conc_profile_1d(g2, one);
  CHECK(k2.y[0] == doctest::Approx(-std::log(1.0 - oracle::normal_cdf(1.0))).epsilon(1e-4));
}

TEST_CASE("discrete concentration profile") {
  auto two = DiscreteSpace::create(std::vector<std::vector<double>>{{0, 1}, {1, 0}}, {0.5, 0.5});
  auto k = conc_profile_discrete(two);
  CHECK(k.interp == Interp::step);
  CHECK(k(0.3) == doctest::Approx(kLog2));
  CHECK(k(1.0) == doctest::Approx(kLog2));
  CHECK(is_plus_infinity(k(1.0001)));

  Rng rng(99);
  for (int t = 0; t < 40; ++t) {
    const int n = rng.integer(1, 9);
    auto s = random_space(rng, n);
    auto serial = conc_profile_discrete(s, Exec::serial);
    auto par = conc_profile_discrete(s, Exec::parallel);
    CHECK(serial.y == par.y);
    std::vector<double> probes;
    for (std::size_t i = 0; i < serial.x.size(); ++i) {
      probes.push_back(serial.x[i] + 1e-9);
      if (i + 1 < serial.x.size()) probes.push_back(0.5 * (serial.x[i] + serial.x[i + 1]));
      if (i > 0) probes.push_back(serial.x[i]);
    }
    probes.push_back(serial.x.back() + 1.0);
    for (double r : probes) {
      const double w = oracle::worst_tail(n, s.dist(), s.weights(), r);
      const double want = w > 0 ? -std::log(w) : kInfinity;
      if (std::isinf(want)) CHECK(std::isinf(serial(r)));
      else CHECK(serial(r) == doctest::Approx(want).epsilon(1e-12));
    }
    // Sampled profiles overestimate K (their tails are a subset of candidates).
    auto sampled = conc_profile_sampled(s, rng, 50);
    for (double r : probes) CHECK(sampled(r) >= serial(r) - 1e-12);
  }
  CHECK_THROWS_AS(conc_profile_discrete(random_space(rng, 23)), Rejection);
}

namespace {

Profile gamma_table(const std::function<double(double)>& f, double hi = 60.0, std::size_t n = 20001) {
  return Profile::tabulate(ProfileKind::bound_gamma, geometric_grid(kLog2, hi, n), f);
}

}  // namespace

TEST_CASE("iso_to_conc closed forms") {
  auto a = iso_to_conc(gamma_table([](double) { return 2.0; }));
  for (double r : {0.0, 1.0, 10.0}) CHECK(a(r) == doctest::Approx(kLog2 + 2.0 * r).epsilon(1e-12));
  auto b = iso_to_conc(gamma_table([](double y) { return y; }));
  for (double r : {0.0, 0.5, 3.0}) CHECK(b(r) == doctest::Approx(kLog2 * std::exp(r)).epsilon(1e-8));
  auto c = iso_to_conc(gamma_table([](double y) { return std::sqrt(y); }));
  for (double r : {0.0, 1.0, 5.0}) {
    const double want = std::pow(r / 2 + std::sqrt(kLog2), 2);
    CHECK(c(r) == doctest::Approx(want).epsilon(1e-8));
  }
  CHECK_THROWS_AS(iso_to_conc(gamma_table([](double y) { return y < 3 ? 1.0 : 0.0; })), Rejection);
}

TEST_CASE("going down") {
  auto lin = Profile::tabulate(ProfileKind::bound_alpha, linear_grid(0, 50, 5001),
                               [](double r) { return kLog2 + r; });
  auto out = conc_going_down(lin, 1.0);
  CHECK(going_down_shift(lin, 1.0) == doctest::Approx(1.0));
  CHECK(out(1.5) == doctest::Approx(kLog2));
  for (double r : {2.5, 7.0, 30.0}) CHECK(out(r) == doctest::Approx(r + kLog2 - 2.0).epsilon(1e-12));
  auto zero = conc_going_down(lin, 0.0);
  for (double r : {0.5, 10.0}) CHECK(zero(r) == doctest::Approx(lin(r)));
  auto ex = Profile::tabulate(ProfileKind::bound_alpha, linear_grid(0, 5, 50001),
                              [](double r) { return kLog2 * std::exp(r); });
  CHECK(going_down_shift(ex, kLog2) == doctest::Approx(kLog2).epsilon(1e-6));
  CHECK_THROWS_AS(conc_going_down(lin, 100.0), Rejection);
}

TEST_CASE("iso stability transform") {
  auto sq = gamma_table([](double y) { return std::sqrt(y); });
  std::vector<double> one{1.0};
  auto g2 = iso_stability_transform(sq, 1.0, std::span<const double>(one));
  CHECK(g2.y[0] == doctest::Approx(0.5 / (std::sqrt(2.0) - std::sqrt(kLog2))).epsilon(1e-8));
  auto cst = gamma_table([](double) { return 3.0; });
  auto g3 = iso_stability_transform(cst, 2.0);
  for (std::size_t i = 0; i < g3.x.size(); i += 997)
    CHECK(g3.y[i] == doctest::Approx(3.0 * g3.x[i] / (g3.x[i] + 2.0 - kLog2)).epsilon(1e-12));
  // D = 0 equals x / alpha^{-1}(x) of iso_to_conc.
  auto g0 = iso_stability_transform(sq, 0.0);
  auto alpha = iso_to_conc(sq);
  auto form = conc_to_iso_form(alpha, 0.0, 1.0);
  for (double x : {1.0, 4.0, 20.0}) CHECK(g0(x) == doctest::Approx(form.gamma(x)).epsilon(1e-6));
  GrowthCondition growth{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(iso_stability_transform(sq, 1.0, growth), Rejection);
  auto big = gamma_table([](double y) { return 3.0 * std::sqrt(y); });
  CHECK_NOTHROW(iso_stability_transform(big, 1.0, growth));
}

TEST_CASE("property: transforms keep monotone profiles monotone and gamma2 decreases in D") {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const double c = rng.uniform(0.2, 3.0), e = rng.uniform(0.0, 1.0);
    auto g = gamma_table([&](double y) { return c * std::pow(y, e); }, 40.0, 4001);
    auto a = iso_to_conc(g);
    for (std::size_t i = 1; i < a.y.size(); ++i) CHECK(a.y[i] > a.y[i - 1]);
    const double D = rng.uniform(0.0, 3.0);
    auto down = conc_going_down(a, D);
    for (std::size_t i = 1; i < down.y.size(); ++i) CHECK(down.y[i] >= down.y[i - 1]);
    std::vector<double> xs = linear_grid(1.0, 30.0, 50);
    auto lo = iso_stability_transform(g, D, std::span<const double>(xs));
    auto hi = iso_stability_transform(g, D + 0.5, std::span<const double>(xs));
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(hi.y[i] < lo.y[i]);
  }
}

TEST_CASE("conc to iso form") {
  auto lin = Profile::tabulate(ProfileKind::bound_alpha, linear_grid(0, 50, 501),
                               [](double r) { return kLog2 + r; });
  auto f = conc_to_iso_form(lin, 0.0, 1.0);
  CHECK(f.feasible);
  CHECK(f.gamma(10.0) == doctest::Approx(10.0 / (10.0 - kLog2)).epsilon(1e-4));
  auto ex = Profile::tabulate(ProfileKind::bound_alpha, linear_grid(0, 5, 501),
                              [](double r) { return kLog2 * std::exp(r); });
  auto fe = conc_to_iso_form(ex, 0.0, 1.0);
  CHECK(fe.gamma(5.0) == doctest::Approx(5.0 / std::log(5.0 / kLog2)).epsilon(1e-4));
  auto plain = Profile::tabulate(ProfileKind::bound_alpha, linear_grid(0, 50, 501), [](double r) { return r + 1e-3; });
  CHECK_FALSE(conc_to_iso_form(plain, 1.0, 1.0).feasible);
  auto quad = Profile::tabulate(ProfileKind::bound_alpha, linear_grid(0, 50, 501),
                                [](double r) { return kLog2 + 2 * r * r; });
  CHECK(conc_to_iso_form(quad, 1.0, 1.0).feasible);
  CHECK_THROWS_AS(conc_to_iso_form(quad, 1.0, 0.4), Rejection);
}

TEST_CASE("constant fits") {
  auto g1 = build_gamma_p(1.0);
  auto k1 = conc_profile_1d(g1, linear_grid(0.0, 200.0, 4001));
  auto dcon = fit_constant(k1, FitTemplate::p_exp_conc, {1.0});
  CHECK(dcon.value == doctest::Approx(1.0).epsilon(0.01));
  CHECK(dcon.certified);
  auto iso = iso_profile_1d(g1);
  CHECK(fit_constant(iso, FitTemplate::p_exp_iso, {1.0}).value == doctest::Approx(1.0).epsilon(1e-9));
  auto g2 = build_gamma_p(2.0);
  auto i2 = iso_profile_1d(g2, geometric_grid(1e-6, 0.5, 400));
  auto shape = Profile::tabulate(ProfileKind::iso, i2.x, [](double v) { return v * std::sqrt(std::log(1.0 / v)); });
  FitOptions o;
  o.reference = &shape;
  o.hi = 0.49;
  auto r = fit_constant(i2, FitTemplate::ratio, o);
  CHECK(r.witnesses["max"] > 1.2);
  CHECK(r.witnesses["max"] < std::sqrt(2.0));
  CHECK_THROWS_AS(fit_constant(i2, FitTemplate::p_exp_conc, {1.0}), Rejection);
}
