#include <cmath>
#include <numeric>

#include "conc/measure.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace conc;

TEST_CASE("gamma_p normalizers") {
  CHECK(gamma_p_normalizer(1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(gamma_p_normalizer(2.0) == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-14));
  for (double p : {1.0, 1.5, 2.0, 3.0, 8.0}) {
    const double q = oracle::integrate([p](double x) { return 2.0 * std::exp(-std::pow(x, p) / p); },
                                       0.0, 60.0, 1e-13);
    CHECK(gamma_p_normalizer(p) == doctest::Approx(q).epsilon(1e-9));
    auto mu = build_gamma_p(p);
    // Exact for p = 1; second order in the grid step otherwise.
    CHECK(mu.log_z() == doctest::Approx(std::log(q)).epsilon(p == 1.0 ? 1e-12 : 1e-4));
    CHECK(std::abs(mu.total_mass() - 1.0) < 1e-12);
    CHECK(mu.logconcave());
    CHECK(mu.symmetric());
  }
}

TEST_CASE("exponential measure tables are exact") {
  auto mu = build_gamma_p(1.0);
  for (double x : {-30.0, -3.3, -0.01, 0.0, 0.7, 5.0, 100.0}) {
    const double cdf = x < 0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
    CHECK(mu.cdf(x) == doctest::Approx(cdf).epsilon(1e-12));
    if (x > 0) CHECK(mu.survival(x) == doctest::Approx(0.5 * std::exp(-x)).epsilon(1e-11));
  }
  for (double u : {1e-40, 1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-9}) {
    const double x = u <= 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
    CHECK(mu.quantile(u) == doctest::Approx(x).epsilon(1e-9));
  }
  // Deep tail keeps relative precision through the survival table.
  const double far = mu.quantile(1.0 - 1e-15);
  CHECK(mu.survival(far) == doctest::Approx(1e-15).epsilon(1e-6));
}

TEST_CASE("gaussian restricted and gauge invariance") {
  auto half = build_gaussian_restricted(0.0);
  CHECK(half.provenance().params.at("p") == doctest::Approx(0.5));
  CHECK(half.density(1.0) == doctest::Approx(2.0 * std::exp(-0.5) / std::sqrt(2.0 * kPi)).epsilon(1e-5));

  std::vector<double> x(801), v(801), w(801);
  for (int i = 0; i <= 800; ++i) {
    x[i] = -8.0 + 0.02 * i;
    v[i] = 0.5 * x[i] * x[i];
    w[i] = v[i] + 123.456;
  }
  auto a = build_from_potential(x, v);
  auto b = build_from_potential(x, w);
  for (std::size_t i = 0; i < x.size(); i += 37) CHECK(a.density_at(i) == doctest::Approx(b.density_at(i)).epsilon(1e-12));
}

TEST_CASE("potential grid validation") {
  CHECK_THROWS_AS(build_from_potential({0.0, 2.0, 1.0}, {0.0, 0.0, 0.0}), Rejection);
  CHECK_THROWS_AS(build_from_potential({0.0, 1.0}, {0.0, 0.0}), Rejection);
  std::vector<double> x, v;
  for (int i = 0; i <= 600; ++i) {
    x.push_back(-30.0 + 0.1 * i);
    v.push_back(-x.back() * x.back());
  }
  CHECK_THROWS_AS(build_from_potential(x, v), Rejection);
}

TEST_CASE("semi-convexity certificate") {
  auto g2 = build_gamma_p(2.0);
  CHECK(check_semi_convexity(g2, 0.0).holds);
  std::vector<double> x, v, w;
  for (int i = 0; i <= 400; ++i) {
    x.push_back(-1.0 + 0.005 * i);
    v.push_back(-0.5 * x.back() * x.back());
  }
  auto concave = build_from_potential(x, v);
  auto r = check_semi_convexity(concave, 0.5);
  CHECK_FALSE(r.holds);
  CHECK(r.min_second_derivative == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(concave.kappa() == doctest::Approx(1.0).epsilon(1e-8));

  x.clear();
  for (int i = 0; i <= 2000; ++i) {
    x.push_back(-2.0 + 0.002 * i);
    w.push_back(std::pow(x.back(), 4) - x.back() * x.back());
  }
  auto dw = build_from_potential(x, w);
  auto s = check_semi_convexity(dw, 2.0);
  CHECK(s.holds);
  CHECK(s.min_second_derivative == doctest::Approx(-2.0).epsilon(1e-5));
  CHECK(std::abs(s.worst_x) < 0.01);
}

TEST_CASE("derived measures") {
  auto g2 = build_gamma_p(2.0);
  auto half = derive_restrict(g2, 0.0, kInfinity);
  CHECK(half.provenance().params.at("p") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(half.logconcave());
  CHECK(half.density(1.0) == doctest::Approx(2.0 * std::exp(-0.5) / std::sqrt(2.0 * kPi)).epsilon(1e-5));
  CHECK_THROWS_AS(derive_restrict(g2, 50.0, 60.0), Rejection);

  std::vector<double> zero(g2.size(), 0.0);
  auto same = derive_density_ratio(g2, zero, 0.0);
  CHECK(same.provenance().params.at("attained") == doctest::Approx(0.0));
  CHECK(same.log_z() == doctest::Approx(g2.log_z()));

  std::vector<double> bump(g2.size());
  for (std::size_t i = 0; i < g2.size(); ++i) bump[i] = g2.grid()[i] > 0 ? 1.0 : 0.0;
  CHECK_THROWS_AS(derive_density_ratio(g2, bump, 0.2), Rejection);
  auto tilted = derive_density_ratio(g2, bump, 1.0);
  CHECK(tilted.provenance().params.at("attained") <= 1.0 + 1e-9);

  auto moved = derive_translate(g2, 1.0);
  CHECK(std::abs(moved.mean() - 1.0) < 1e-9);
  auto wide = derive_dilate(g2, 2.0);
  CHECK(wide.quantile(0.9) == doctest::Approx(2.0 * g2.quantile(0.9)).epsilon(1e-12));
}

TEST_CASE("property: quantile inverts cdf within a grid step") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const double p = rng.uniform(1.0, 4.0);
    auto mu = build_gamma_p(p, {513, 1e-30});
    const double h = mu.grid()[1] - mu.grid()[0];
    for (int k = 0; k < 50; ++k) {
      const double x = rng.uniform(mu.lower(), mu.upper());
      // Past this point 1 - cdf(x) is below double resolution of 1.
      if (mu.survival(x) < 1e-12) continue;
      CHECK(std::abs(mu.quantile(mu.cdf(x)) - x) <= h);
    }
  }
}

TEST_CASE("discrete spaces") {
  CHECK_NOTHROW(DiscreteSpace::create(std::vector<std::vector<double>>{{0, 1}, {1, 0}}, {0.5, 0.5}));
  try {
    DiscreteSpace::create(std::vector<std::vector<double>>{{0, 1, 5}, {1, 0, 1}, {5, 1, 0}},
                          {0.2, 0.3, 0.5});
    FAIL("expected rejection");
  } catch (const MetricViolation& e) {
    CHECK(e.triple == std::array<int, 3>{1, 2, 3});
  }
  CHECK_THROWS_AS(DiscreteSpace::create(std::vector<std::vector<double>>{{0, 1}, {1, 0}}, {1.5, -0.5}), Rejection);
  CHECK_THROWS_AS(DiscreteSpace::create(std::vector<std::vector<double>>{{0, 1}, {1, 0}}, {0.5, 0.6}), Rejection);
  auto path = path_space(4);
  CHECK(path.d(0, 3) == 3.0);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    auto s = random_space(rng, rng.integer(2, 10));
    const double total = std::accumulate(s.weights().begin(), s.weights().end(), 0.0);
    CHECK(total == doctest::Approx(1.0));
  }
}

TEST_CASE("atomization keeps the mean") {
  auto g1 = build_gamma_p(1.0);
  auto atoms = atomize(g1, 200);
  const double mean = std::accumulate(atoms.begin(), atoms.end(), 0.0) / 200.0;
  CHECK(std::abs(mean) < 1e-9);
  CHECK(std::is_sorted(atoms.begin(), atoms.end()));
}
