#include <cmath>

#include "conc/laplace.hpp"
#include "conc/transport.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace conc;

namespace {

DiscreteSpace two_point() { return DiscreteSpace::create({0, 1, 1, 0}, {0.5, 0.5}); }

// A random 1-Lipschitz, mean-zero function via the inf-convolution g -> min_j g_j + d(., j).
std::vector<double> random_lipschitz(const DiscreteSpace& s, Rng& rng) {
  const int n = s.size();
  std::vector<double> g(static_cast<std::size_t>(n)), f(static_cast<std::size_t>(n));
  for (double& x : g) x = rng.uniform(-2 * s.diameter(), 2 * s.diameter());
  for (int i = 0; i < n; ++i) {
    double m = 1e300;
    for (int j = 0; j < n; ++j) m = std::min(m, g[static_cast<std::size_t>(j)] + s.d(i, j));
    f[static_cast<std::size_t>(i)] = m;
  }
  double mean = 0;
  for (int i = 0; i < n; ++i) mean += s.weights()[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)];
  for (double& x : f) x -= mean;
  return f;
}

}  // namespace

TEST_CASE("log-Laplace closed forms and properties") {
  std::vector<double> mu{0.5, 0.5}, zero{0, 0}, f{0, 1};
  CHECK(log_laplace(mu, zero, 3.0) == 0.0);
  CHECK(log_laplace(mu, f, 1.0) == doctest::Approx(std::log((1 + std::exp(1.0)) / 2)).epsilon(1e-14));
  auto g2 = build_gamma_p(2.0);
  std::vector<double> x(g2.grid().begin(), g2.grid().end());
  for (double lam : {0.1, 0.5, 1.0, 2.0, 3.0})
    CHECK(std::abs(log_laplace(g2, x, lam) - lam * lam / 2) < 1e-6);
  Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(2, 9);
    auto w = random_simplex(rng, n);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& t : v) t = rng.uniform(-3, 3);
    double prev2 = log_laplace(w, v, 0.0), prev1 = log_laplace(w, v, 0.05);
    for (int k = 2; k <= 60; ++k) {
      const double cur = log_laplace(w, v, 0.05 * k);
      CHECK(cur - 2 * prev1 + prev2 >= -1e-9);
      prev2 = prev1;
      prev1 = cur;
    }
    double mean = 0;
    for (int i = 0; i < n; ++i) mean += w[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    const double h = 1e-5;
    CHECK((log_laplace(w, v, h) - log_laplace(w, v, -h)) / (2 * h) == doctest::Approx(mean).epsilon(1e-6));
  }
  std::vector<double> huge{0, 1e6};
  CHECK(log_laplace(mu, huge, 1.0) == doctest::Approx(1e6 - std::log(2.0)));
}

TEST_CASE("Gibbs variational identity") {
  std::vector<double> mu{0.5, 0.5}, psi{0, 1};
  auto g = gibbs_check(mu, psi);
  const double e = std::exp(1.0);
  CHECK(g.log_moment == doctest::Approx(std::log((1 + e) / 2)));
  CHECK(g.sup_value == doctest::Approx(std::log((1 + e) / 2)));
  CHECK(g.theta[0] == doctest::Approx(2 / (1 + e)));
  CHECK(g.theta[1] == doctest::Approx(2 * e / (1 + e)));
  std::vector<double> zero{0, 0};
  auto z = gibbs_check(mu, zero);
  CHECK(z.gap() == 0.0);
  CHECK(z.theta[0] == 1.0);
  Rng rng(67);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(2, 10);
    auto w = random_simplex(rng, n);
    std::vector<double> p(static_cast<std::size_t>(n));
    for (double& t : p) t = rng.uniform(-5, 5);
    auto r = gibbs_check(w, p);
    CHECK(r.gap() <= 1e-8);
    // Any other density gives a smaller value.
    auto other = random_simplex(rng, n);
    double val = 0;
    for (int i = 0; i < n; ++i) {
      const double th = other[static_cast<std::size_t>(i)] / w[static_cast<std::size_t>(i)];
      val += other[static_cast<std::size_t>(i)] * (p[static_cast<std::size_t>(i)] - std::log(th));
    }
    CHECK(val <= r.log_moment + 1e-12);
  }
}

TEST_CASE("Laplace to concentration and back") {
  auto quad = PhiGrid::tabulate([](double t) { return t * t / 2; }, 60.0);
  auto lin = PhiGrid::tabulate([](double t) { return t; }, 60.0);
  LaplaceBound a{quad, 1.0, 0.0, 0.0};
  CHECK(laplace_to_conc(a).zp == doctest::Approx(std::sqrt(2 * std::log(2.0))).epsilon(1e-6));
  LaplaceBound a1{quad, 1.0, 1.0, 0.0};
  CHECK(laplace_to_conc(a1).zp - laplace_to_conc(a).zp == doctest::Approx(2.0).epsilon(1e-12));
  LaplaceBound b{lin, 1.0, 0.0, std::log(2.0)};
  CHECK(laplace_to_conc(b).zp == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(laplace_to_conc(LaplaceBound{lin, 1.0, 0.0, 100.0}), Rejection);

  ConcBound c{lin, 2.0, 0.0, 0.0};
  auto l = conc_to_laplace(c, 0.5);
  CHECK(l.D == doctest::Approx(1.0));
  CHECK(l.delta == doctest::Approx(std::log(2.0)));
  CHECK(l.eps == doctest::Approx(0.5 * (std::log(2.0) + 1)).epsilon(1e-9));
  ConcBound cq{quad, 1.0, 0.0, 0.0};
  CHECK(conc_to_laplace(cq, 0.5).eps ==
        doctest::Approx(0.5 * (std::sqrt(2 * std::log(2.0)) + std::sqrt(kPi / 2))).epsilon(1e-6));
  auto small = conc_to_laplace(ConcBound{lin, 1.0, 0.0, 0.3}, 1e-9);
  CHECK(small.D < 1e-8);
  CHECK(std::abs(small.delta) < 1e-8);
  auto flat = PhiGrid{{0, 1, 2}, {0, 0, 0}};
  CHECK_THROWS_AS(conc_to_laplace(ConcBound{flat, 1.0, 0.0, 0.0}), Rejection);
  CHECK_THROWS_AS((PhiGrid{{0, 1, 2}, {0, 2, 3}}.validate()), Rejection);
}

TEST_CASE("Herbst bounds") {
  auto h = herbst_laplace(0.5);
  for (double lam : {0.0, 0.5, 1.0, 4.0}) CHECK(h.laplace.phi.conjugate(lam) == doctest::Approx(lam * lam / 2).epsilon(1e-6));
  CHECK(h.conc.zp == doctest::Approx(std::sqrt(2 * std::log(2.0))));
  CHECK(h.conc.at(3.0) == doctest::Approx(0.5 * std::pow(3.0 - std::sqrt(2 * std::log(2.0)), 2)).epsilon(1e-5));
  auto h1 = herbst_laplace(1.0);
  CHECK(h1.conc.at(std::sqrt(std::log(2.0))) == 0.0);
  // Going through the conversion reproduces the same offset.
  CHECK(laplace_to_conc(h.laplace).zp == doctest::Approx(h.conc.zp).epsilon(1e-6));
}

TEST_CASE("parameter shift keeps the bound dominated") {
  auto lin = PhiGrid::tabulate([](double t) { return t + 0.1 * t * t; }, 40.0);
  ConcBound c{lin, 1.5, 0.7, 0.4};
  for (auto [z2, d2] : {std::pair{0.0, 0.0}, std::pair{1.0, -std::log(2.0)}, std::pair{0.2, 2.0}}) {
    auto s = c.shift(z2, d2);
    CHECK(s.Dp > 0.0);
    CHECK(s.Dp <= c.Dp + 1e-12);
    for (double r = 0.01; r < 15; r *= 1.1) CHECK(s.at(r) <= std::max(std::log(2.0), c.at(r)) + 1e-9);
  }
}

TEST_CASE("discrete Laplace supremum") {
  auto s = two_point();
  CHECK(laplace_sup_discrete(s, 0.0).value == 0.0);
  for (double lam : {0.3, 1.0, 5.0}) {
    auto r = laplace_sup_discrete(s, lam);
    CHECK(r.exact);
    CHECK(r.value == doctest::Approx(std::log(std::cosh(lam / 2))).epsilon(1e-12));
  }
  auto path = path_space(3);
  Rng rng(71);
  for (double lam : {0.5, 2.0}) {
    const double v = laplace_sup_discrete(path, lam).value;
    for (int k = 0; k < 200; ++k) CHECK(log_laplace(path.weights(), random_lipschitz(path, rng), lam) <= v + 1e-12);
  }
  for (int trial = 0; trial < 20; ++trial) {
    auto sp = random_space(rng, rng.integer(3, 7));
    const double lam = rng.uniform(0.1, 4.0);
    auto ex = laplace_sup_discrete(sp, lam, Exec::serial);
    auto par = laplace_sup_discrete(sp, lam, Exec::parallel);
    CHECK(par.value == ex.value);
    CHECK(lipschitz_constant(sp, ex.f) <= 1 + 1e-9);
    CHECK(log_laplace(sp.weights(), ex.f, lam) == doctest::Approx(ex.value).epsilon(1e-12));
    for (int k = 0; k < 50; ++k) CHECK(log_laplace(sp.weights(), random_lipschitz(sp, rng), lam) <= ex.value + 1e-12);
    auto heur = laplace_sup_heuristic(sp, lam);
    CHECK(heur.value <= ex.value + 1e-12);
    CHECK(heur.value >= ex.value - 0.05 * std::abs(ex.value) - 1e-9);
  }
}
