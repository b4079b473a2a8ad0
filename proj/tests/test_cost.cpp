#include <cmath>

#include "conc/cost.hpp"
#include "doctest.h"

using namespace conc;

TEST_CASE("phi branches") {
  CHECK(phi(2.0, 3.0) == doctest::Approx(4.5));
  CHECK(phi(1.0, 0.5) == doctest::Approx(0.125));
  CHECK(phi(1.0, 2.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(phi(1.5, -1.0), Rejection);
  // Continuity and C^1 at the branch point.
  for (double p : {1.0, 1.3, 1.7, 2.0}) {
    CHECK(phi(p, 1.0 - 1e-9) == doctest::Approx(phi(p, 1.0 + 1e-9)).epsilon(1e-8));
    const double left = (phi(p, 1.0) - phi(p, 1.0 - 1e-6)) / 1e-6;
    const double right = (phi(p, 1.0 + 1e-6) - phi(p, 1.0)) / 1e-6;
    CHECK(left == doctest::Approx(right).epsilon(1e-5));
  }
}

TEST_CASE("phi_star branches") {
  CHECK(phi_star(3.0, 0.5) == doctest::Approx(0.125));
  CHECK(phi_star(3.0, 2.0) == doctest::Approx(8.0 / 3.0 + 0.5 - 1.0 / 3.0));
  CHECK(is_plus_infinity(phi_star(kInfinity, 2.0)));
  CHECK(phi_star(kInfinity, 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(phi_star(2.0, -0.1), Rejection);
  CHECK(CostSpec::from_p(1.0).q_infinite());
  CHECK(CostSpec::from_p(3.0).q == doctest::Approx(1.5));
}

TEST_CASE("phi inverse") {
  CHECK(phi_inverse(1.0, 2.0) == doctest::Approx(2.5));
  CHECK(phi_inverse(2.0, 4.5) == doctest::Approx(3.0));
  CHECK(phi_inverse(1.0, 0.125) == doctest::Approx(0.5));
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const double p = rng.uniform(1.0, 5.0), x = rng.uniform(0.0, 20.0);
    CHECK(phi_inverse(p, phi(p, x)) == doctest::Approx(x).epsilon(1e-10));
  }
}

TEST_CASE("property: scaling inequalities of the cost family") {
  Rng rng(17);
  int violations = 0;
  for (int i = 0; i < 20000; ++i) {
    const double p = rng.uniform(1.0, 2.0), c = rng.uniform(1e-3, 4.0), x = rng.uniform(0.0, 10.0);
    if (c * phi(p, x) < phi(p, std::min(c, 1.0) * x) * (1.0 - 1e-12)) ++violations;
    const double q = i % 10 == 0 ? kInfinity : rng.uniform(2.0, 12.0);
    const double lam = rng.uniform(0.0, 3.0);
    const double lhs = c * phi_star(q, lam);
    const double rhs = phi_star(q, std::max(std::sqrt(c), 1.0) * lam);
    if (lhs > rhs * (1.0 + 1e-12) + 1e-15) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("property: compositions phi_p o phi_s^{-1} are convex") {
  int violations = 0;
  for (double s : {1.0, 1.2, 1.5, 1.8, 2.0})
    for (double p : {1.0, 1.2, 1.5, 1.8, 2.0}) {
      if (p < s) continue;
      const double h = 1e-3;
      for (int i = 1; i < 10000; ++i) {
        const double y = i * h;
        const double dd = phi_composed(p, s, y + h) - 2 * phi_composed(p, s, y) + phi_composed(p, s, y - h);
        if (dd < -1e-12) ++violations;
      }
    }
  CHECK(violations == 0);
}

TEST_CASE("numeric Legendre transform") {
  std::vector<double> lam;
  for (int i = 0; i <= 500; ++i) lam.push_back(0.01 * i);
  for (double p : {1.0, 1.2, 1.5, 2.0, 3.0, 4.0}) {
    auto xs = legendre_grid(p, 5.0);
    std::vector<double> fs;
    for (double x : xs) fs.push_back(phi(p, x));
    auto serial = legendre_numeric(xs, fs, lam, Exec::serial);
    auto par = legendre_numeric(xs, fs, lam, Exec::parallel);
    CHECK(serial == par);
    const double q = CostSpec::from_p(p).q;
    double err = 0.0;
    for (std::size_t k = 0; k < lam.size(); ++k) {
      const double exact = phi_star(q, lam[k]);
      if (is_plus_infinity(exact)) {
        CHECK(is_plus_infinity(serial[k]));
        continue;
      }
      err = std::max(err, std::abs(serial[k] - exact));
    }
    CHECK(err < 1e-4);
    // Output is convex and nondecreasing where finite.
    for (std::size_t k = 2; k < lam.size(); ++k) {
      if (std::isinf(serial[k])) break;
      CHECK(serial[k] >= serial[k - 1] - 1e-12);
      CHECK(serial[k] - 2 * serial[k - 1] + serial[k - 2] >= -1e-9);
    }
  }
  // Conjugate of a linear function.
  std::vector<double> xs{0, 1, 2, 3, 4}, fs{0, 2, 4, 6, 8};
  std::vector<double> l{1.0, 2.0, 2.5};
  auto c = legendre_numeric(xs, fs, l);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == 0.0);
  CHECK(is_plus_infinity(c[2]));
  CHECK_THROWS_AS(legendre_numeric(std::vector<double>{}, std::vector<double>{}, l), Rejection);
}

TEST_CASE("biconjugate stays above the function minus grid error") {
  auto xs = legendre_grid(1.5, 4.0);
  std::vector<double> fs;
  for (double x : xs) fs.push_back(phi(1.5, x) + 0.3 * std::sin(x));
  std::vector<double> lam;
  for (int i = 0; i <= 800; ++i) lam.push_back(-2.0 + 0.01 * i);
  std::vector<double> convex;
  for (double x : xs) convex.push_back(phi(1.5, x));
  auto fstar = legendre_numeric(xs, fs, lam);
  auto cstar = legendre_numeric(xs, convex, lam);
  for (std::size_t i = 0; i < xs.size(); i += 25) {
    if (xs[i] > 10) break;
    double bi = -kInfinity, cbi = -kInfinity;
    for (std::size_t k = 0; k < lam.size(); ++k) {
      bi = std::max(bi, lam[k] * xs[i] - fstar[k]);
      cbi = std::max(cbi, lam[k] * xs[i] - cstar[k]);
    }
    CHECK(bi <= fs[i] + 1e-9);
    // Convex input: the biconjugate recovers it up to the lambda-grid error.
    CHECK(cbi >= convex[i] - 1e-3);
  }
}
