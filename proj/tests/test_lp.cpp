#include <algorithm>
#include <cmath>
#include <numeric>

#include "conc/lp.hpp"
#include "doctest.h"

using namespace conc;

namespace {

// Best vertex of a 2-variable LP, from all pairwise constraint intersections.
double vertex_oracle(const LinearProgram& lp) {
  std::vector<LinearProgram::Row> rows = lp.rows;
  double best = -1e300;
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      const double det = rows[a].coef[0] * rows[b].coef[1] - rows[a].coef[1] * rows[b].coef[0];
      if (std::abs(det) < 1e-12) continue;
      const double x = (rows[a].rhs * rows[b].coef[1] - rows[a].coef[1] * rows[b].rhs) / det;
      const double y = (rows[a].coef[0] * rows[b].rhs - rows[a].rhs * rows[b].coef[0]) / det;
      bool ok = true;
      for (const auto& r : rows) {
        const double lhs = r.coef[0] * x + r.coef[1] * y;
        if (r.sense == Sense::le && lhs > r.rhs + 1e-9) ok = false;
        if (r.sense == Sense::ge && lhs < r.rhs - 1e-9) ok = false;
      }
      if (ok) best = std::max(best, lp.objective[0] * x + lp.objective[1] * y);
    }
  return best;
}

// Optimal transport between uniform marginals is attained at a permutation.
double permutation_oracle(int n, const std::vector<double>& c) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += c[static_cast<std::size_t>(i * n + perm[static_cast<std::size_t>(i)])];
    best = std::min(best, s / n);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("simplex agrees with vertex enumeration on random bounded 2-D programs") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    LinearProgram lp(2);
    lp.objective = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    // A box keeps the program bounded; extra random cuts keep it interesting.
    lp.add({1, 0}, Sense::le, 3);
    lp.add({1, 0}, Sense::ge, -3);
    lp.add({0, 1}, Sense::le, 3);
    lp.add({0, 1}, Sense::ge, -3);
    for (int k = 0; k < 4; ++k) {
      const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
      lp.add({a, b}, Sense::le, rng.uniform(0.1, 2.0));
    }
    auto res = solve_lp(lp);
    REQUIRE(res.status == LpStatus::optimal);
    CHECK(res.value == doctest::Approx(vertex_oracle(lp)).epsilon(1e-9));
  }
}

TEST_CASE("simplex reports infeasible and unbounded programs") {
  LinearProgram a(1);
  a.objective = {1};
  a.add({1}, Sense::le, 0);
  a.add({1}, Sense::ge, 1);
  CHECK(solve_lp(a).status == LpStatus::infeasible);
  LinearProgram b(2);
  b.objective = {1, 1};
  b.add({1, -1}, Sense::le, 1);
  CHECK(solve_lp(b).status == LpStatus::unbounded);
  LinearProgram c(2);
  c.nonnegative = {true, true};
  c.objective = {1, 2};
  c.add({1, 1}, Sense::eq, 1);
  auto r = solve_lp(c);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.value == doctest::Approx(2.0));
  CHECK(r.x[1] == doctest::Approx(1.0));
}

TEST_CASE("transport simplex matches the permutation optimum on uniform marginals") {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = rng.integer(2, 6);
    std::vector<double> c(static_cast<std::size_t>(n * n));
    for (double& x : c) x = rng.uniform(0, 5);
    std::vector<double> w(static_cast<std::size_t>(n), 1.0 / n);
    auto sol = solve_transport(w, w, c);
    CHECK(sol.cost == doctest::Approx(permutation_oracle(n, c)).epsilon(1e-10));
    CHECK(sol.dual_value == doctest::Approx(sol.cost).epsilon(1e-10));
  }
}

TEST_CASE("transport simplex matches the dense simplex on random marginals") {
  Rng rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = rng.integer(2, 5), n = rng.integer(2, 5);
    auto a = random_simplex(rng, m), b = random_simplex(rng, n);
    std::vector<double> c(static_cast<std::size_t>(m * n));
    for (double& x : c) x = rng.uniform(0, 3);
    auto sol = solve_transport(a, b, c);
    LinearProgram lp(m * n);
    lp.nonnegative.assign(static_cast<std::size_t>(m * n), true);
    for (int k = 0; k < m * n; ++k) lp.objective[static_cast<std::size_t>(k)] = -c[static_cast<std::size_t>(k)];
    for (int i = 0; i < m; ++i) {
      std::vector<double> row(static_cast<std::size_t>(m * n), 0.0);
      for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(i * n + j)] = 1.0;
      lp.add(row, Sense::eq, a[static_cast<std::size_t>(i)]);
    }
    for (int j = 0; j < n; ++j) {
      std::vector<double> row(static_cast<std::size_t>(m * n), 0.0);
      for (int i = 0; i < m; ++i) row[static_cast<std::size_t>(i * n + j)] = 1.0;
      lp.add(row, Sense::eq, b[static_cast<std::size_t>(j)]);
    }
    auto dense = solve_lp(lp);
    REQUIRE(dense.status == LpStatus::optimal);
    CHECK(sol.cost == doctest::Approx(-dense.value).epsilon(1e-9));
    // Dual feasibility and complementary slackness.
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        const auto k = static_cast<std::size_t>(i * n + j);
        CHECK(sol.u[static_cast<std::size_t>(i)] + sol.v[static_cast<std::size_t>(j)] <= c[k] + 1e-9);
        if (sol.plan[k] > 1e-12)
          CHECK(sol.u[static_cast<std::size_t>(i)] + sol.v[static_cast<std::size_t>(j)] == doctest::Approx(c[k]).epsilon(1e-9));
      }
  }
}

TEST_CASE("transport rejects unbalanced marginals") {
  std::vector<double> a{0.5, 0.5}, b{0.5, 0.6}, c{0, 1, 1, 0};
  CHECK_THROWS_AS(solve_transport(a, b, c), Rejection);
}
