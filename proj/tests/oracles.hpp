// Independent reference computations used only by the tests. They share no
// code with the library so that agreement means something.

#ifndef CONC_TESTS_ORACLES_HPP_
#define CONC_TESTS_ORACLES_HPP_

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Adaptive Simpson on [a, b].
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace oracle


namespace oracle {

// Worst tail 1 - mu(A_r) over all A with mu(A) >= 1/2, straight from the
// definition with the strict extension d(x, A) < r.
inline double worst_tail(int n, const std::vector<double>& dist, const std::vector<double>& w,
                         double r) {
  double worst = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double mass = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) mass += w[i];
    if (mass < 0.5 - 1e-12) continue;
    double out = 0.0;
    for (int x = 0; x < n; ++x) {
      bool inside = false;
      for (int a = 0; a < n && !inside; ++a)
        if ((mask >> a & 1) && dist[x * n + a] < r) inside = true;
      if (!inside) out += w[x];
    }
    if (out > worst) worst = out;
  }
  return worst;
}

}  // namespace oracle

#endif  // CONC_TESTS_ORACLES_HPP_
