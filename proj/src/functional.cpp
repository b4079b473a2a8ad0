// Copyright 2026 The conc-toolkit Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "conc/functional.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "conc/cost.hpp"

namespace conc {

namespace {

constexpr double kGlNodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                  0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                  0.2223810344533745, 0.1012285362903763};

// u log u - u + 1 >= 0, the entropy integrand after normalizing by the mean.
double ent_kernel(double u) { return u > 0.0 ? u * std::log(std::max(u, 1e-300)) - u + 1.0 : 1.0; }

double conj_q(double q, double y) {
  if (q == 1.0) return y;
  return phi_star(q, y);
}

void require_grid(const Measure1D& mu) {
  if (mu.size() < 256) throw Rejection("functional inequalities need a grid of at least 256 points");
}

}  // namespace

GridFunction GridFunction::sample(const Measure1D& mu, const std::function<double(double)>& f) {
  const auto x = mu.grid();
  const std::size_t n = x.size();
  GridFunction g;
  g.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.values[i] = f(x[i]);
  g.derivative.resize(n);
  for (std::size_t i = 1; i + 1 < n; ++i)
    g.derivative[i] = (g.values[i + 1] - g.values[i - 1]) / (x[i + 1] - x[i - 1]);
  g.derivative[0] = (g.values[1] - g.values[0]) / (x[1] - x[0]);
  g.derivative[n - 1] = (g.values[n - 1] - g.values[n - 2]) / (x[n - 1] - x[n - 2]);
  for (double& d : g.derivative) d = std::abs(d);
  g.validate(mu);
  return g;
}

GridFunction GridFunction::sample(const Measure1D& mu, const std::function<double(double)>& f,
                                  const std::function<double(double)>& df) {
  GridFunction g;
  for (double x : mu.grid()) {
    g.values.push_back(f(x));
    g.derivative.push_back(std::abs(df(x)));
  }
  g.validate(mu);
  return g;
}

void GridFunction::validate(const Measure1D& mu) const {
  if (values.size() != mu.size() || derivative.size() != mu.size())
    throw Rejection("grid function does not match the measure grid");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]) || !std::isfinite(derivative[i]))
      throw Rejection("grid function values must be finite");
}

double entropy(const Measure1D& mu, const std::vector<double>& h) {
  const auto& w = mu.node_weights();
  double mean = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) mean += w[i] * h[i];
  if (mean <= 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) s += w[i] * ent_kernel(h[i] / mean);
  return mean * s;
}

// ---------------------------------------------------------------------------

double poincare_eigenvalue(const Measure1D& mu) {
  const auto x = mu.grid();
  const auto& w = mu.node_weights();
  const std::size_t n = x.size();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
  for (std::size_t i = 0; i < n; ++i)
    if (!(w[i] > 0.0)) throw Rejection("Poincare solve needs positive node weights");
  for (std::size_t c = 0; c + 1 < n; ++c) {
    const double h = x[c + 1] - x[c];
    const double k = mu.cell_mass(c) / (h * h);
    diag[static_cast<Eigen::Index>(c)] += k / w[c];
    diag[static_cast<Eigen::Index>(c + 1)] += k / w[c + 1];
    sub[static_cast<Eigen::Index>(c)] = -k / std::sqrt(w[c] * w[c + 1]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Rejection("tridiagonal eigen-solve failed");
  return es.eigenvalues()[1];
}

ConstantEntry poincare_constant_1d(const Measure1D& mu) {
  require_grid(mu);
  const double fine = poincare_eigenvalue(mu);
  std::vector<double> xs, vs;
  const auto x = mu.grid();
  const auto v = mu.potential();
  for (std::size_t i = 0; i < x.size(); i += 2) {
    xs.push_back(x[i]);
    vs.push_back(v[i]);
  }
  if (xs.back() != x.back()) {
    xs.push_back(x.back());
    vs.push_back(v.back());
  }
  const double coarse = poincare_eigenvalue(Measure1D::from_potential(xs, vs, mu.provenance()));
  const double extrapolated = (4.0 * fine - coarse) / 3.0;
  ConstantEntry e;
  e.id = "D_Poin";
  e.value = std::sqrt(std::max(extrapolated, 0.0));
  e.direction = Direction::two_sided;
  e.certified = false;
  e.method = "tridiagonal generalized eigenproblem with Richardson step";
  e.witnesses["lambda_fine"] = fine;
  e.witnesses["lambda_coarse"] = coarse;
  e.witnesses["D_fine"] = std::sqrt(fine);
  return e;
}

// ---------------------------------------------------------------------------

double logsob_ratio(const Measure1D& mu, const std::function<double(double)>& f,
                    const std::function<double(double)>& df) {
  const auto x = mu.grid();
  const auto v = mu.potential();
  const std::size_t cells = x.size() - 1;
  std::vector<double> node_x(cells * 8), node_w(cells * 8);
  for (std::size_t c = 0; c < cells; ++c) {
    const double h = x[c + 1] - x[c];
    for (int k = 0; k < 8; ++k) {
      const double t = 0.5 * (1.0 + kGlNodes[k]);
      node_x[c * 8 + static_cast<std::size_t>(k)] = x[c] + t * h;
      const double pot = v[c] + t * (v[c + 1] - v[c]);
      node_w[c * 8 + static_cast<std::size_t>(k)] = 0.5 * h * kGlWeights[k] * std::exp(-pot - mu.log_z());
    }
  }
  double energy = 0.0, mass = 0.0;
  std::vector<double> sq(node_x.size());
  for (std::size_t k = 0; k < node_x.size(); ++k) {
    const double fv = f(node_x[k]), dv = df(node_x[k]);
    sq[k] = fv * fv;
    energy += node_w[k] * dv * dv;
    mass += node_w[k] * sq[k];
  }
  if (!(mass > 0.0) || !std::isfinite(mass) || !std::isfinite(energy)) return kInfinity;
  double ent = 0.0;
  for (std::size_t k = 0; k < node_x.size(); ++k) ent += node_w[k] * ent_kernel(sq[k] / mass);
  ent *= mass;
  if (!(ent > 1e-14 * mass)) return kInfinity;
  return energy / ent;
}

namespace {

struct LsCandidate {
  std::string family;
  std::vector<double> params;
};

double ls_eval(const Measure1D& mu, const LsCandidate& c, double m) {
  if (c.family == "exp") {
    const double l = c.params[0];
    return logsob_ratio(mu, [=](double x) { return std::exp(0.5 * l * (x - m)); },
                        [=](double x) { return 0.5 * l * std::exp(0.5 * l * (x - m)); });
  }
  if (c.family == "x-exp") {
    const double l = c.params[0], a = c.params[1];
    return logsob_ratio(mu, [=](double x) { return (x - m + a) * std::exp(0.5 * l * (x - m)); },
                        [=](double x) { return (1.0 + 0.5 * l * (x - m + a)) * std::exp(0.5 * l * (x - m)); });
  }
  // Hat bump 1 + a max(0, 1 - |x - c| / w).
  const double ctr = c.params[0], w = std::abs(c.params[1]), a = c.params[2];
  if (w <= 0.0) return kInfinity;
  return logsob_ratio(mu, [=](double x) { return 1.0 + a * std::max(0.0, 1.0 - std::abs(x - ctr) / w); },
                      [=](double x) { return std::abs(x - ctr) < w ? a / w : 0.0; });
}

}  // namespace

ConstantEntry logsob_constant_1d(const Measure1D& mu, Exec exec) {
  require_grid(mu);
  const double m = mu.median();
  const double s = std::max((mu.quantile(0.75) - mu.quantile(0.25)) / 1.349, 1e-12);
  std::vector<LsCandidate> cands;
  for (double l : {0.01, 0.03, 0.1, 0.3, 0.5, 1.0, 2.0, 3.0}) {
    cands.push_back({"exp", {l / s}});
    cands.push_back({"exp", {-l / s}});
  }
  for (double l : {0.0, 0.1, -0.1, 0.5, -0.5, 1.0, -1.0})
    for (double a : {0.0, 1.0, -1.0}) cands.push_back({"x-exp", {l / s, a * s}});
  for (double u : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99})
    for (double w : {0.25, 0.5, 1.0, 2.0})
      for (double a : {0.1, 1.0, 10.0}) cands.push_back({"bump", {mu.quantile(u), w * s, a}});
  std::vector<double> ratio(cands.size());
  const auto count = static_cast<std::int64_t>(cands.size());
  if (exec == Exec::serial) {
    for (std::int64_t k = 0; k < count; ++k) ratio[static_cast<std::size_t>(k)] = ls_eval(mu, cands[static_cast<std::size_t>(k)], m);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < count; ++k) ratio[static_cast<std::size_t>(k)] = ls_eval(mu, cands[static_cast<std::size_t>(k)], m);
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < ratio.size(); ++k)
    if (ratio[k] < ratio[best]) best = k;
  if (!std::isfinite(ratio[best])) throw Rejection("all log-Sobolev candidates have zero entropy");
  // Pattern search on the best candidate's parameters.
  LsCandidate cur = cands[best];
  double value = ratio[best];
  std::vector<double> step(cur.params.size());
  for (std::size_t i = 0; i < step.size(); ++i) step[i] = 0.25 * std::max(std::abs(cur.params[i]), 0.1 * s);
  for (int round = 0; round < 200; ++round) {
    bool improved = false;
    for (std::size_t i = 0; i < step.size(); ++i)
      for (double dir : {1.0, -1.0}) {
        LsCandidate trial = cur;
        trial.params[i] += dir * step[i];
        const double r = ls_eval(mu, trial, m);
        if (r < value) {
          value = r;
          cur = std::move(trial);
          improved = true;
        }
      }
    if (!improved) {
      bool small = true;
      for (double& st : step) {
        st *= 0.5;
        if (st > 1e-6 * s) small = false;
      }
      if (small) break;
    }
  }
  ConstantEntry e;
  e.id = "rho_LS";
  e.value = value;
  e.direction = Direction::upper;
  e.certified = true;
  e.method = "candidate minimum, best family " + cur.family;
  for (std::size_t i = 0; i < cur.params.size(); ++i) e.witnesses["param_" + std::to_string(i)] = cur.params[i];
  return e;
}

// ---------------------------------------------------------------------------

FunctionalEval functional_inequality_eval(const Measure1D& mu, const GridFunction& f,
                                          FunctionalForm form, double q, double D, double rel_tol) {
  require_grid(mu);
  f.validate(mu);
  if (!(D > 0.0)) throw Rejection("functional inequality needs D > 0");
  const auto& w = mu.node_weights();
  const std::size_t n = f.values.size();
  FunctionalEval out;
  if (form == FunctionalForm::q_log_sobolev) {
    if (!(q >= 1.0 && q <= 2.0)) throw Rejection("q-log-Sobolev needs q in [1, 2]");
    std::vector<double> h(n);
    double grad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = std::pow(std::abs(f.values[i]), q);
      grad += w[i] * std::pow(f.derivative[i], q);
    }
    const double ent = entropy(mu, h);
    out.lhs = D * std::pow(ent, 1.0 / q);
    out.rhs = std::pow(grad, 1.0 / q);
    out.trivial = ent <= 0.0;
  } else {
    if (!(q >= 1.0)) throw Rejection("modified log-Sobolev needs q in [1, inf]");
    std::vector<double> h(n);
    double rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::abs(f.values[i]), d = f.derivative[i];
      h[i] = a * a;
      double term;
      if (q <= 2.0) {
        // f^2 (|f'| / (D |f|))^q / q without dividing by |f|.
        term = d == 0.0 ? 0.0 : std::pow(a, 2.0 - q) * std::pow(d / D, q) / q;
      } else if (a == 0.0) {
        term = d == 0.0 ? 0.0 : kInfinity;
      } else {
        term = a * a * conj_q(q, d / (D * a));
      }
      rhs += w[i] * term;
    }
    out.lhs = entropy(mu, h);
    out.rhs = rhs;
    out.trivial = out.lhs <= 0.0;
  }
  out.satisfied = out.trivial || is_plus_infinity(out.rhs) || out.lhs <= out.rhs * (1.0 + rel_tol);
  return out;
}

double ls_from_mls_factor(double q) {
  if (!(q >= 1.0 && q <= 2.0)) throw Rejection("the substitution f = g^{q/2} needs q in [1, 2]");
  return 2.0 / q * std::pow(q, 1.0 / q);
}

}  // namespace conc
