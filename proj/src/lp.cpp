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

#include "conc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <cstdint>
#include <sstream>

namespace conc {

namespace {

constexpr double kPivotTol = 1e-11;

class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), t_(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0), basis_(static_cast<std::size_t>(rows), -1) {}

  double& at(int r, int c) { return t_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
  double at(int r, int c) const { return t_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
  // Row m_ holds the reduced costs z_j - c_j; column n_ holds right-hand sides.
  double& obj(int c) { return at(m_, c); }
  int& basis(int r) { return basis_[static_cast<std::size_t>(r)]; }

  void pivot(int r, int c) {
    const double p = at(r, c);
    for (int k = 0; k <= n_; ++k) at(r, k) /= p;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (int k = 0; k <= n_; ++k) at(i, k) -= f * at(r, k);
      at(i, c) = 0.0;
    }
    basis(r) = c;
  }

  // Maximizes over columns [0, active); Bland's rule. Returns false if unbounded.
  bool run(int active) {
    for (int iter = 0; iter < 100000; ++iter) {
      int enter = -1;
      for (int c = 0; c < active; ++c)
        if (obj(c) < -kPivotTol) {
          enter = c;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      double best = kInfinity;
      for (int r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = at(r, n_) / a;
        if (leave < 0 || ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && basis(r) < basis(leave))) {
          best = ratio;
          leave = r;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw Rejection("simplex iteration limit reached");
  }

  int rows() const { return m_; }
  int cols() const { return n_; }

 private:
  int m_, n_;
  std::vector<double> t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const int nv = lp.vars;
  // Column map: each free variable becomes a difference of two columns.
  std::vector<int> pos(static_cast<std::size_t>(nv)), neg(static_cast<std::size_t>(nv), -1);
  int cols = 0;
  for (int j = 0; j < nv; ++j) {
    pos[static_cast<std::size_t>(j)] = cols++;
    if (!lp.nonnegative[static_cast<std::size_t>(j)]) neg[static_cast<std::size_t>(j)] = cols++;
  }
  const int structural = cols;
  const int m = static_cast<int>(lp.rows.size());
  std::vector<double> sign(static_cast<std::size_t>(m), 1.0);
  std::vector<Sense> sense(static_cast<std::size_t>(m));
  int slacks = 0, artificials = 0;
  for (int r = 0; r < m; ++r) {
    const auto& row = lp.rows[static_cast<std::size_t>(r)];
    Sense s = row.sense;
    if (row.rhs < 0.0) {
      sign[static_cast<std::size_t>(r)] = -1.0;
      if (s == Sense::le) s = Sense::ge;
      else if (s == Sense::ge) s = Sense::le;
    }
    sense[static_cast<std::size_t>(r)] = s;
    if (s != Sense::eq) ++slacks;
    if (s != Sense::le) ++artificials;
  }
  const int total = structural + slacks + artificials;
  Tableau t(m, total);
  int slack_col = structural, art_col = structural + slacks;
  for (int r = 0; r < m; ++r) {
    const auto& row = lp.rows[static_cast<std::size_t>(r)];
    const double sg = sign[static_cast<std::size_t>(r)];
    for (int j = 0; j < nv; ++j) {
      const double a = sg * row.coef[static_cast<std::size_t>(j)];
      t.at(r, pos[static_cast<std::size_t>(j)]) = a;
      if (neg[static_cast<std::size_t>(j)] >= 0) t.at(r, neg[static_cast<std::size_t>(j)]) = -a;
    }
    t.at(r, total) = sg * row.rhs;
    switch (sense[static_cast<std::size_t>(r)]) {
      case Sense::le:
        t.at(r, slack_col) = 1.0;
        t.basis(r) = slack_col++;
        break;
      case Sense::ge:
        t.at(r, slack_col++) = -1.0;
        t.at(r, art_col) = 1.0;
        t.basis(r) = art_col++;
        break;
      case Sense::eq:
        t.at(r, art_col) = 1.0;
        t.basis(r) = art_col++;
        break;
    }
  }
  LpResult res;
  const int first_art = structural + slacks;
  if (artificials > 0) {
    // Phase one: maximize -sum(artificials).
    for (int c = 0; c <= total; ++c) t.obj(c) = 0.0;
    for (int c = first_art; c < total; ++c) t.obj(c) = 1.0;
    for (int r = 0; r < m; ++r)
      if (t.basis(r) >= first_art)
        for (int c = 0; c <= total; ++c) t.obj(c) -= t.at(r, c);
    t.run(total);
    if (t.obj(total) < -1e-9) {
      res.status = LpStatus::infeasible;
      return res;
    }
    // Drive remaining artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
      if (t.basis(r) < first_art) continue;
      for (int c = 0; c < first_art; ++c)
        if (std::abs(t.at(r, c)) > 1e-9) {
          t.pivot(r, c);
          break;
        }
    }
    for (int r = 0; r < m; ++r)
      for (int c = first_art; c < total; ++c)
        if (t.basis(r) != c) t.at(r, c) = 0.0;
  }
  // Phase two on the original objective; artificial columns stay out.
  for (int c = 0; c <= total; ++c) t.obj(c) = 0.0;
  for (int j = 0; j < nv; ++j) {
    const double cj = lp.objective[static_cast<std::size_t>(j)];
    t.obj(pos[static_cast<std::size_t>(j)]) = -cj;
    if (neg[static_cast<std::size_t>(j)] >= 0) t.obj(neg[static_cast<std::size_t>(j)]) = cj;
  }
  for (int r = 0; r < m; ++r) {
    const int b = t.basis(r);
    const double cb = -t.obj(b);
    if (cb == 0.0) continue;
    for (int c = 0; c <= total; ++c) t.obj(c) += cb * t.at(r, c);
  }
  if (!t.run(first_art)) {
    res.status = LpStatus::unbounded;
    return res;
  }
  std::vector<double> col(static_cast<std::size_t>(total), 0.0);
  for (int r = 0; r < m; ++r) col[static_cast<std::size_t>(t.basis(r))] = t.at(r, total);
  res.x.assign(static_cast<std::size_t>(nv), 0.0);
  res.value = 0.0;
  for (int j = 0; j < nv; ++j) {
    double v = col[static_cast<std::size_t>(pos[static_cast<std::size_t>(j)])];
    if (neg[static_cast<std::size_t>(j)] >= 0) v -= col[static_cast<std::size_t>(neg[static_cast<std::size_t>(j)])];
    res.x[static_cast<std::size_t>(j)] = v;
    res.value += lp.objective[static_cast<std::size_t>(j)] * v;
  }
  res.status = LpStatus::optimal;
  return res;
}

// ---------------------------------------------------------------------------
// Transportation simplex.

namespace {

struct Cell {
  int i, j;
  double flow;
};

class TransportTree {
 public:
  TransportTree(int m, int n, std::span<const double> cost)
      : m_(m), n_(n), cost_(cost), adj_(static_cast<std::size_t>(m + n)) {}

  void add(int i, int j, double flow) {
    const int id = static_cast<int>(cells_.size());
    cells_.push_back({i, j, flow});
    adj_[static_cast<std::size_t>(i)].push_back(id);
    adj_[static_cast<std::size_t>(m_ + j)].push_back(id);
  }

  double c(int i, int j) const { return cost_[static_cast<std::size_t>(i) * n_ + j]; }

  void potentials(std::vector<double>& u, std::vector<double>& v) const {
    u.assign(static_cast<std::size_t>(m_), 0.0);
    v.assign(static_cast<std::size_t>(n_), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(m_ + n_), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (int id : adj_[static_cast<std::size_t>(node)]) {
        const Cell& e = cells_[static_cast<std::size_t>(id)];
        const int other = node < m_ ? m_ + e.j : e.i;
        if (seen[static_cast<std::size_t>(other)]) continue;
        seen[static_cast<std::size_t>(other)] = 1;
        if (node < m_) v[static_cast<std::size_t>(e.j)] = c(e.i, e.j) - u[static_cast<std::size_t>(e.i)];
        else u[static_cast<std::size_t>(e.i)] = c(e.i, e.j) - v[static_cast<std::size_t>(e.j)];
        stack.push_back(other);
      }
    }
  }

  // Tree path from column node of j to row node i, as cell ids.
  std::vector<int> path(int i, int j) const {
    std::vector<int> parent_edge(static_cast<std::size_t>(m_ + n_), -1);
    std::vector<char> seen(static_cast<std::size_t>(m_ + n_), 0);
    std::vector<int> queue{i};
    seen[static_cast<std::size_t>(i)] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const int node = queue[h];
      if (node == m_ + j) break;
      for (int id : adj_[static_cast<std::size_t>(node)]) {
        const Cell& e = cells_[static_cast<std::size_t>(id)];
        const int other = node < m_ ? m_ + e.j : e.i;
        if (seen[static_cast<std::size_t>(other)]) continue;
        seen[static_cast<std::size_t>(other)] = 1;
        parent_edge[static_cast<std::size_t>(other)] = id;
        queue.push_back(other);
      }
    }
    std::vector<int> out;
    int node = m_ + j;
    while (node != i) {
      const int id = parent_edge[static_cast<std::size_t>(node)];
      out.push_back(id);
      const Cell& e = cells_[static_cast<std::size_t>(id)];
      node = node < m_ ? m_ + e.j : e.i;
    }
    return out;
  }

  void replace(int id, int i, int j, double flow) {
    Cell& old = cells_[static_cast<std::size_t>(id)];
    auto drop = [id](std::vector<int>& list) { list.erase(std::find(list.begin(), list.end(), id)); };
    drop(adj_[static_cast<std::size_t>(old.i)]);
    drop(adj_[static_cast<std::size_t>(m_ + old.j)]);
    old = {i, j, flow};
    adj_[static_cast<std::size_t>(i)].push_back(id);
    adj_[static_cast<std::size_t>(m_ + j)].push_back(id);
  }

  std::vector<Cell>& cells() { return cells_; }

 private:
  int m_, n_;
  std::span<const double> cost_;
  std::vector<Cell> cells_;
  std::vector<std::vector<int>> adj_;
};

}  // namespace

TransportSolution solve_transport(std::span<const double> a, std::span<const double> b,
                                  std::span<const double> cost) {
  const int m = static_cast<int>(a.size()), n = static_cast<int>(b.size());
  if (m == 0 || n == 0) throw Rejection("transport marginals must be nonempty");
  if (cost.size() != static_cast<std::size_t>(m) * n) throw Rejection("cost matrix has the wrong size");
  double sa = 0.0, sb = 0.0, cmax = 0.0;
  for (double x : a) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Rejection("marginal masses must be finite and nonnegative");
    sa += x;
  }
  for (double x : b) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Rejection("marginal masses must be finite and nonnegative");
    sb += x;
  }
  for (double c : cost) {
    if (!std::isfinite(c)) throw Rejection("transport costs must be finite");
    cmax = std::max(cmax, std::abs(c));
  }
  if (std::abs(sa - sb) > 1e-9 * std::max(1.0, sa)) {
    std::ostringstream os;
    os << "infeasible marginals: totals " << sa << " and " << sb << " differ";
    throw Rejection(os.str());
  }

  // Northwest corner start: a spanning tree of m + n - 1 cells.
  TransportTree tree(m, n, cost);
  {
    std::vector<double> ra(a.begin(), a.end()), rb(b.begin(), b.end());
    int i = 0, j = 0;
    while (i < m && j < n) {
      const double x = (i == m - 1 && j == n - 1) ? std::max(ra[i], rb[j]) : std::min(ra[i], rb[j]);
      tree.add(i, j, std::max(x, 0.0));
      ra[static_cast<std::size_t>(i)] -= x;
      rb[static_cast<std::size_t>(j)] -= x;
      if (i == m - 1) ++j;
      else if (j == n - 1) ++i;
      else if (ra[static_cast<std::size_t>(i)] <= rb[static_cast<std::size_t>(j)]) ++i;
      else ++j;
    }
  }

  const double eps = 1e-12 * (1.0 + cmax);
  const std::int64_t cells = static_cast<std::int64_t>(m) * n;
  const std::int64_t block = std::max<std::int64_t>(16, static_cast<std::int64_t>(std::sqrt(static_cast<double>(cells))));
  std::vector<double> u, v;
  std::int64_t cursor = 0;
  int degenerate_run = 0;
  TransportSolution sol;
  const int max_pivots = 200 * (m + n) * (m + n) + 1000;
  for (;;) {
    tree.potentials(u, v);
    // Entering cell: block pricing, or Bland's first-index rule during long
    // degenerate stretches.
    std::int64_t enter = -1;
    double best = -eps;
    const bool bland = degenerate_run > 50;
    for (std::int64_t scanned = 0; scanned < cells;) {
      const std::int64_t stop = std::min(cells, scanned + block);
      for (; scanned < stop; ++scanned) {
        const std::int64_t k = bland ? scanned : (cursor + scanned) % cells;
        const int i = static_cast<int>(k / n), j = static_cast<int>(k % n);
        const double rc = tree.c(i, j) - u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)];
        if (rc < best) {
          best = rc;
          enter = k;
          if (bland) break;
        }
      }
      if (enter >= 0) break;
    }
    if (enter < 0) break;
    if (!bland) cursor = (enter + 1) % cells;
    if (++sol.pivots > max_pivots) throw Rejection("transport simplex pivot limit reached");

    const int ei = static_cast<int>(enter / n), ej = static_cast<int>(enter % n);
    auto cyc = tree.path(ei, ej);
    auto& cs = tree.cells();
    // Cells at even positions along the path lose mass.
    double theta = kInfinity;
    int leave = -1;
    for (std::size_t k = 0; k < cyc.size(); k += 2) {
      const Cell& c = cs[static_cast<std::size_t>(cyc[k])];
      const double f = c.flow;
      const bool better = f < theta ||
                          (f == theta && leave >= 0 &&
                           c.i * n + c.j < cs[static_cast<std::size_t>(leave)].i * n + cs[static_cast<std::size_t>(leave)].j);
      if (better) {
        theta = f;
        leave = cyc[k];
      }
    }
    degenerate_run = theta <= 0.0 ? degenerate_run + 1 : 0;
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      Cell& c = cs[static_cast<std::size_t>(cyc[k])];
      c.flow += k % 2 == 0 ? -theta : theta;
      if (c.flow < 0.0) c.flow = 0.0;
    }
    tree.replace(leave, ei, ej, theta);
  }

  sol.plan.assign(static_cast<std::size_t>(cells), 0.0);
  sol.cost = 0.0;
  for (const Cell& c : tree.cells()) {
    sol.plan[static_cast<std::size_t>(c.i) * n + c.j] += c.flow;
    sol.cost += c.flow * tree.c(c.i, c.j);
  }
  sol.u = u;
  sol.v = v;
  sol.dual_value = 0.0;
  for (int i = 0; i < m; ++i) sol.dual_value += a[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
  for (int j = 0; j < n; ++j) sol.dual_value += b[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
  return sol;
}

}  // namespace conc
