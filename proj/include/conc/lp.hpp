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

// Exact linear programming: a dense two-phase simplex for small general
// programs and a transportation simplex (tree basis, MODI potentials) for
// optimal transport between discrete marginals.

#ifndef CONC_LP_HPP_
#define CONC_LP_HPP_

#include <span>
#include <vector>

#include "conc/common.hpp"

namespace conc {

enum class Sense { le, ge, eq };

struct LinearProgram {
  int vars = 0;
  /// Variables are free unless marked nonnegative.
  std::vector<bool> nonnegative;
  std::vector<double> objective;  // maximized
  struct Row {
    std::vector<double> coef;
    Sense sense = Sense::le;
    double rhs = 0.0;
  };
  std::vector<Row> rows;

  explicit LinearProgram(int n = 0)
      : vars(n), nonnegative(static_cast<std::size_t>(n), false),
        objective(static_cast<std::size_t>(n), 0.0) {}
  void add(std::vector<double> coef, Sense s, double rhs) { rows.push_back({std::move(coef), s, rhs}); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  std::vector<double> x;
};

/// Two-phase tableau simplex with Bland's rule (no cycling).
LpResult solve_lp(const LinearProgram& lp);

struct TransportSolution {
  double cost = 0.0;
  /// Row-major m x n plan; rows carry the source marginal.
  std::vector<double> plan;
  /// Dual potentials with u_i + v_j <= c_ij, equality on the basis.
  std::vector<double> u, v;
  double dual_value = 0.0;
  int pivots = 0;
};

/// min sum c_ij pi_ij subject to row sums `a`, column sums `b`.
/// `cost` is row-major m x n. Rejects marginals whose totals differ.
TransportSolution solve_transport(std::span<const double> a, std::span<const double> b,
                                  std::span<const double> cost);

}  // namespace conc

#endif  // CONC_LP_HPP_
