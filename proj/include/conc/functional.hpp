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

#ifndef CONC_FUNCTIONAL_HPP_
#define CONC_FUNCTIONAL_HPP_

#include <functional>
#include <string>
#include <vector>

#include "conc/common.hpp"
#include "conc/measure.hpp"
#include "conc/report.hpp"

namespace conc {

/// Values of f at the grid nodes of a measure, with |f'| at the same nodes.
struct GridFunction {
  std::vector<double> values;
  std::vector<double> derivative;

  /// Central differences inside, one-sided at the two ends.
  static GridFunction sample(const Measure1D& mu, const std::function<double(double)>& f);
  static GridFunction sample(const Measure1D& mu, const std::function<double(double)>& f,
                             const std::function<double(double)>& df);
  void validate(const Measure1D& mu) const;
};

/// Ent_mu(h) = int h log h - (int h) log(int h) with node weights, 0 log 0 = 0.
double entropy(const Measure1D& mu, const std::vector<double>& h);

/// sqrt of the smallest nonzero generalized eigenvalue of int f'^2 / Var(f),
/// with a Richardson step against the half-resolution grid.
ConstantEntry poincare_constant_1d(const Measure1D& mu);

/// Raw discrete eigenvalue on the measure's own grid.
double poincare_eigenvalue(const Measure1D& mu);

/// Upper bound on the best rho in rho Ent(f^2) <= int f'^2, from candidate families.
ConstantEntry logsob_constant_1d(const Measure1D& mu, Exec exec = Exec::parallel);

/// int f'^2 dmu / Ent(f^2) for a smooth f, by Gauss-Legendre on each cell.
double logsob_ratio(const Measure1D& mu, const std::function<double(double)>& f,
                    const std::function<double(double)>& df);

enum class FunctionalForm { q_log_sobolev, modified_log_sobolev };

struct FunctionalEval {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  /// Ent was zero, so the inequality holds trivially.
  bool trivial = false;
};

/// q-LS: D Ent(|f|^q)^{1/q} <= ||f'||_q, q in [1, 2].
/// mod-LS: Ent(f^2) <= int f^2 phi_{*,q}(|f'| / (D |f|)), q in [1, inf].
FunctionalEval functional_inequality_eval(const Measure1D& mu, const GridFunction& f,
                                          FunctionalForm form, double q, double D,
                                          double rel_tol = 1e-9);

/// D_LS_q / D_mLS_q for q in [1, 2], from the substitution f = g^{q/2}.
double ls_from_mls_factor(double q);

}  // namespace conc

#endif  // CONC_FUNCTIONAL_HPP_
