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

// Measure substrates: probability measures exp(-V(x))dx on an interval,
// tabulated on a grid, and finite metric-measure spaces.

#ifndef CONC_MEASURE_HPP_
#define CONC_MEASURE_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "conc/common.hpp"

namespace conc {

/// Where a measure came from. `params` holds the numbers that matter
/// downstream (cap D of a density-ratio derivation, mass p of a restriction,
/// truncated tail mass of a preset ...).
struct Provenance {
  std::string kind = "potential-grid";
  std::map<std::string, double> params;
};

/// A probability measure exp(-V(x) - logZ) dx on [grid.front(), grid.back()].
///
/// Between grid points the potential is interpolated linearly, so inside a
/// cell the density is an exact exponential. Masses, the CDF, the survival
/// function and the quantile are evaluated in closed form for that model;
/// survival values are accumulated from the right so tail masses keep their
/// relative precision far below machine epsilon.
///
/// Immutable after construction.
class Measure1D {
 public:
  /// Validates the grid (sorted strictly increasing, >= 3 points, finite
  /// potential) and normalizes. Throws Rejection otherwise.
  static Measure1D from_potential(std::vector<double> grid,
                                  std::vector<double> potential,
                                  Provenance provenance = {});

  std::span<const double> grid() const { return grid_; }
  std::span<const double> potential() const { return v_; }
  std::size_t size() const { return grid_.size(); }
  double lower() const { return grid_.front(); }
  double upper() const { return grid_.back(); }
  double log_z() const { return log_z_; }
  double kappa() const { return kappa_; }
  bool logconcave() const { return logconcave_; }
  const Provenance& provenance() const { return provenance_; }

  /// Interpolated potential; +inf outside the support.
  double potential_at(double x) const;
  double density(double x) const;
  double density_at(std::size_t i) const;
  double cdf(double x) const;
  double survival(double x) const;
  double quantile(double u) const;
  /// x with survival(x) = t; keeps relative precision for tiny t.
  double upper_quantile(double t) const;
  double median() const { return median_; }
  /// mu([a, b]).
  double mass_between(double a, double b) const;
  /// integral of x over [a, b].
  double moment_between(double a, double b) const;
  double mean() const { return moment_between(lower(), upper()); }

  /// Mass of cell [x_i, x_{i+1}].
  double cell_mass(std::size_t i) const { return cell_mass_[i]; }
  /// Lumped trapezoid weights at grid nodes, normalized to sum to one. Used
  /// for integrating smooth grid functions.
  const std::vector<double>& node_weights() const { return node_weights_; }

  /// True if V(m + s) == V(m - s) on the grid within `tol` about the median.
  bool symmetric(double tol = 1e-9) const;

  /// Total mass of the exp-linear model before normalization equals one by
  /// construction; this recomputes it from the cell table.
  double total_mass() const;

 private:
  Measure1D() = default;
  std::size_t cell_of(double x) const;
  double left_partial(std::size_t cell, double x) const;
  double right_partial(std::size_t cell, double x) const;

  std::vector<double> grid_;
  std::vector<double> v_;
  double log_z_ = 0.0;
  double kappa_ = 0.0;
  double median_ = 0.0;
  bool logconcave_ = false;
  Provenance provenance_;
  std::vector<double> cell_mass_;
  std::vector<double> cdf_;   // mu([x_0, x_i])
  std::vector<double> sf_;    // mu([x_i, x_n])
  std::vector<double> node_weights_;
};

struct BuildOptions {
  /// Number of grid nodes (4096 cells).
  std::size_t points = 4097;
  /// Presets truncate the support where the neglected tail mass drops below
  /// this value; the estimate is recorded in the provenance.
  double tail_mass = 1e-100;
};

/// Gamma_p: density exp(-|x|^p/p)/Z_p on a symmetric window, p in [1, 8].
Measure1D build_gamma_p(double p, const BuildOptions& opts = {});
/// Standard Gaussian restricted to [a, +inf) (truncated on the right).
Measure1D build_gaussian_restricted(double a, const BuildOptions& opts = {});
/// Arbitrary potential on a sorted grid.
Measure1D build_from_potential(std::vector<double> grid, std::vector<double> potential);

/// Closed-form normalization of Gamma_p: 2 p^{1/p - 1} Gamma(1/p).
double gamma_p_normalizer(double p);

struct SemiConvexity {
  bool holds = false;
  std::size_t worst_index = 0;
  double worst_x = 0.0;
  double min_second_derivative = 0.0;
};

/// V'' >= -kappa at every interior grid point (second-order central
/// differences, boundary nodes excluded).
SemiConvexity check_semi_convexity(const Measure1D& mu, double kappa);

/// d mu2 = exp(phi) d mu1 / normalization, phi given on mu1's grid. Rejects
/// when the attained sup log(d mu2/d mu1) exceeds `cap`.
Measure1D derive_density_ratio(const Measure1D& mu, std::span<const double> phi, double cap);
/// mu restricted to [lo, hi] and renormalized; provenance records p = mu(A).
Measure1D derive_restrict(const Measure1D& mu, double lo, double hi);
Measure1D derive_translate(const Measure1D& mu, double shift);
/// Pushforward under x -> scale * x (scale > 0).
Measure1D derive_dilate(const Measure1D& mu, double scale);

/// Thrown by DiscreteSpace validation when d(i,k) > d(i,j) + d(j,k).
/// Indices are 1-based in the message and in `triple`.
class MetricViolation : public Rejection {
 public:
  MetricViolation(const std::string& what, std::array<int, 3> triple)
      : Rejection(what), triple(triple) {}
  std::array<int, 3> triple;
};

/// Finite metric-measure space. `dist` is row-major n x n.
class DiscreteSpace {
 public:
  static DiscreteSpace create(std::vector<double> dist, std::vector<double> weights);
  static DiscreteSpace create(const std::vector<std::vector<double>>& dist,
                              std::vector<double> weights);

  int size() const { return n_; }
  double d(int i, int j) const { return dist_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& dist() const { return dist_; }
  const std::vector<double>& weights() const { return weights_; }
  double diameter() const;

  /// Same metric, other probability vector (validated).
  DiscreteSpace with_weights(std::vector<double> weights) const;

 private:
  DiscreteSpace() = default;
  int n_ = 0;
  std::vector<double> dist_;
  std::vector<double> weights_;
};

/// Validates a probability vector (nonnegative, sums to one within 1e-9).
void validate_probability(std::span<const double> w, std::size_t n, const char* what);

/// Points on the real line with |x - y| distances; `xs` need not be sorted
/// but must be distinct.
DiscreteSpace line_space(std::span<const double> xs, std::vector<double> weights);
/// Path graph metric on n points, uniform weights.
DiscreteSpace path_space(int n);
/// Random finite space: Euclidean points in the plane or a shortest-path
/// metric of a random weighted graph (chosen by the generator).
DiscreteSpace random_space(Rng& rng, int n);

/// Equal-mass atomization: n atoms at the conditional means of the quantile
/// cells [k/n, (k+1)/n]. Returns positions (sorted) with mass 1/n each.
std::vector<double> atomize(const Measure1D& mu, int n);

}  // namespace conc

#endif  // CONC_MEASURE_HPP_
