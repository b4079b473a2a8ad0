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

// Isoperimetric and concentration profiles and the transforms between them.

#ifndef CONC_PROFILE_HPP_
#define CONC_PROFILE_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conc/common.hpp"
#include "conc/measure.hpp"
#include "conc/report.hpp"

namespace conc {

enum class ProfileKind { iso, conc, bound_alpha, bound_gamma };
enum class Exactness { exact, half_line_upper_bound, candidate_lower_bound };
/// `linear`: piecewise-linear through the table. `step`: value y[k] holds on
/// (x[k], x[k+1]] and y.back() beyond the last input (left-continuous).
enum class Interp { linear, step };

const char* to_string(ProfileKind k);
const char* to_string(Exactness e);

struct Profile {
  ProfileKind kind = ProfileKind::conc;
  Exactness exactness = Exactness::exact;
  Interp interp = Interp::linear;
  std::vector<double> x;
  std::vector<double> y;

  /// Evaluates the table; linear tables clamp to the end values outside the
  /// covered range.
  double operator()(double t) const;
  /// Smallest t with value >= level (linear: monotone interpolation).
  /// Throws Rejection when the level lies above the table.
  double inverse(double level) const;
  /// Checks strictly increasing inputs.
  void validate() const;

  static Profile tabulate(ProfileKind kind, std::span<const double> xs,
                          const std::function<double(double)>& f);
};

/// n points from lo to hi, equally spaced in log scale.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

/// min of the boundary densities of the two half-lines of mass v.
double half_line_iso(const Measure1D& mu, double v);
/// Default v grid: geometric on [1e-8, 1e-2] then linear to 1/2.
std::vector<double> default_iso_grid();

Profile iso_profile_1d(const Measure1D& mu, std::span<const double> vs);
Profile iso_profile_1d(const Measure1D& mu);

/// Largest tail 1 - mu(A_r) over half-lines (and, for measures without the
/// log-concave and symmetric certificates, intervals) of mass 1/2.
Profile conc_profile_1d(const Measure1D& mu, std::span<const double> rs);
Profile conc_profile_1d(const Measure1D& mu);

/// Exact profile of a finite space by enumerating all subsets of mass >= 1/2
/// (n <= 22). A step table over the distinct pairwise distances.
Profile conc_profile_discrete(const DiscreteSpace& s, Exec exec = Exec::parallel);
/// Random subsets grown greedily; usable for any n, never exact.
Profile conc_profile_sampled(const DiscreteSpace& s, Rng& rng, int samples);

/// alpha from alpha^{-1}(x) = int_{log 2}^x dy / gamma(y); gamma is linear
/// between table points and each cell is integrated in closed form.
Profile iso_to_conc(const Profile& gamma);

/// The shifted profile r -> alpha1(r - r1) - D beyond 2 r1 (log 2 before),
/// r1 = alpha1^{-1}(log 2 + D). For step tables r1 is the first breakpoint
/// after which the value exceeds log 2 + D.
Profile conc_going_down(const Profile& alpha1, double D);
double going_down_shift(const Profile& alpha1, double D);

struct GrowthCondition {
  double kappa = 0.0;
  double delta0 = 1.0;
  double x0 = 0.0;
};

/// gamma2(x) = x / int_{log 2}^{x + D} dy / gamma1(y), on the x of gamma1's
/// table with x + D inside the table. With `growth` and kappa > 0 it first
/// checks gamma1(x) >= 2 sqrt(delta0 kappa x) for x >= x0.
Profile iso_stability_transform(const Profile& gamma1, double D,
                                std::optional<GrowthCondition> growth = std::nullopt);
/// Same, on explicit x values.
Profile iso_stability_transform(const Profile& gamma1, double D, std::span<const double> xs);

struct IsoForm {
  Profile gamma;
  bool feasible = false;
  double r0 = 0.0;
};

/// gamma(x) = x / alpha^{-1}(x) plus whether alpha(r) >= delta0 kappa r^2
/// holds from some r0 in the lower half of the table onwards.
IsoForm conc_to_iso_form(const Profile& alpha, double kappa, double delta0);

enum class FitTemplate { p_exp_conc, p_exp_iso, ratio };

struct FitOptions {
  double p = 1.0;
  /// Reference for `ratio`.
  const Profile* reference = nullptr;
  /// Inputs considered; empty means the whole table.
  double lo = 0.0;
  double hi = kInfinity;
};

/// p-exp-conc: inf (K(r)+1)^{1/p}/r. p-exp-iso: inf I(v)/I_{Gamma_p}(v).
/// ratio: min of profile/reference (max stored in witnesses["max"]).
ConstantEntry fit_constant(const Profile& profile, FitTemplate t, const FitOptions& opts);

}  // namespace conc

#endif  // CONC_PROFILE_HPP_
