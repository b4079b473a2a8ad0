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

#ifndef CONC_COMMON_HPP_
#define CONC_COMMON_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace conc {

/// Raised whenever an operation's precondition or validity check fails.
/// The message names the offending input (grid point, triple, witness ...).
class Rejection : public std::runtime_error {
 public:
  explicit Rejection(const std::string& what) : std::runtime_error(what) {}
};

/// The +infinity sentinel. It is IEEE +inf, never a large finite stand-in,
/// so ordinary comparisons and min/max propagate it correctly.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool is_plus_infinity(double v) { return v == kInfinity; }

inline constexpr double kLog2 = 0.69314718055994530942;
inline constexpr double kPi = 3.14159265358979323846;

/// Counter-based generator (splitmix64) so that every suite instance can own
/// an independent, reproducible stream derived from (seed, index).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (stream * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL));
    r.next();
    return r.next();
  }

 private:
  std::uint64_t state_;
};

/// Kernels come in a serial reference form and an OpenMP form; both must
/// produce identical results.
enum class Exec { serial, parallel };

/// Caps the OpenMP team size (<= 0 restores the runtime default).
void set_jobs(int jobs);

/// Random probability vector with strictly positive entries.
std::vector<double> random_simplex(Rng& rng, int n, double floor = 1e-3);

}  // namespace conc

#endif  // CONC_COMMON_HPP_
