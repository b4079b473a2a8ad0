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

// Data-parallel inner loops. Every kernel has a plain serial reference and
// an OpenMP version; the two must agree bit for bit, which holds because
// each output is a max over a fixed candidate set.

#ifndef CONC_KERNELS_HPP_
#define CONC_KERNELS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "conc/common.hpp"

namespace conc::kernels {

void legendre_serial(std::span<const double> xs, std::span<const double> fs,
                     std::span<const double> lambdas, std::span<double> out);
void legendre_parallel(std::span<const double> xs, std::span<const double> fs,
                       std::span<const double> lambdas, std::span<double> out);

/// Worst tail mass over all subsets A with mu(A) >= 1/2 of a finite space.
/// `rank` is the row-major n x n matrix of distance ranks (0 on the
/// diagonal, k for the k-th smallest distinct positive distance), `levels`
/// the number of distinct positive distances. Entry k of the result is
/// max_A mu(complement of A_r) for r in (d_k, d_{k+1}] (d_0 = 0).
std::vector<double> worst_tails_serial(int n, std::span<const int> rank,
                                       std::span<const double> weights, int levels);
std::vector<double> worst_tails_parallel(int n, std::span<const int> rank,
                                         std::span<const double> weights, int levels);

/// max_{i < count} f(i); -inf when count == 0.
template <class F>
double max_over(std::int64_t count, F&& f, Exec exec) {
  double best = -kInfinity;
  if (exec == Exec::serial) {
    for (std::int64_t i = 0; i < count; ++i) {
      const double v = f(i);
      if (v > best) best = v;
    }
    return best;
  }
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
  for (std::int64_t i = 0; i < count; ++i) {
    const double v = f(i);
    if (v > best) best = v;
  }
  return best;
}

}  // namespace conc::kernels

#endif  // CONC_KERNELS_HPP_
