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

#include "conc/kernels.hpp"

#include <algorithm>
#include <array>

namespace conc::kernels {

namespace {

double conjugate_at(std::span<const double> xs, std::span<const double> fs, double lambda) {
  const std::size_t n = xs.size();
  std::size_t arg = 0;
  double best = lambda * xs[0] - fs[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double v = lambda * xs[i] - fs[i];
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  if (n >= 2 && arg == n - 1) {
    const double edge = (fs[n - 1] - fs[n - 2]) / (xs[n - 1] - xs[n - 2]);
    if (lambda > edge * (1.0 + 1e-12) + 1e-15) return kInfinity;
  }
  return best;
}

constexpr int kMaxPoints = 24;

struct TailScan {
  int n;
  const int* rank;
  const double* w;
  int levels;
  std::vector<double>* rec;

  // Depth-first over include/exclude decisions, carrying min ranks to A.
  void visit(int depth, double mass, bool empty, const std::array<int, kMaxPoints>& mind) const {
    if (depth == n) {
      if (empty || mass < 0.5 - 1e-12) return;
      leaf(mind);
      return;
    }
    visit(depth + 1, mass, empty, mind);
    std::array<int, kMaxPoints> next = mind;
    const int* row = rank + static_cast<std::ptrdiff_t>(depth) * n;
    for (int x = 0; x < n; ++x) next[x] = std::min(next[x], row[x]);
    visit(depth + 1, mass + w[depth], false, next);
  }

  void leaf(const std::array<int, kMaxPoints>& mind) const {
    // Outside mass beyond level k is sum of w over points with mind > k;
    // record it at k = (rank - 1) for each distinct rank present.
    std::array<std::pair<int, double>, kMaxPoints> pts;
    int m = 0;
    for (int x = 0; x < n; ++x)
      if (mind[x] > 0) pts[m++] = {mind[x], w[x]};
    std::sort(pts.begin(), pts.begin() + m,
              [](const auto& a, const auto& b) { return a.first > b.first; });
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      acc += pts[i].second;
      if (i + 1 < m && pts[i + 1].first == pts[i].first) continue;
      double& slot = (*rec)[static_cast<std::size_t>(pts[i].first - 1)];
      if (acc > slot) slot = acc;
    }
  }
};

std::vector<double> finish(std::vector<double> rec) {
  for (std::size_t k = rec.size() - 1; k-- > 0;) rec[k] = std::max(rec[k], rec[k + 1]);
  return rec;
}

void check_size(int n) {
  if (n < 1 || n > kMaxPoints) throw Rejection("subset enumeration supports 1..24 points");
}

}  // namespace

void legendre_serial(std::span<const double> xs, std::span<const double> fs,
                     std::span<const double> lambdas, std::span<double> out) {
  for (std::size_t k = 0; k < lambdas.size(); ++k) out[k] = conjugate_at(xs, fs, lambdas[k]);
}

void legendre_parallel(std::span<const double> xs, std::span<const double> fs,
                       std::span<const double> lambdas, std::span<double> out) {
  const auto count = static_cast<std::int64_t>(lambdas.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    out[uk] = conjugate_at(xs, fs, lambdas[uk]);
  }
}

std::vector<double> worst_tails_serial(int n, std::span<const int> rank,
                                       std::span<const double> weights, int levels) {
  check_size(n);
  std::vector<double> rec(static_cast<std::size_t>(levels) + 1, 0.0);
  std::array<int, kMaxPoints> mind;
  mind.fill(levels + 1);
  TailScan scan{n, rank.data(), weights.data(), levels, &rec};
  scan.visit(0, 0.0, true, mind);
  return finish(std::move(rec));
}

std::vector<double> worst_tails_parallel(int n, std::span<const int> rank,
                                         std::span<const double> weights, int levels) {
  check_size(n);
  // Fix the first `split` decisions per block; blocks are independent.
  const int split = std::min(n, 8);
  const int blocks = 1 << split;
  const std::size_t width = static_cast<std::size_t>(levels) + 1;
  std::vector<double> all(static_cast<std::size_t>(blocks) * width, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (int b = 0; b < blocks; ++b) {
    std::vector<double> rec(width, 0.0);
    std::array<int, kMaxPoints> mind;
    mind.fill(levels + 1);
    double mass = 0.0;
    bool empty = true;
    for (int j = 0; j < split; ++j) {
      if (!(b >> j & 1)) continue;
      const int* row = rank.data() + static_cast<std::ptrdiff_t>(j) * n;
      for (int x = 0; x < n; ++x) mind[x] = std::min(mind[x], row[x]);
      mass += weights[static_cast<std::size_t>(j)];
      empty = false;
    }
    TailScan scan{n, rank.data(), weights.data(), levels, &rec};
    scan.visit(split, mass, empty, mind);
    std::copy(rec.begin(), rec.end(), all.begin() + static_cast<std::ptrdiff_t>(b * width));
  }
  std::vector<double> rec(width, 0.0);
  for (int b = 0; b < blocks; ++b)
    for (std::size_t k = 0; k < width; ++k) rec[k] = std::max(rec[k], all[b * width + k]);
  return finish(std::move(rec));
}

}  // namespace conc::kernels
