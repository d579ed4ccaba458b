// Copyright 2026 The paqplan Authors.
//
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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dfo_routine.h"

namespace paq {

namespace {

// Simplex diameter, in unit-cube coordinates, at which the search restarts.
constexpr double kCollapsed = 1e-6;

std::vector<double> affine(const std::vector<double>& a, const std::vector<double>& b,
                           double t) {
  // a + t * (b - a)
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

}  // namespace

NelderMeadStrategy::NelderMeadStrategy(const SearchSpace& space, std::uint64_t seed)
    : DerivativeFreeStrategy(space, seed) {}

DerivativeFreeStrategy::Routine NelderMeadStrategy::start(std::vector<double> origin) {
  Channel* ch = &channel();
  const std::size_t n = origin.size();
  std::vector<std::vector<double>> pts(n + 1, origin);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += kInitialStep;
  std::vector<double> f(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    ch->point = pts[i];
    f[i] = co_await Ask{ch};
  }

  std::vector<std::size_t> order(n + 1);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    std::vector<std::vector<double>> sorted_pts;
    std::vector<double> sorted_f;
    for (std::size_t i : order) {
      sorted_pts.push_back(std::move(pts[i]));
      sorted_f.push_back(f[i]);
    }
    pts = std::move(sorted_pts);
    f = std::move(sorted_f);

    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        diameter = std::max(diameter, std::abs(pts[i][j] - pts[0][j]));
      }
    }
    if (diameter < kCollapsed) co_return;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);
    }

    const std::vector<double> xr = affine(centroid, pts[n], -kAlpha);
    ch->point = xr;
    const double fr = co_await Ask{ch};
    if (fr < f[0]) {
      std::vector<double> xe = affine(centroid, xr, kGamma);
      ch->point = xe;
      const double fe = co_await Ask{ch};
      if (fe < fr) {
        pts[n] = std::move(xe);
        f[n] = fe;
      } else {
        pts[n] = xr;
        f[n] = fr;
      }
      continue;
    }
    if (fr < f[n - 1]) {
      pts[n] = xr;
      f[n] = fr;
      continue;
    }
    if (fr < f[n]) {
      std::vector<double> xc = affine(centroid, xr, kRho);
      ch->point = xc;
      const double fc = co_await Ask{ch};
      if (fc <= fr) {
        pts[n] = std::move(xc);
        f[n] = fc;
        continue;
      }
    } else {
      std::vector<double> xc = affine(centroid, pts[n], kRho);
      ch->point = xc;
      const double fc = co_await Ask{ch};
      if (fc < f[n]) {
        pts[n] = std::move(xc);
        f[n] = fc;
        continue;
      }
    }
    for (std::size_t i = 1; i <= n; ++i) {
      pts[i] = affine(pts[0], pts[i], kSigma);
      ch->point = pts[i];
      f[i] = co_await Ask{ch};
    }
  }
}

}  // namespace paq
