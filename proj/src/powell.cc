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

#include <cmath>

#include "dfo_routine.h"

namespace paq {

namespace {

std::vector<double> along(const std::vector<double>& x, const std::vector<double>& dir, double t) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + t * dir[i];
  return out;
}

// Relative drop over one sweep below which the search restarts.
constexpr double kStall = 1e-10;

}  // namespace

PowellStrategy::PowellStrategy(const SearchSpace& space, std::uint64_t seed)
    : DerivativeFreeStrategy(space, seed) {}

DerivativeFreeStrategy::Routine PowellStrategy::start(std::vector<double> origin) {
  Channel* ch = &channel();
  const std::size_t n = origin.size();
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;

  std::vector<std::vector<double>> dirs(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) dirs[i][i] = 1.0;
  std::vector<double> x = std::move(origin);
  ch->point = x;
  double fx = co_await Ask{ch};

  while (true) {
    const std::vector<double> x_start = x;
    const double f_start = fx;
    double biggest_drop = 0.0;
    std::size_t biggest = 0;

    for (std::size_t step = 0; step <= n; ++step) {
      std::vector<double> dir;
      if (step < n) {
        dir = dirs[step];
      } else {
        dir = along(x, x_start, -1.0);  // x - x_start
        double norm = 0.0;
        for (double v : dir) norm += v * v;
        norm = std::sqrt(norm);
        if (norm < 1e-12) break;
        ch->point = along(x, dir, 1.0);
        const double f_ext = co_await Ask{ch};
        if (!(f_ext < f_start)) break;
        const double a = f_start - fx - biggest_drop;
        const double b = f_start - f_ext;
        const double test = 2.0 * (f_start - 2.0 * fx + f_ext) * a * a - biggest_drop * b * b;
        if (test >= 0.0) break;
        for (double& v : dir) v /= norm;
      }

      // Golden-section search for t in [-1, 1] along dir.
      double lo = -1.0;
      double hi = 1.0;
      double c = hi - golden * (hi - lo);
      double d = lo + golden * (hi - lo);
      double best_t = 0.0;
      double best_f = fx;
      ch->point = along(x, dir, c);
      double fc = co_await Ask{ch};
      if (fc < best_f) best_t = c, best_f = fc;
      ch->point = along(x, dir, d);
      double fd = co_await Ask{ch};
      if (fd < best_f) best_t = d, best_f = fd;
      while (hi - lo > kLineTolerance) {
        if (fc < fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - golden * (hi - lo);
          ch->point = along(x, dir, c);
          fc = co_await Ask{ch};
          if (fc < best_f) best_t = c, best_f = fc;
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + golden * (hi - lo);
          ch->point = along(x, dir, d);
          fd = co_await Ask{ch};
          if (fd < best_f) best_t = d, best_f = fd;
        }
      }
      const double drop = fx - best_f;
      x = along(x, dir, best_t);
      fx = best_f;

      if (step < n) {
        if (drop > biggest_drop) {
          biggest_drop = drop;
          biggest = step;
        }
      } else {
        if (biggest + 1 != n) dirs[biggest] = std::move(dirs.back());
        dirs.back() = std::move(dir);
      }
    }
    ++sweeps_;
    if (2.0 * (f_start - fx) <= kStall * (std::abs(f_start) + std::abs(fx)) + 1e-300) co_return;
  }
}

}  // namespace paq
