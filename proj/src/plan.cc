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

#include "paqplan/plan.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <thread>

#include "paqplan/error.h"

namespace paq {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void train_models(ModelTrainer& trainer, std::vector<ModelState>& models, std::size_t iters,
                  bool batching, std::chrono::duration<double> sched_delay) {
  if (sched_delay.count() > 0) {
    const std::size_t tasks = iters * (batching ? 1 : models.size());
    std::this_thread::sleep_for(sched_delay * static_cast<double>(tasks));
  }
  if (batching) {
    trainer.train(models, iters);
    return;
  }
  for (ModelState& m : models) {
    std::vector<ModelState> one{std::move(m)};
    trainer.train(one, iters);
    m = std::move(one.front());
  }
}

}  // namespace

PlanResult baseline_plan(ModelTrainer& trainer, const SearchSpace& space,
                         std::size_t budget_models, std::size_t max_iterations) {
  if (budget_models == 0 || max_iterations == 0) {
    throw Error(ErrorCode::kInvalidArgument, "budget and max_iterations must be positive");
  }
  const auto start = Clock::now();
  const std::vector<Configuration> grid = grid_points(space, budget_models);
  PlanResult result;
  const std::uint64_t passes0 = trainer.passes();
  bool have_best = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<ModelState> one{trainer.create(grid[i], i)};
    trainer.train(one, max_iterations);
    ModelState& m = one.front();
    result.scans_used += max_iterations;
    result.history.push_back(
        {m.id, m.config, m.iterations_used, m.val_error, ModelStatus::kFinished});
    result.rounds.push_back(i + 1);
    result.cumulative_scans.push_back(result.scans_used);
    result.elapsed_seconds.push_back(seconds_since(start));
    if (!have_best || *m.val_error < *result.best.val_error) {
      result.best = std::move(m);
      have_best = true;
    }
  }
  result.shared_passes = trainer.passes() - passes0;
  result.wall_seconds = seconds_since(start);
  return result;
}

PlanResult batched_bandit_plan(ModelTrainer& trainer, Strategy& strategy, Budget budget,
                               const PlanOptions& options) {
  if (options.batch_size == 0 || options.partial_iters == 0 || options.max_iterations == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "batch_size, partial_iters and max_iterations must be positive");
  }
  if (options.max_iterations % options.partial_iters != 0) {
    throw Error(ErrorCode::kInvalidArgument, "partial_iters must divide max_iterations");
  }
  const double epsilon =
      options.bandit ? options.epsilon : std::numeric_limits<double>::infinity();
  if (std::isnan(epsilon) || epsilon < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be >= 0");
  }

  const auto start = Clock::now();
  const std::uint64_t passes0 = trainer.passes();
  PlanResult result;
  std::vector<ModelState> active;
  std::optional<ModelState> best_partial;
  bool have_best = false;
  std::size_t next_id = 0;
  std::size_t round = 0;

  while (budget.remaining > 0) {
    std::size_t free_slots = options.batch_size - active.size();
    if (options.model_limit > 0) free_slots = std::min(free_slots, options.model_limit - next_id);
    if (free_slots > 0 && !strategy.exhausted()) {
      for (Configuration& c : strategy.propose(free_slots, result.history)) {
        active.push_back(trainer.create(c, next_id++));
      }
    }
    if (active.empty()) break;

    std::size_t iters = options.partial_iters;
    bool truncated = false;
    if (budget.remaining < active.size() * iters) {
      iters = static_cast<std::size_t>(budget.remaining / active.size());
      truncated = true;
      if (iters == 0) break;
    }
    train_models(trainer, active, iters, options.batching, options.sched_delay);
    budget.remaining -= active.size() * iters;
    ++round;

    const std::size_t first = result.history.size();
    std::uint64_t spent = result.scans_used;
    for (const ModelState& m : active) {
      if (!best_partial || *m.val_error < *best_partial->val_error) best_partial = m;
    }
    AllocationDecision d = allocate(std::move(active), result.history, epsilon,
                                    options.max_iterations, options.rule);
    for (std::size_t i = first; i < result.history.size(); ++i) {
      spent += iters;
      result.rounds.push_back(round);
      result.cumulative_scans.push_back(spent);
      result.elapsed_seconds.push_back(seconds_since(start));
    }
    result.scans_used = spent;
    for (ModelState& m : d.finished) {
      if (!have_best || *m.val_error < *result.best.val_error) {
        result.best = std::move(m);
        have_best = true;
      }
    }
    active = std::move(d.continued);
    if (truncated) break;
  }

  if (!have_best && best_partial) {
    result.best = std::move(*best_partial);
    result.best_unfinished = true;
  }
  result.shared_passes = trainer.passes() - passes0;
  result.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace paq
