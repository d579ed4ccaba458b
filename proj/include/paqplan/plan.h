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

#ifndef PAQPLAN_PLAN_H_
#define PAQPLAN_PLAN_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "paqplan/bandit.h"
#include "paqplan/history.h"
#include "paqplan/search.h"
#include "paqplan/space.h"
#include "paqplan/train.h"

namespace paq {

// Remaining work in model-iterations: one scan of the training data by one
// model.
struct Budget {
  std::uint64_t remaining = 0;

  static Budget models(std::size_t count, std::size_t max_iterations) {
    return {static_cast<std::uint64_t>(count) * max_iterations};
  }
};

struct PlanOptions {
  std::size_t partial_iters = 10;
  std::size_t batch_size = 10;
  std::size_t max_iterations = 100;
  double epsilon = kDefaultEpsilon;
  bool bandit = true;    // off: never kill
  bool batching = true;  // off: one scan per model per iteration
  SlackRule rule = SlackRule::kError;
  // Most configurations to train; 0 for no limit.
  std::size_t model_limit = 0;
  // Real sleep per training task: one task per iteration of the whole batch,
  // or of each model when batching is off.
  std::chrono::duration<double> sched_delay{0.0};
};

struct PlanResult {
  ModelState best;
  History history;
  // Parallel to history: the planner round that wrote the record and the
  // model-iterations spent up to and including it.
  std::vector<std::size_t> rounds;
  std::vector<std::uint64_t> cumulative_scans;
  std::vector<double> elapsed_seconds;
  std::uint64_t scans_used = 0;     // model-iterations
  std::uint64_t shared_passes = 0;  // physical reads of the training data
  double wall_seconds = 0.0;
  // Set when no model reached max_iterations and `best` is partially trained.
  bool best_unfinished = false;
};

PlanResult baseline_plan(ModelTrainer& trainer, const SearchSpace& space,
                         std::size_t budget_models, std::size_t max_iterations);

// Fills up to batch_size slots from `strategy`, trains every active model
// for partial_iters iterations per round and lets the bandit decide which
// models keep their slots.
PlanResult batched_bandit_plan(ModelTrainer& trainer, Strategy& strategy, Budget budget,
                               const PlanOptions& options = {});

}  // namespace paq

#endif  // PAQPLAN_PLAN_H_
