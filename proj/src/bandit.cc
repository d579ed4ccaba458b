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

#include "paqplan/bandit.h"

#include <cmath>

#include "paqplan/error.h"

namespace paq {

bool within_slack(double error, double best_error, double epsilon, SlackRule rule) {
  if (std::isinf(epsilon)) return true;
  if (rule == SlackRule::kError) return error <= (1.0 + epsilon) * best_error;
  return (1.0 - error) * (1.0 + epsilon) >= 1.0 - best_error;
}

AllocationDecision allocate(std::vector<ModelState> models, History& history, double epsilon,
                            std::size_t max_iterations, SlackRule rule) {
  if (std::isnan(epsilon) || epsilon < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be >= 0");
  }
  if (max_iterations == 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_iterations must be positive");
  }
  for (const ModelState& m : models) {
    if (!m.val_error) {
      throw Error(ErrorCode::kInvalidState,
                  "model " + std::to_string(m.id) + " has no validation error");
    }
  }

  const std::size_t first = history.size();
  for (const ModelState& m : models) {
    history.push_back({m.id, m.config, m.iterations_used, m.val_error, ModelStatus::kRunning});
  }
  const double best = *history[*best_record(history)].val_error;

  AllocationDecision out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    ModelState& m = models[i];
    ModelStatus& status = history[first + i].status;
    if (m.iterations_used >= max_iterations) {
      status = ModelStatus::kFinished;
      out.finished.push_back(std::move(m));
    } else if (within_slack(*m.val_error, best, epsilon, rule)) {
      out.continued.push_back(std::move(m));
    } else {
      status = ModelStatus::kKilled;
      out.killed.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace paq
