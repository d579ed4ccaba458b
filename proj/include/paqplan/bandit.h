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

#ifndef PAQPLAN_BANDIT_H_
#define PAQPLAN_BANDIT_H_

#include <cstddef>
#include <vector>

#include "paqplan/history.h"
#include "paqplan/train.h"

namespace paq {

inline constexpr double kDefaultEpsilon = 0.5;

// Which side of the slack test is scaled by (1 + epsilon).
enum class SlackRule {
  kError,    // continue iff err(m) <= (1 + eps) * err(best)
  kQuality,  // continue iff (1 - err(m)) * (1 + eps) >= 1 - err(best)
};

struct AllocationDecision {
  std::vector<ModelState> finished;
  std::vector<ModelState> continued;
  std::vector<ModelState> killed;
};

bool within_slack(double error, double best_error, double epsilon,
                  SlackRule rule = SlackRule::kError);

// Appends one record per model to `history`, then sorts the models into
// finished, continued and killed against the best error in the updated
// history. Input order is kept inside each list.
AllocationDecision allocate(std::vector<ModelState> models, History& history, double epsilon,
                            std::size_t max_iterations, SlackRule rule = SlackRule::kError);

}  // namespace paq

#endif  // PAQPLAN_BANDIT_H_
