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

#ifndef PAQPLAN_HISTORY_H_
#define PAQPLAN_HISTORY_H_

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "paqplan/space.h"

namespace paq {

enum class ModelStatus { kRunning, kKilled, kFinished };

std::string_view status_name(ModelStatus status);

// One observation of a model, appended whenever the model is checked. A model
// trained in several rounds therefore appears several times; `model_id`
// links the rows.
struct HistoryRecord {
  std::size_t model_id = 0;
  Configuration config;
  std::size_t iterations_used = 0;
  std::optional<double> val_error;
  ModelStatus status = ModelStatus::kRunning;
};

using History = std::vector<HistoryRecord>;

// Index of the record with the lowest validation error; earliest wins ties.
std::optional<std::size_t> best_record(const History& history);

// Latest record per model, in order of each model's first appearance.
std::vector<HistoryRecord> latest_per_model(const History& history);

}  // namespace paq

#endif  // PAQPLAN_HISTORY_H_
