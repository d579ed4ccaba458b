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

#include "paqplan/history.h"

#include <map>

namespace paq {

std::string_view status_name(ModelStatus status) {
  switch (status) {
    case ModelStatus::kRunning: return "running";
    case ModelStatus::kKilled: return "killed";
    case ModelStatus::kFinished: return "finished";
  }
  return "unknown";
}

std::optional<std::size_t> best_record(const History& history) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (!history[i].val_error) continue;
    if (!best || *history[i].val_error < *history[*best].val_error) best = i;
  }
  return best;
}

std::vector<HistoryRecord> latest_per_model(const History& history) {
  std::map<std::size_t, std::size_t> slot;
  std::vector<HistoryRecord> out;
  for (const HistoryRecord& r : history) {
    auto [it, inserted] = slot.emplace(r.model_id, out.size());
    if (inserted) {
      out.push_back(r);
    } else {
      out[it->second] = r;
    }
  }
  return out;
}

}  // namespace paq
