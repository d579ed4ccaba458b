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

#include "paqplan/search.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dfo_routine.h"
#include "json.hpp"
#include "paqplan/error.h"

namespace paq {

StrategyKind parse_strategy(std::string_view name) {
  if (name == "grid") return StrategyKind::kGrid;
  if (name == "random") return StrategyKind::kRandom;
  if (name == "nelder-mead" || name == "nelder_mead") return StrategyKind::kNelderMead;
  if (name == "powell") return StrategyKind::kPowell;
  if (name == "tpe") return StrategyKind::kTpe;
  throw Error(ErrorCode::kInvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

std::string_view strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kGrid: return "grid";
    case StrategyKind::kRandom: return "random";
    case StrategyKind::kNelderMead: return "nelder-mead";
    case StrategyKind::kPowell: return "powell";
    case StrategyKind::kTpe: return "tpe";
  }
  return "unknown";
}

GridStrategy::GridStrategy(const SearchSpace& space, std::size_t budget)
    : grid_(grid_points(space, budget)) {}

std::vector<Configuration> GridStrategy::propose(std::size_t free_slots, const History&) {
  std::vector<Configuration> out;
  while (out.size() < free_slots && cursor_ < grid_.size()) out.push_back(grid_[cursor_++]);
  return out;
}

RandomStrategy::RandomStrategy(const SearchSpace& space, std::uint64_t seed)
    : space_(space), rng_(seed) {
  space_.require_nonempty();
}

std::vector<Configuration> RandomStrategy::propose(std::size_t free_slots, const History&) {
  std::vector<Configuration> out;
  out.reserve(free_slots);
  for (std::size_t i = 0; i < free_slots; ++i) out.push_back(sample_uniform(space_, rng_));
  return out;
}

TpeSettings parse_tpe_settings(std::string_view json_text) {
  TpeSettings settings;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    if (!doc.contains("tpe")) return settings;
    const auto& t = doc.at("tpe");
    settings.gamma = t.value("gamma", settings.gamma);
    settings.n_startup = t.value("n_startup", settings.n_startup);
    settings.n_candidates = t.value("n_candidates", settings.n_candidates);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("tpe settings: ") + e.what());
  }
  if (!(settings.gamma > 0.0 && settings.gamma < 1.0) || settings.n_candidates == 0) {
    throw Error(ErrorCode::kInvalidArgument, "tpe needs 0 < gamma < 1 and n_candidates >= 1");
  }
  return settings;
}

TpeSettings load_tpe_settings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tpe_settings(buf.str());
}

DerivativeFreeStrategy::DerivativeFreeStrategy(const SearchSpace& space, std::uint64_t seed)
    : space_(space), rng_(seed) {
  space_.require_nonempty();
  const auto families = space_.families();
  if (families.size() != 1) {
    throw Error(ErrorCode::kUnsupportedStrategy,
                "Nelder-Mead and Powell cannot search over a categorical family choice");
  }
  family_ = families.front();
  if (space_.has_categorical(family_)) {
    throw Error(ErrorCode::kUnsupportedStrategy,
                "Nelder-Mead and Powell do not support categorical parameters");
  }
  params_ = space_.active_continuous(family_);
  if (params_.empty()) {
    throw Error(ErrorCode::kUnsupportedStrategy, "no continuous parameters to search");
  }
}

DerivativeFreeStrategy::~DerivativeFreeStrategy() = default;

void DerivativeFreeStrategy::restart(bool random_origin) {
  std::vector<double> origin(params_.size(), 0.5);
  if (random_origin) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& z : origin) z = unit(rng_);
  }
  routine_.reset();
  routine_ = std::make_unique<Routine>(start(std::move(origin)));
  routine_->resume();
}

std::optional<double> DerivativeFreeStrategy::lookup(const History& history) {
  for (std::size_t i = cursor_; i < history.size(); ++i) {
    const HistoryRecord& r = history[i];
    if (r.status == ModelStatus::kRunning || !r.val_error) continue;
    if (r.config == *pending_) {
      cursor_ = i + 1;
      return r.val_error;
    }
  }
  return std::nullopt;
}

std::vector<Configuration> DerivativeFreeStrategy::propose(std::size_t free_slots,
                                                           const History& history) {
  if (free_slots == 0) return {};
  if (pending_) {
    const std::optional<double> value = lookup(history);
    if (!value) return {};
    worst_seen_ = std::max(worst_seen_, *value);
    pending_.reset();
    channel_.value = *value;
    routine_->resume();
  }

  std::vector<double> raw(params_.size());
  std::size_t consecutive_penalties = 0;
  while (true) {
    if (!routine_ || routine_->done()) restart(routine_ != nullptr);
    double violation = 0.0;
    for (std::size_t i = 0; i < params_.size(); ++i) {
      const double z = channel_.point[i];
      violation += std::max(0.0, -z) + std::max(0.0, z - 1.0);
      const ParamSpec& p = *params_[i];
      raw[i] = p.scaled_lo() + z * (p.scaled_hi() - p.scaled_lo());
    }
    ClipResult clipped = clip(space_, raw, family_);
    if (!clipped.penalized) {
      pending_ = clipped.config;
      return {std::move(clipped.config)};
    }
    // Never trained: ranked behind every observed point, then by distance
    // outside the box.
    ++penalized_;
    channel_.value = worst_seen_ + violation;
    if (++consecutive_penalties > 10000) {
      restart(true);
      consecutive_penalties = 0;
      continue;
    }
    routine_->resume();
  }
}

std::unique_ptr<Strategy> make_strategy(StrategyKind kind, const SearchSpace& space,
                                        std::uint64_t seed, std::size_t grid_budget,
                                        const TpeSettings& tpe) {
  switch (kind) {
    case StrategyKind::kGrid: return std::make_unique<GridStrategy>(space, grid_budget);
    case StrategyKind::kRandom: return std::make_unique<RandomStrategy>(space, seed);
    case StrategyKind::kNelderMead: return std::make_unique<NelderMeadStrategy>(space, seed);
    case StrategyKind::kPowell: return std::make_unique<PowellStrategy>(space, seed);
    case StrategyKind::kTpe: return std::make_unique<TpeStrategy>(space, seed, tpe);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown strategy");
}

History drive(Strategy& strategy, const Objective& objective, std::size_t evaluations) {
  History history;
  while (history.size() < evaluations) {
    std::vector<Configuration> batch = strategy.propose(1, history);
    if (batch.empty()) break;
    for (Configuration& c : batch) {
      HistoryRecord r;
      r.model_id = history.size();
      r.val_error = objective(c);
      r.config = std::move(c);
      r.iterations_used = 1;
      r.status = ModelStatus::kFinished;
      history.push_back(std::move(r));
    }
  }
  return history;
}

std::vector<double> best_so_far(const History& history) {
  std::vector<double> out;
  out.reserve(history.size());
  double best = std::numeric_limits<double>::infinity();
  for (const HistoryRecord& r : history) {
    if (r.val_error) best = std::min(best, *r.val_error);
    out.push_back(best);
  }
  return out;
}

}  // namespace paq
