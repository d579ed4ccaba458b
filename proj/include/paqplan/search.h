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

#ifndef PAQPLAN_SEARCH_H_
#define PAQPLAN_SEARCH_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paqplan/history.h"
#include "paqplan/space.h"

namespace paq {

enum class StrategyKind { kGrid, kRandom, kNelderMead, kPowell, kTpe };

StrategyKind parse_strategy(std::string_view name);
std::string_view strategy_name(StrategyKind kind);

// A model-search strategy. Strategies read the planner's history to learn
// the outcome of their earlier proposals and only change state inside
// propose().
class Strategy {
 public:
  virtual ~Strategy() = default;

  // Returns at most `free_slots` configurations. An empty result means the
  // strategy is either exhausted() or waiting for an earlier proposal to be
  // reported in `history`.
  virtual std::vector<Configuration> propose(std::size_t free_slots, const History& history) = 0;
  virtual bool exhausted() const { return false; }
  virtual StrategyKind kind() const = 0;
};

class GridStrategy final : public Strategy {
 public:
  GridStrategy(const SearchSpace& space, std::size_t budget);
  std::vector<Configuration> propose(std::size_t free_slots, const History& history) override;
  bool exhausted() const override { return cursor_ >= grid_.size(); }
  StrategyKind kind() const override { return StrategyKind::kGrid; }
  std::size_t size() const { return grid_.size(); }

 private:
  std::vector<Configuration> grid_;
  std::size_t cursor_ = 0;
};

class RandomStrategy final : public Strategy {
 public:
  RandomStrategy(const SearchSpace& space, std::uint64_t seed);
  std::vector<Configuration> propose(std::size_t free_slots, const History& history) override;
  StrategyKind kind() const override { return StrategyKind::kRandom; }

 private:
  SearchSpace space_;
  Rng rng_;
};

struct TpeSettings {
  double gamma = 0.25;          // quantile separating good from bad observations
  std::size_t n_startup = 20;   // observations before the model is used
  std::size_t n_candidates = 24;
};

// Reads the optional "tpe" object of a space document.
TpeSettings parse_tpe_settings(std::string_view json_text);
TpeSettings load_tpe_settings(const std::string& path);

// Tree-structured Parzen estimator. Until n_startup observations exist it
// draws exactly what RandomStrategy would with the same seed.
class TpeStrategy final : public Strategy {
 public:
  TpeStrategy(const SearchSpace& space, std::uint64_t seed, TpeSettings settings = {});
  std::vector<Configuration> propose(std::size_t free_slots, const History& history) override;
  StrategyKind kind() const override { return StrategyKind::kTpe; }

  Configuration propose_one(const std::vector<HistoryRecord>& observations);

 private:
  SearchSpace space_;
  Rng rng_;
  TpeSettings settings_;
};

// Shared plumbing for Nelder-Mead and Powell: the optimizer runs as a
// coroutine over the unit cube and asks for one point at a time. Points
// outside the space are never proposed; they score worse than anything
// observed and the optimizer moves on. Converged runs restart from a random
// point.
class DerivativeFreeStrategy : public Strategy {
 public:
  ~DerivativeFreeStrategy() override;
  std::vector<Configuration> propose(std::size_t free_slots, const History& history) override;

  // Evaluations answered with the out-of-bounds penalty so far.
  std::size_t penalized_count() const { return penalized_; }

  struct Routine;
  struct Channel {
    std::vector<double> point;
    double value = 0.0;
  };

 protected:
  DerivativeFreeStrategy(const SearchSpace& space, std::uint64_t seed);
  virtual Routine start(std::vector<double> origin) = 0;

  Channel& channel() { return channel_; }
  std::size_t dims() const { return params_.size(); }

 private:
  void restart(bool random_origin);
  std::optional<double> lookup(const History& history);

  SearchSpace space_;
  std::string family_;
  std::vector<const ParamSpec*> params_;
  Rng rng_;
  Channel channel_;
  std::unique_ptr<Routine> routine_;
  std::optional<Configuration> pending_;
  std::size_t cursor_ = 0;
  double worst_seen_ = 1.0;
  std::size_t penalized_ = 0;
};

class NelderMeadStrategy final : public DerivativeFreeStrategy {
 public:
  // Reflection, expansion, contraction and shrink coefficients.
  static constexpr double kAlpha = 1.0;
  static constexpr double kGamma = 2.0;
  static constexpr double kRho = 0.5;
  static constexpr double kSigma = 0.5;
  static constexpr double kInitialStep = 0.05;  // fraction of each range

  NelderMeadStrategy(const SearchSpace& space, std::uint64_t seed);
  StrategyKind kind() const override { return StrategyKind::kNelderMead; }

 protected:
  Routine start(std::vector<double> origin) override;
};

class PowellStrategy final : public DerivativeFreeStrategy {
 public:
  static constexpr double kLineTolerance = 1e-4;  // fraction of each range

  PowellStrategy(const SearchSpace& space, std::uint64_t seed);
  StrategyKind kind() const override { return StrategyKind::kPowell; }

  // Completed sweeps over the direction set.
  std::size_t sweeps() const { return sweeps_; }

 protected:
  Routine start(std::vector<double> origin) override;

 private:
  std::size_t sweeps_ = 0;
};

std::unique_ptr<Strategy> make_strategy(StrategyKind kind, const SearchSpace& space,
                                        std::uint64_t seed, std::size_t grid_budget,
                                        const TpeSettings& tpe = {});

using Objective = std::function<double(const Configuration&)>;

// Evaluates proposals one at a time against `objective` until `evaluations`
// have run or the strategy stops proposing. Each evaluation becomes a
// finished record.
History drive(Strategy& strategy, const Objective& objective, std::size_t evaluations);

// Running minimum of val_error over the records, one entry per record.
std::vector<double> best_so_far(const History& history);

}  // namespace paq

#endif  // PAQPLAN_SEARCH_H_
