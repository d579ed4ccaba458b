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

#ifndef PAQPLAN_COMMANDS_H_
#define PAQPLAN_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "paqplan/plan.h"
#include "paqplan/report.h"
#include "paqplan/search.h"
#include "paqplan/space.h"

namespace paq {

// lr in [1e-3, 1e1] and reg in [1e-4, 1e2], both on a log scale.
SearchSpace default_space();

struct SynthSpec {
  std::size_t n = 0;
  std::size_t d = 0;
  double noise = 0.0;
};

// "n,d,noise"
SynthSpec parse_synth_spec(const std::string& text);

struct PlanFlags {
  std::optional<std::string> data;
  std::optional<std::string> synth;
  std::optional<std::string> space;
  std::optional<std::string> paq;
  std::optional<std::string> catalog;
  std::string planner = "batched";  // batched | baseline
  std::string strategy = "random";
  std::optional<std::size_t> budget_models;
  std::optional<std::uint64_t> budget_iters;
  std::size_t batch = 10;
  std::size_t partial_iters = 10;
  std::size_t max_iters = 100;
  double epsilon = kDefaultEpsilon;
  bool bandit = true;
  bool batching = true;
  bool quality_slack = false;
  double sched_delay_ms = 0.0;
  std::uint64_t seed = 1;
  bool wall_clock_column = false;
  std::optional<std::string> out;
};

struct RunReport {
  Knobs knobs;
  PlanResult result;
  std::optional<double> test_error;
  std::string text;
};

RunReport cmd_plan(const PlanFlags& flags);

struct BenchFlags {
  std::size_t n = 100000;
  std::size_t d = 1000;
  std::vector<std::size_t> batches{1, 2, 5, 8, 10, 15, 20};
  std::vector<std::string> kernels{"matrix", "naive"};
  std::size_t iters = 5;
  std::uint64_t seed = 1;
  std::optional<std::string> out;
};

struct BenchRow {
  std::string kernel;
  std::size_t batch = 0;
  double seconds = 0.0;
  double models_per_hour = 0.0;
  double speedup = 1.0;  // against batch 1 of the same kernel
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::string text;
};

// Times `iters` iterations of a batch of logistic models per (kernel, batch)
// cell on one synthetic dataset. Throughput extrapolates to models trained
// for `iters` iterations.
BenchReport cmd_bench_batching(const BenchFlags& flags);

struct CompareFlags {
  std::vector<std::string> strategies{"grid", "random", "tpe", "nelder-mead", "powell"};
  std::vector<std::size_t> budgets{16, 81, 256, 625};
  std::optional<std::string> data;  // replaces the synthetic suite
  std::optional<std::string> space;
  std::size_t datasets = 5;
  std::size_t n = 2000;
  std::size_t d = 20;
  double noise_lo = 0.05;
  double noise_hi = 0.25;
  std::size_t seeds = 3;
  std::size_t max_iters = 100;
  std::uint64_t seed = 1;
  std::optional<std::string> out;  // CSV
  std::optional<std::string> svg;
};

struct CompareCell {
  std::size_t dataset = 0;
  std::uint64_t seed = 0;
  std::string strategy;
  std::size_t budget = 0;
  std::optional<double> best_error;  // best of this cell's own evaluations
  std::optional<double> best_so_far; // running minimum over budgets <= this one
  std::string status = "ok";
};

struct CompareReport {
  std::vector<CompareCell> cells;
  std::string csv;
  std::string svg;
};

CompareReport cmd_compare_search(const CompareFlags& flags);

}  // namespace paq

#endif  // PAQPLAN_COMMANDS_H_
