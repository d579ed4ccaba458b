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

#include <iostream>

#include "CLI11.hpp"
#include "paqplan/commands.h"
#include "paqplan/error.h"

namespace {

void add_on_off(CLI::App* cmd, const std::string& name, bool& target, const std::string& help) {
  cmd->add_option_function<std::string>(
         name, [&target](const std::string& v) { target = v == "on"; }, help)
      ->check(CLI::IsMember({"on", "off"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paqplan: model search under a training budget"};
  app.require_subcommand(1);

  paq::PlanFlags plan;
  auto* plan_cmd = app.add_subcommand("plan", "Run a planner and write a report");
  plan_cmd->add_option("--data", plan.data, "Dataset file (.csv or .libsvm)");
  plan_cmd->add_option("--synth", plan.synth, "Synthetic data as n,d,noise");
  plan_cmd->add_option("--space", plan.space, "Search space JSON file");
  plan_cmd->add_option("--paq", plan.paq, "Predictive clause, PREDICT(...) GIVEN R");
  plan_cmd->add_option("--catalog", plan.catalog, "Directory of relation CSV files");
  plan_cmd->add_option("--planner", plan.planner, "batched or baseline")
      ->check(CLI::IsMember({"batched", "baseline"}));
  plan_cmd->add_option("--strategy", plan.strategy, "grid, random, tpe, nelder-mead, powell");
  auto* bm = plan_cmd->add_option("--budget-models", plan.budget_models, "Budget in models");
  auto* bi = plan_cmd->add_option("--budget-iters", plan.budget_iters, "Budget in model-iterations");
  bm->excludes(bi);
  plan_cmd->add_option("--batch", plan.batch, "Models trained per shared scan")->check(CLI::PositiveNumber);
  plan_cmd->add_option("--partial-iters", plan.partial_iters, "Iterations between bandit checks")
      ->check(CLI::PositiveNumber);
  plan_cmd->add_option("--max-iters", plan.max_iters, "Iterations per fully trained model")
      ->check(CLI::PositiveNumber);
  plan_cmd->add_option("--epsilon", plan.epsilon, "Bandit slack")->check(CLI::NonNegativeNumber);
  add_on_off(plan_cmd, "--bandit", plan.bandit, "on or off");
  add_on_off(plan_cmd, "--batching", plan.batching, "on or off");
  plan_cmd->add_flag("--quality-slack", plan.quality_slack, "Apply the slack to 1 - error");
  plan_cmd->add_option("--sched-delay", plan.sched_delay_ms, "Simulated delay per task, ms")
      ->check(CLI::NonNegativeNumber);
  plan_cmd->add_option("--seed", plan.seed, "Random seed");
  plan_cmd->add_flag("--wall-clock", plan.wall_clock_column, "Add an elapsed-time column");
  plan_cmd->add_option("--out", plan.out, "Report file (stdout when absent)");

  paq::BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench-batching", "Throughput against batch size");
  bench_cmd->add_option("--n", bench.n, "Rows")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--d", bench.d, "Features")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--batches", bench.batches, "Batch sizes")->delimiter(',');
  bench_cmd->add_option("--kernels", bench.kernels, "matrix, naive")->delimiter(',');
  bench_cmd->add_option("--iters", bench.iters, "Iterations per cell")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--out", bench.out, "Table file (stdout when absent)");

  paq::CompareFlags compare;
  auto* cmp_cmd = app.add_subcommand("compare-search", "Best error per strategy and budget");
  cmp_cmd->add_option("--strategies", compare.strategies, "Strategies")->delimiter(',');
  cmp_cmd->add_option("--budgets", compare.budgets, "Budgets in models")->delimiter(',');
  cmp_cmd->add_option("--data", compare.data, "Dataset file instead of the synthetic suite");
  cmp_cmd->add_option("--space", compare.space, "Search space JSON file");
  cmp_cmd->add_option("--datasets", compare.datasets, "Synthetic datasets")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--n", compare.n, "Rows per synthetic dataset");
  cmp_cmd->add_option("--d", compare.d, "Features per synthetic dataset");
  cmp_cmd->add_option("--seeds", compare.seeds, "Seeds per dataset")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--max-iters", compare.max_iters, "Iterations per model")
      ->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--seed", compare.seed, "Base seed");
  cmp_cmd->add_option("--out", compare.out, "CSV file (stdout when absent)");
  cmp_cmd->add_option("--svg", compare.svg, "SVG plot of median best error");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan_cmd) {
      const paq::RunReport r = paq::cmd_plan(plan);
      if (!plan.out) std::cout << r.text;
      if (r.result.best_unfinished) {
        std::cerr << "warning: no model finished; best model is partially trained\n";
      }
    } else if (*bench_cmd) {
      const paq::BenchReport r = paq::cmd_bench_batching(bench);
      if (!bench.out) std::cout << r.text;
    } else if (*cmp_cmd) {
      const paq::CompareReport r = paq::cmd_compare_search(compare);
      if (!compare.out) std::cout << r.csv;
    }
  } catch (const paq::Error& e) {
    std::cerr << "error (" << paq::error_code_name(e.code()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
