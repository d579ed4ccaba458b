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

#include "paqplan/commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "paqplan/clause.h"
#include "paqplan/data.h"
#include "paqplan/error.h"
#include "paqplan/train.h"

namespace paq {

namespace {

using Clock = std::chrono::steady_clock;

std::string on_off(bool v) { return v ? "on" : "off"; }

DataSplit load_plan_data(const PlanFlags& f) {
  Dataset ds;
  if (f.paq) {
    if (!f.catalog) throw Error(ErrorCode::kInvalidArgument, "--paq needs --catalog");
    ds = paq::bind(parse_predict_clause(*f.paq), load_catalog(*f.catalog)).data;
  } else if (f.data) {
    ds = load_dataset(*f.data);
  } else if (f.synth) {
    const SynthSpec s = parse_synth_spec(*f.synth);
    ds = synth(s.n, s.d, f.seed, s.noise);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "one of --data, --synth or --paq is required");
  }
  return split(ds, {}, f.seed);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

SearchSpace default_space() {
  return SearchSpace({ParamSpec::continuous("lr", 1e-3, 1e1, Scale::kLog10),
                      ParamSpec::continuous("reg", 1e-4, 1e2, Scale::kLog10)});
}

SynthSpec parse_synth_spec(const std::string& text) {
  SynthSpec s;
  std::istringstream in(text);
  char c1 = 0, c2 = 0;
  if (!(in >> s.n >> c1 >> s.d >> c2 >> s.noise) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof()) {
    throw Error(ErrorCode::kInvalidArgument, "--synth expects n,d,noise; got '" + text + "'");
  }
  return s;
}

RunReport cmd_plan(const PlanFlags& f) {
  if (f.budget_models.has_value() == f.budget_iters.has_value()) {
    throw Error(ErrorCode::kInvalidArgument, "give exactly one of --budget-models and --budget-iters");
  }
  if (f.max_iters == 0) throw Error(ErrorCode::kInvalidArgument, "--max-iters must be positive");
  const SearchSpace space = f.space ? load_space(*f.space) : default_space();
  const TpeSettings tpe = f.space ? load_tpe_settings(*f.space) : TpeSettings{};
  const DataSplit data = load_plan_data(f);

  const Budget budget = f.budget_models ? Budget::models(*f.budget_models, f.max_iters)
                                        : Budget{*f.budget_iters};
  const std::size_t grid_budget =
      f.budget_models ? *f.budget_models
                      : std::max<std::size_t>(1, static_cast<std::size_t>(*f.budget_iters / f.max_iters));

  RunReport report;
  report.knobs = {
      {"planner", f.planner},
      {"data", f.paq ? "paq:" + *f.paq : f.data ? *f.data : "synth:" + f.synth.value_or("")},
      {"space", f.space.value_or("default")},
      {"strategy", f.strategy},
      {"budget_iters", std::to_string(budget.remaining)},
      {"grid_budget_models", std::to_string(grid_budget)},
      {"batch", std::to_string(f.batch)},
      {"partial_iters", std::to_string(f.partial_iters)},
      {"max_iters", std::to_string(f.max_iters)},
      {"epsilon", format_double(f.epsilon)},
      {"slack", f.quality_slack ? "quality" : "error"},
      {"bandit", on_off(f.bandit)},
      {"batching", on_off(f.batching)},
      {"sched_delay_ms", format_double(f.sched_delay_ms)},
      {"seed", std::to_string(f.seed)},
      {"train_rows", std::to_string(data.train.rows())},
      {"features", std::to_string(data.train.cols())},
  };

  TrainerOptions topts;
  topts.feature_seed = f.seed;
  ModelTrainer trainer(data, topts);
  if (f.planner == "baseline") {
    report.result = baseline_plan(trainer, space, grid_budget, f.max_iters);
  } else if (f.planner == "batched") {
    auto strategy = make_strategy(parse_strategy(f.strategy), space, f.seed, grid_budget, tpe);
    PlanOptions opts;
    opts.partial_iters = f.partial_iters;
    opts.batch_size = f.batch;
    opts.max_iterations = f.max_iters;
    opts.epsilon = f.epsilon;
    opts.bandit = f.bandit;
    opts.batching = f.batching;
    if (f.budget_models) opts.model_limit = *f.budget_models;
    opts.rule = f.quality_slack ? SlackRule::kQuality : SlackRule::kError;
    opts.sched_delay = std::chrono::duration<double>(f.sched_delay_ms / 1000.0);
    report.result = batched_bandit_plan(trainer, *strategy, budget, opts);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown planner '" + f.planner + "'");
  }
  if (report.result.best.val_error) report.test_error = trainer.test_error(report.result.best);

  ReportOptions ropts;
  ropts.wall_clock_column = f.wall_clock_column;
  report.text = format_plan_report(report.knobs, report.result, report.test_error, ropts);
  if (f.out) write_text_file(*f.out, report.text);
  return report;
}

BenchReport cmd_bench_batching(const BenchFlags& f) {
  if (f.iters == 0 || f.batches.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bench needs iters >= 1 and at least one batch size");
  }
  const Dataset train = synth(f.n, f.d, f.seed, 0.1);
  const Dataset validation = synth(std::min<std::size_t>(f.n, 1000), f.d, f.seed + 1, 0.1);

  BenchReport report;
  for (const std::string& kernel_name : f.kernels) {
    GradientKernel kernel;
    if (kernel_name == "matrix") {
      kernel = GradientKernel::kMatrix;
    } else if (kernel_name == "naive") {
      kernel = GradientKernel::kNaive;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown kernel '" + kernel_name + "'");
    }
    std::optional<double> base;
    for (std::size_t b : f.batches) {
      std::vector<ModelState> members;
      for (std::size_t j = 0; j < b; ++j) {
        ModelState m;
        m.id = j;
        m.config.family = "logistic";
        m.config.values = {{"lr", 1e-4 * static_cast<double>(j + 1)}, {"reg", 1e-3}};
        m.weights = Vector::Zero(static_cast<Eigen::Index>(f.d));
        members.push_back(std::move(m));
      }
      ModelBatch batch = ModelBatch::assemble(std::move(members));
      TrainingSource source(train);
      TrainOptions opts;
      opts.kernel = kernel;
      const auto t0 = Clock::now();
      train_partial(batch, source, validation, f.iters, opts);
      const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
      BenchRow row;
      row.kernel = kernel_name;
      row.batch = b;
      row.seconds = secs;
      row.models_per_hour = models_per_hour(b, secs);
      if (!base) base = row.models_per_hour;
      row.speedup = row.models_per_hour / *base;
      report.rows.push_back(row);
    }
  }

  std::ostringstream out;
  out << "# paqplan batching benchmark\n";
  out << "# n=" << f.n << " d=" << f.d << " iters=" << f.iters << " seed=" << f.seed << '\n';
  out << "# throughput is hardware-dependent; speedup is relative to the first batch size\n";
  out << "kernel\tbatch\tseconds\tmodels_per_hour\tspeedup\n";
  for (const BenchRow& r : report.rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s\t%zu\t%.3f\t%.2f\t%.2f\n", r.kernel.c_str(), r.batch,
                  r.seconds, r.models_per_hour, r.speedup);
    out << buf;
  }
  report.text = out.str();
  if (f.out) write_text_file(*f.out, report.text);
  return report;
}

CompareReport cmd_compare_search(const CompareFlags& f) {
  if (f.budgets.empty() || f.strategies.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one strategy and one budget");
  }
  std::vector<std::size_t> budgets = f.budgets;
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
  const SearchSpace space = f.space ? load_space(*f.space) : default_space();
  const TpeSettings tpe = f.space ? load_tpe_settings(*f.space) : TpeSettings{};
  const std::size_t dataset_count = f.data ? 1 : f.datasets;

  CompareReport report;
  for (std::size_t ds = 0; ds < dataset_count; ++ds) {
    Dataset full;
    if (f.data) {
      full = load_dataset(*f.data);
    } else {
      const double noise = dataset_count > 1 ? f.noise_lo + (f.noise_hi - f.noise_lo) *
                                                                static_cast<double>(ds) /
                                                                static_cast<double>(dataset_count - 1)
                                             : f.noise_lo;
      full = synth(f.n, f.d, f.seed + ds, noise);
    }
    const DataSplit data = split(full, {}, f.seed + ds);
    TrainerOptions topts;
    topts.feature_seed = f.seed + ds;
    ModelTrainer trainer(data, topts);
    std::map<std::string, double> memo;
    std::size_t next_id = 0;
    const Objective objective = [&](const Configuration& c) {
      const std::string key = c.to_string();
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      std::vector<ModelState> one{trainer.create(c, next_id++)};
      trainer.train(one, f.max_iters);
      return memo[key] = *one.front().val_error;
    };

    for (std::size_t s = 0; s < f.seeds; ++s) {
      const std::uint64_t seed = f.seed + 1000 * (s + 1);
      for (const std::string& name : f.strategies) {
        std::vector<CompareCell> row;
        for (std::size_t b : budgets) {
          CompareCell c;
          c.dataset = ds;
          c.seed = seed;
          c.strategy = name;
          c.budget = b;
          row.push_back(c);
        }
        try {
          const StrategyKind kind = parse_strategy(name);
          if (kind == StrategyKind::kGrid) {
            for (CompareCell& c : row) {
              try {
                GridStrategy grid(space, c.budget);
                const History h = drive(grid, objective, c.budget);
                if (!h.empty()) c.best_error = best_so_far(h).back();
              } catch (const Error& e) {
                c.status = std::string(error_code_name(e.code()));
              }
            }
          } else {
            auto strategy = make_strategy(kind, space, seed, budgets.back(), tpe);
            const History h = drive(*strategy, objective, budgets.back());
            const std::vector<double> best = best_so_far(h);
            for (CompareCell& c : row) {
              if (!best.empty()) c.best_error = best[std::min(c.budget, best.size()) - 1];
            }
          }
        } catch (const Error& e) {
          for (CompareCell& c : row) c.status = std::string(error_code_name(e.code()));
        }
        std::optional<double> running;
        for (CompareCell& c : row) {
          if (c.best_error) running = running ? std::min(*running, *c.best_error) : *c.best_error;
          c.best_so_far = running;
          report.cells.push_back(c);
        }
      }
    }
  }

  std::ostringstream csv;
  csv << "dataset,seed,strategy,budget,best_error,best_so_far,status\n";
  for (const CompareCell& c : report.cells) {
    csv << c.dataset << ',' << c.seed << ',' << c.strategy << ',' << c.budget << ','
        << (c.best_error ? format_double(*c.best_error) : "") << ','
        << (c.best_so_far ? format_double(*c.best_so_far) : "") << ',' << c.status << '\n';
  }
  report.csv = csv.str();

  std::vector<Series> series;
  for (const std::string& name : f.strategies) {
    Series s{name, {}};
    for (std::size_t b : budgets) {
      std::vector<double> values;
      for (const CompareCell& c : report.cells) {
        if (c.strategy == name && c.budget == b && c.best_so_far) values.push_back(*c.best_so_far);
      }
      if (!values.empty()) s.points.emplace_back(static_cast<double>(b), median(values));
    }
    series.push_back(std::move(s));
  }
  report.svg = render_svg(series, "median best validation error", "budget (models)",
                          "validation error", true);
  if (f.out) write_text_file(*f.out, report.csv);
  if (f.svg) write_text_file(*f.svg, report.svg);
  return report;
}

}  // namespace paq
