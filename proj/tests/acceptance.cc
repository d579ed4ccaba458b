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

// Acceptance checks. Each criterion prints one line:
//   criterion N: PASS|FAIL <details>
// Criterion 5 measures hardware-dependent throughput and is soft: a miss is
// printed as FAIL (soft) and does not change the exit status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "oracles.h"
#include "paqplan/commands.h"
#include "paqplan/exec.h"
#include "paqplan/features.h"
#include "paqplan/plan.h"
#include "paqplan/search.h"
#include "paqplan/train.h"

namespace {

using namespace paq;
using namespace std::chrono_literals;

const std::string kSpaces = PAQPLAN_SPACES;

struct Outcome {
  bool pass = false;
  std::string detail;
  bool soft = false;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return buf;
}

double rel_error(const Vector& got, const Vector& want) {
  return (got - want).lpNorm<Eigen::Infinity>() / std::max(1.0, want.lpNorm<Eigen::Infinity>());
}

Outcome gradient_oracle() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> n_of(1, 200), d_of(1, 20);
  std::uniform_real_distribution<double> lam(0.0, 2.0);
  double worst_logistic = 0, worst_hinge = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = n_of(rng), d = d_of(rng);
    const Matrix X = oracle::random_matrix(rng, n, d);
    const Vector y = oracle::random_labels(rng, n);
    const Vector w = oracle::random_vector(rng, d, 0.5);
    const double lambda = lam(rng);
    const Vector fd = oracle::central_difference(
        [&](const Vector& v) { return oracle::logistic_loss(v, X, y, lambda); }, w, 1e-5);
    worst_logistic = std::max(worst_logistic, rel_error(logistic_gradient(w, X, y, lambda), fd));
  }
  for (int checked = 0; checked < 100;) {
    const int n = n_of(rng), d = d_of(rng);
    const Matrix X = oracle::random_matrix(rng, n, d);
    const Vector y = oracle::random_labels(rng, n);
    const Vector w = oracle::random_vector(rng, d, 0.5);
    // Finite differences are meaningless across a kink.
    if (oracle::hinge_kink_distance(w, X, y) < 1e-3) continue;
    const double lambda = lam(rng);
    const Vector fd = oracle::central_difference(
        [&](const Vector& v) { return oracle::hinge_loss(v, X, y, lambda); }, w, 1e-5);
    worst_hinge = std::max(worst_hinge, rel_error(hinge_subgradient(w, X, y, lambda), fd));
    ++checked;
  }
  return {worst_logistic <= 1e-6 && worst_hinge <= 1e-6,
          fmt("max relative error logistic=%.2e hinge=%.2e over 100 instances each (limit 1e-6)",
              worst_logistic, worst_hinge)};
}

Outcome batched_equivalence() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  double worst = 0;
  for (int k : {1, 2, 5, 10, 20}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix X = oracle::random_matrix(rng, 1000, 100);
      const Vector y = oracle::random_labels(rng, 1000);
      Eigen::MatrixXd W(100, k);
      std::vector<double> lambdas(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) {
        W.col(j) = oracle::random_vector(rng, 100, 0.1);
        lambdas[static_cast<std::size_t>(j)] = lam(rng);
      }
      const Eigen::MatrixXd G = batched_gradient(W, X, y, lambdas);
      const Eigen::MatrixXd H = batched_hinge_subgradient(W, X, y, lambdas);
      for (int j = 0; j < k; ++j) {
        const Vector w = W.col(j);
        const double l = lambdas[static_cast<std::size_t>(j)];
        worst = std::max(worst, (G.col(j) - logistic_gradient(w, X, y, l)).lpNorm<Eigen::Infinity>());
        worst = std::max(worst, (H.col(j) - hinge_subgradient(w, X, y, l)).lpNorm<Eigen::Infinity>());
      }
    }
  }
  return {worst <= 1e-10,
          fmt("max abs column deviation %.2e for k in {1,2,5,10,20}, 20 trials each (limit 1e-10)",
              worst)};
}

Outcome bandit_scan_reduction() {
  const double noises[] = {0.05, 0.10, 0.15, 0.20, 0.25};
  std::uint64_t scans_on = 0, scans_off = 0;
  int close = 0;
  std::ostringstream per;
  for (int i = 0; i < 5; ++i) {
    PlanFlags f;
    f.synth = fmt("20000,50,%.2f", noises[i]);
    f.space = kSpaces + "/random_features.json";
    f.strategy = "random";
    f.budget_models = 625;
    f.max_iters = 100;
    f.partial_iters = 10;
    f.epsilon = 0.5;
    f.seed = static_cast<std::uint64_t>(i + 1);
    const RunReport on = cmd_plan(f);
    f.bandit = false;
    const RunReport off = cmd_plan(f);
    scans_on += on.result.scans_used;
    scans_off += off.result.scans_used;
    const double gap = std::abs(*on.result.best.val_error - *off.result.best.val_error);
    close += gap <= 0.02;
    per << fmt(" [noise %.2f: scans %llu/%llu, err %.4f vs %.4f]", noises[i],
               static_cast<unsigned long long>(on.result.scans_used),
               static_cast<unsigned long long>(off.result.scans_used), *on.result.best.val_error,
               *off.result.best.val_error);
  }
  const double ratio = static_cast<double>(scans_on) / static_cast<double>(scans_off);
  return {ratio <= 0.40 && close >= 4,
          fmt("scans with bandit = %.1f%% of without (limit 40%%), error within 0.02 on %d/5",
              100 * ratio, close) +
              per.str()};
}

SearchSpace random_space(std::mt19937_64& rng, std::size_t& budget) {
  std::uniform_int_distribution<int> dims(1, 3), side(2, 4);
  const int p = dims(rng);
  std::vector<ParamSpec> params;
  std::uniform_real_distribution<double> lr_lo(-3, -1), reg_lo(-4, -1);
  params.push_back(ParamSpec::continuous("lr", std::pow(10, lr_lo(rng)), 10, Scale::kLog10));
  if (p >= 2) params.push_back(ParamSpec::continuous("reg", std::pow(10, reg_lo(rng)), 1, Scale::kLog10));
  if (p >= 3) params.push_back(ParamSpec::continuous("proj", 1, 3));
  int per_axis = side(rng);
  if (p == 3) per_axis = 2;
  budget = 1;
  for (int i = 0; i < p; ++i) budget *= static_cast<std::size_t>(per_axis);
  return SearchSpace(std::move(params));
}

Outcome planner_reduction() {
  std::mt19937_64 rng(404);
  int same = 0;
  std::ostringstream misses;
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t budget = 0;
    const SearchSpace space = random_space(rng, budget);
    const DataSplit data = split(synth(1500, 8, 500 + trial, 0.1), {}, 500 + trial);
    ModelTrainer t1(data), t2(data);
    const PlanResult base = baseline_plan(t1, space, budget, 50);
    GridStrategy grid(space, budget);
    PlanOptions o;
    o.batch_size = 1;
    o.partial_iters = 50;
    o.max_iterations = 50;
    o.bandit = false;
    const PlanResult batched = batched_bandit_plan(t2, grid, Budget::models(budget, 50), o);
    if (batched.best.config == base.best.config) {
      ++same;
    } else {
      misses << " trial " << trial << ": " << batched.best.config.to_string() << " vs "
             << base.best.config.to_string();
    }
  }
  return {same == 10, fmt("same best configuration on %d/10 random seeds/spaces", same) + misses.str()};
}

Outcome batching_throughput() {
  BenchFlags f;
  f.n = 100000;
  f.d = 1000;
  f.batches = {1, 10, 15, 20};
  f.iters = 3;
  const BenchReport r = cmd_bench_batching(f);
  std::map<std::pair<std::string, std::size_t>, double> mph;
  for (const BenchRow& row : r.rows) mph[{row.kernel, row.batch}] = row.models_per_hour;
  const double speedup10 = mph[{"matrix", 10}] / mph[{"matrix", 1}];
  bool dominates = true;
  std::string vs;
  for (std::size_t b : {10, 15, 20}) {
    const double ratio = mph[{"matrix", b}] / mph[{"naive", b}];
    dominates = dominates && ratio >= 1.0;
    vs += fmt(" %zu:%.2f", b, ratio);
  }
  Outcome out{speedup10 >= 2.0 && dominates,
              fmt("matrix batch-10 throughput = %.2fx batch 1 (limit 2x); matrix/naive at batch",
                  speedup10) +
                  vs + fmt(" (limit 1.0); batch-1 matrix %.0f models/hour", mph[{"matrix", 1}])};
  out.soft = true;
  return out;
}

Outcome scheduling_amortization() {
  auto data = std::make_shared<const DataSplit>(split(synth(1000, 10, 6, 0.1), {}, 6));
  auto run = [&](bool batch, std::size_t models, std::size_t iters) {
    exec::Mailbox outbox;
    exec::ExecutorOptions o;
    o.batch = batch;
    o.batch_size = 10;
    o.max_iterations = iters;
    o.sched_delay = 200ms;
    exec::Executor ex(o, data, outbox);
    for (std::size_t i = 0; i < models; ++i) {
      ex.send(exec::ActorId::kSearcher,
              exec::BuildModel{Configuration{"logistic", {{"lr", 0.01 * static_cast<double>(i + 1)}}}});
    }
    ex.send(exec::ActorId::kSearcher, exec::DoWork{});
    while (true) {
      auto e = outbox.pop_for(60s);
      if (!e || std::holds_alternative<exec::WorkDone>(e->message)) break;
    }
    return ex.stats();
  };
  const exec::ExecutorStats batched = run(true, 10, 3);
  const exec::ExecutorStats single = run(false, 1, 2);
  const double per = 1000 * batched.overhead_per_model_iteration();
  return {std::abs(per - 20.0) <= 1.0,
          fmt("batch 10: %.3f ms per model-iteration over %zu tasks (target 20 +/- 1); "
              "unbatched: %.3f ms",
              per, batched.tasks, 1000 * single.overhead_per_model_iteration())};
}

Outcome derivative_free() {
  const SearchSpace line({ParamSpec::continuous("x", 0, 10)});
  const SearchSpace plane({ParamSpec::continuous("x", -5, 5), ParamSpec::continuous("y", -5, 5)});
  const Objective f1 = [](const Configuration& c) { return std::pow(c.real("x", 0) - 3, 2); };
  const Objective f2 = [](const Configuration& c) {
    return std::pow(c.real("x", 0) - 1, 2) + std::pow(c.real("y", 0) + 2, 2);
  };
  int ok = 0, total = 0;
  double worst = 0;
  for (StrategyKind kind : {StrategyKind::kNelderMead, StrategyKind::kPowell}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto s1 = make_strategy(kind, line, seed, 0);
      const History h1 = drive(*s1, f1, 100);
      const Configuration& b1 = h1[*best_record(h1)].config;
      const double e1 = std::abs(b1.real("x", 0) - 3);
      auto s2 = make_strategy(kind, plane, seed, 0);
      const History h2 = drive(*s2, f2, 200);
      const Configuration& b2 = h2[*best_record(h2)].config;
      const double e2 = std::hypot(b2.real("x", 0) - 1, b2.real("y", 0) + 2);
      worst = std::max({worst, e1, e2});
      ok += (e1 <= 1e-3) + (e2 <= 1e-3);
      total += 2;
    }
  }
  return {ok == total,
          fmt("%d/%d runs within 1e-3 (Nelder-Mead and Powell, 1-D in 100 and 2-D in 200 "
              "evaluations, 10 seeds); worst distance %.2e",
              ok, total, worst)};
}

Outcome kernel_approximation() {
  constexpr std::size_t kInput = 5;
  constexpr int kMaps = 8;
  std::mt19937_64 rng(808);
  std::vector<std::pair<Vector, Vector>> pairs;
  for (int i = 0; i < 50; ++i) {
    pairs.emplace_back(oracle::random_vector(rng, kInput).normalized(),
                       oracle::random_vector(rng, kInput).normalized());
  }
  Matrix X(2 * pairs.size(), kInput);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    X.row(static_cast<Eigen::Index>(2 * i)) = pairs[i].first.transpose();
    X.row(static_cast<Eigen::Index>(2 * i + 1)) = pairs[i].second.transpose();
  }
  // Absolute error per pair for each map.
  auto errors = [&](std::size_t D, std::uint64_t seed) {
    const FeatureMap map =
        FeatureMap::random_cosine(kInput, D, ProjectionDistribution::kGaussian, 1.0, 0.0, seed);
    const Matrix Z = random_features(X, map);
    std::vector<double> out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double approx = Z.row(static_cast<Eigen::Index>(2 * i)).dot(Z.row(static_cast<Eigen::Index>(2 * i + 1)));
      out.push_back(std::abs(approx - oracle::rbf_kernel(pairs[i].first, pairs[i].second, 1.0)));
    }
    return out;
  };
  const std::vector<double> first = errors(10000, 1);
  const double max_abs = *std::max_element(first.begin(), first.end());

  std::vector<double> sq_large(pairs.size(), 0.0), sq_small(pairs.size(), 0.0);
  for (int m = 0; m < kMaps; ++m) {
    const auto large = errors(10000, 100 + m), small = errors(2500, 200 + m);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      sq_large[i] += large[i] * large[i];
      sq_small[i] += small[i] * small[i];
    }
  }
  auto median_rms = [&](std::vector<double> sq) {
    for (double& v : sq) v = std::sqrt(v / kMaps);
    std::nth_element(sq.begin(), sq.begin() + static_cast<long>(sq.size() / 2), sq.end());
    return sq[sq.size() / 2];
  };
  const double ratio = median_rms(sq_large) / median_rms(sq_small);
  return {max_abs <= 0.05 && ratio <= 0.6,
          fmt("D=10000 max abs error %.4f on 50 pairs (limit 0.05); median RMS error ratio "
              "D=10000/D=2500 = %.3f (limit 0.6)",
              max_abs, ratio)};
}

Outcome protocol_suite() {
  std::vector<std::string> failures;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  auto data = std::make_shared<const DataSplit>(split(synth(400, 4, 9, 0.1), {}, 9));

  {
    exec::SearcherOptions o;
    o.budget_models = 10;
    o.seed = 9;
    o.executor.batch_size = 4;
    o.executor.max_iterations = 5;
    exec::Driver driver(o);
    check(!driver.top_model(), "TopModel before RunSearch is absent");
    check(!driver.run_search(default_space(), data), "RunSearch accepted");
    check(driver.run_search(default_space(), data).has_value(), "second RunSearch rejected");
    check(driver.wait_all_built(30s), "AllBuilt becomes true");
    const auto models = driver.models();
    check(driver.models_built() == models.size() && models.size() == 10, "ModelsBuilt counts models");
    const auto top = driver.top_model();
    const auto min = std::min_element(models.begin(), models.end(), [](const auto& a, const auto& b) {
      return *a.val_error < *b.val_error;
    });
    check(top && min != models.end() && top->id == min->id, "TopModel is the minimum of Models");

    std::map<std::string, int> kinds;
    bool routed = true;
    for (const auto& e : driver.trace().entries()) {
      ++kinds[e.kind];
      const bool from_driver = e.sender == exec::ActorId::kDriver && e.receiver == exec::ActorId::kSearcher;
      const bool to_exec = e.sender == exec::ActorId::kSearcher && e.receiver == exec::ActorId::kExecutor;
      const bool from_exec = e.sender == exec::ActorId::kExecutor && e.receiver == exec::ActorId::kSearcher;
      if (e.kind == "BuildModel" || e.kind == "DoWork") routed = routed && to_exec;
      else if (e.kind == "ModelBuilt" || e.kind == "WorkDone") routed = routed && from_exec;
      else routed = routed && from_driver;
    }
    check(routed, "every message travels its protocol route");
    for (const char* k : {"RunSearch", "TopModel", "AllBuilt", "ModelsBuilt", "Models",
                          "BuildModel", "DoWork", "ModelBuilt", "WorkDone"}) {
      check(kinds[k] > 0, std::string("trace has ") + k);
    }
    check(kinds["ModelBuilt"] == 10 && kinds["BuildModel"] == 10, "one ModelBuilt per BuildModel");
    check(kinds["DoWork"] == kinds["WorkDone"], "every DoWork answered by WorkDone");
  }

  {
    exec::Mailbox outbox;
    exec::Trace trace;
    exec::ExecutorOptions o;
    o.batch = false;
    o.max_iterations = 5;
    exec::Executor ex(o, data, outbox, &trace);
    auto queue_size = [&] {
      auto reply = exec::make_reply<std::size_t>();
      auto f = reply->get_future();
      ex.send(exec::ActorId::kSearcher, exec::QueueSize{reply});
      return f.get();
    };
    ex.set_after_task_hook([&](std::size_t built) {
      if (built == 1) ex.send(exec::ActorId::kSearcher, exec::StopWork{});
    });
    for (int i = 0; i < 3; ++i) {
      ex.send(exec::ActorId::kSearcher,
              exec::BuildModel{Configuration{"logistic", {{"lr", 0.1 * (i + 1)}}}});
    }
    check(queue_size() == 3, "QueueSize after three BuildModel is 3");
    ex.send(exec::ActorId::kSearcher, exec::DoWork{});
    auto first = outbox.pop_for(30s);
    check(first && std::holds_alternative<exec::ModelBuilt>(first->message), "first ModelBuilt");
    check(queue_size() == 2, "StopWork preserves two pending items");
    check(!outbox.pop_for(100ms), "nothing built after StopWork");
    ex.set_after_task_hook(nullptr);
    ex.send(exec::ActorId::kSearcher, exec::DoWork{});
    int built = 0;
    bool done = false;
    while (!done) {
      auto e = outbox.pop_for(30s);
      if (!e) break;
      built += std::holds_alternative<exec::ModelBuilt>(e->message);
      done = std::holds_alternative<exec::WorkDone>(e->message);
    }
    check(built == 2 && done, "resumed DoWork builds the rest then WorkDone");
    int stops = 0;
    for (const auto& e : trace.entries()) stops += e.kind == "StopWork";
    check(stops == 1, "StopWork traced");
  }

  std::string detail = failures.empty() ? "all protocol checks hold" : "failed:";
  for (const auto& f : failures) detail += " [" + f + "]";
  return {failures.empty(), detail};
}

Outcome determinism() {
  std::vector<PlanFlags> runs;
  for (const char* strategy : {"random", "tpe", "grid", "nelder-mead", "powell"}) {
    PlanFlags f;
    f.synth = "3000,10,0.1";
    f.strategy = strategy;
    f.budget_models = 30;
    f.max_iters = 40;
    f.partial_iters = 10;
    f.seed = 7;
    runs.push_back(f);
  }
  runs[0].bandit = false;
  runs[1].batching = false;
  runs[2].space = kSpaces + "/random_features.json";
  runs[2].budget_models = 16;
  runs.push_back(runs[0]);
  runs.back().planner = "baseline";
  runs.back().budget_models = 9;
  int identical = 0;
  for (const PlanFlags& f : runs) {
    identical += report_body(cmd_plan(f).text) == report_body(cmd_plan(f).text);
  }
  const int total = static_cast<int>(runs.size());
  return {identical == total,
          fmt("%d/%d flag sets give byte-identical report bodies on repeat", identical, total)};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria = {
    {"gradient oracle", gradient_oracle},
    {"batched equivalence", batched_equivalence},
    {"bandit scan reduction", bandit_scan_reduction},
    {"planner reduction", planner_reduction},
    {"batching throughput", batching_throughput},
    {"scheduling amortization", scheduling_amortization},
    {"derivative-free convergence", derivative_free},
    {"kernel approximation", kernel_approximation},
    {"protocol suite", protocol_suite},
    {"determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paqplan acceptance checks"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion numbers to run (default: all)")
      ->check(CLI::Range(1, static_cast<int>(kCriteria.size())));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) selected.push_back(i);
  }

  int hard_failures = 0;
  for (int n : selected) {
    const auto& [name, run] = kCriteria[static_cast<std::size_t>(n - 1)];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* verdict = o.pass ? "PASS" : (o.soft ? "FAIL (soft)" : "FAIL");
    std::printf("criterion %d: %s %s: %s (%.1fs)\n", n, verdict, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass && !o.soft) ++hard_failures;
  }
  return hard_failures == 0 ? 0 : 1;
}
