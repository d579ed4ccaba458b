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

#ifndef PAQPLAN_EXEC_H_
#define PAQPLAN_EXEC_H_

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "paqplan/data.h"
#include "paqplan/history.h"
#include "paqplan/search.h"
#include "paqplan/space.h"
#include "paqplan/train.h"

namespace paq::exec {

enum class ActorId { kDriver, kSearcher, kExecutor, kHarness };
std::string_view actor_name(ActorId id);

template <typename T>
using Reply = std::shared_ptr<std::promise<T>>;

template <typename T>
Reply<T> make_reply() {
  return std::make_shared<std::promise<T>>();
}

// Driver -> Searcher. The ack carries an error text when the search was
// rejected.
struct RunSearch {
  SearchSpace space;
  std::shared_ptr<const DataSplit> data;
  Reply<std::optional<std::string>> ack;
};
struct TopModel {
  Reply<std::optional<ModelState>> reply;
};
struct AllBuilt {
  Reply<bool> reply;
};
struct ModelsBuilt {
  Reply<std::size_t> reply;
};
struct Models {
  Reply<std::vector<ModelState>> reply;
};

// Searcher -> Executor.
struct BuildModel {
  Configuration config;
};
struct DoWork {};
struct StopWork {};
struct QueueSize {
  Reply<std::size_t> reply;
};

// Executor -> Searcher.
struct ModelBuilt {
  ModelState model;
};
struct WorkDone {};

// Ends an actor's loop.
struct Shutdown {};

using Message = std::variant<RunSearch, TopModel, AllBuilt, ModelsBuilt, Models, BuildModel,
                             DoWork, StopWork, QueueSize, ModelBuilt, WorkDone, Shutdown>;

std::string_view message_kind(const Message& message);

struct Envelope {
  ActorId sender = ActorId::kHarness;
  Message message;
};

// Unbounded FIFO; messages from one sender are received in send order.
class Mailbox {
 public:
  void push(Envelope envelope);
  Envelope pop();
  std::optional<Envelope> try_pop();
  std::optional<Envelope> pop_for(std::chrono::milliseconds timeout);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Envelope> queue_;
};

struct TraceEntry {
  std::string kind;
  ActorId sender = ActorId::kHarness;
  ActorId receiver = ActorId::kHarness;
  double seconds = 0.0;  // since the trace was created
};

class Trace {
 public:
  Trace();
  void record(const Message& message, ActorId sender, ActorId receiver);
  std::vector<TraceEntry> entries() const;
  // One line per message: seconds, sender, receiver, kind.
  std::string to_text() const;

 private:
  mutable std::mutex mu_;
  std::chrono::steady_clock::time_point start_;
  std::vector<TraceEntry> entries_;
};

struct ExecutorOptions {
  bool batch = true;
  std::size_t batch_size = 10;
  std::size_t max_iterations = 100;
  // Charged as a real sleep once per training task, i.e. once per iteration
  // of a group of models.
  std::chrono::duration<double> sched_delay{0.0};
  TrainerOptions trainer;
};

struct ExecutorStats {
  std::size_t tasks = 0;
  std::uint64_t model_iterations = 0;
  double overhead_seconds = 0.0;  // measured time spent in the scheduling delay
  double compute_seconds = 0.0;

  double overhead_per_model_iteration() const {
    return model_iterations == 0 ? 0.0 : overhead_seconds / static_cast<double>(model_iterations);
  }
};

class Executor {
 public:
  // Emits ModelBuilt and WorkDone into `outbox`.
  Executor(ExecutorOptions options, std::shared_ptr<const DataSplit> data, Mailbox& outbox,
           Trace* trace = nullptr, ActorId reply_to = ActorId::kSearcher);
  ~Executor();
  Executor(const Executor&) = delete;
  Executor& operator=(const Executor&) = delete;

  void send(ActorId sender, Message message);

  // Runs on the executor thread after each completed group of models, before
  // the mailbox is read again.
  void set_after_task_hook(std::function<void(std::size_t built)> hook);

  ExecutorStats stats() const;
  std::uint64_t passes() const;

 private:
  void run();
  void handle(Envelope envelope);
  void work_one_group();
  void emit(Message message);

  ExecutorOptions options_;
  std::shared_ptr<const DataSplit> data_;
  std::unique_ptr<ModelTrainer> trainer_;
  Mailbox inbox_;
  Mailbox* outbox_;
  Trace* trace_;
  ActorId reply_to_;
  std::deque<Configuration> queue_;
  bool consuming_ = false;
  bool stopping_ = false;
  std::size_t next_id_ = 0;
  std::size_t built_ = 0;
  std::function<void(std::size_t)> hook_;
  mutable std::mutex stats_mu_;
  ExecutorStats stats_;
  std::uint64_t passes_ = 0;
  std::thread thread_;
};

struct SearcherOptions {
  StrategyKind strategy = StrategyKind::kRandom;
  std::uint64_t seed = 1;
  std::size_t budget_models = 16;
  TpeSettings tpe;
  ExecutorOptions executor;
};

class Searcher {
 public:
  explicit Searcher(SearcherOptions options, Trace* trace = nullptr);
  ~Searcher();
  Searcher(const Searcher&) = delete;
  Searcher& operator=(const Searcher&) = delete;

  void send(ActorId sender, Message message);

 private:
  void run();
  void handle(Envelope envelope);
  void submit_more();

  SearcherOptions options_;
  Trace* trace_;
  Mailbox inbox_;
  std::unique_ptr<Strategy> strategy_;
  std::unique_ptr<Executor> executor_;
  History history_;
  std::vector<ModelState> models_;
  std::size_t submitted_ = 0;
  bool started_ = false;
  bool all_built_ = false;
  std::thread thread_;
};

// Entry point: owns one Searcher and polls it with reply messages.
class Driver {
 public:
  explicit Driver(SearcherOptions options);
  ~Driver();

  // Returns an error text when the Searcher rejected the request.
  std::optional<std::string> run_search(SearchSpace space, std::shared_ptr<const DataSplit> data);

  std::optional<ModelState> top_model();
  bool all_built();
  std::size_t models_built();
  std::vector<ModelState> models();

  // Polls AllBuilt until true or the timeout passes.
  bool wait_all_built(std::chrono::milliseconds timeout,
                      std::chrono::milliseconds poll = std::chrono::milliseconds(5));

  const Trace& trace() const { return trace_; }

 private:
  Trace trace_;
  std::unique_ptr<Searcher> searcher_;
};

// Sums per-shard gradient data terms computed on concurrent threads, in
// shard order, then adds the regularization term.
Eigen::MatrixXd partitioned_gradient(ModelFamily family, const Dataset& data,
                                     std::span<const RowRange> shards, const Eigen::MatrixXd& W,
                                     std::span<const double> lambdas);

}  // namespace paq::exec

#endif  // PAQPLAN_EXEC_H_
