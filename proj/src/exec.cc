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

#include "paqplan/exec.h"

#include <algorithm>
#include <limits>
#include <sstream>

#include "paqplan/error.h"

namespace paq::exec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::optional<ModelState> best_model(const std::vector<ModelState>& models) {
  const ModelState* best = nullptr;
  for (const ModelState& m : models) {
    if (!m.val_error) continue;
    if (!best || *m.val_error < *best->val_error) best = &m;
  }
  if (!best) return std::nullopt;
  return *best;
}

}  // namespace

std::string_view actor_name(ActorId id) {
  switch (id) {
    case ActorId::kDriver: return "driver";
    case ActorId::kSearcher: return "searcher";
    case ActorId::kExecutor: return "executor";
    case ActorId::kHarness: return "harness";
  }
  return "unknown";
}

std::string_view message_kind(const Message& message) {
  static constexpr std::string_view kNames[] = {
      "RunSearch", "TopModel",   "AllBuilt",   "ModelsBuilt", "Models",   "BuildModel",
      "DoWork",    "StopWork",   "QueueSize",  "ModelBuilt",  "WorkDone", "Shutdown"};
  static_assert(std::size(kNames) == std::variant_size_v<Message>);
  return kNames[message.index()];
}

void Mailbox::push(Envelope envelope) {
  {
    std::lock_guard lock(mu_);
    queue_.push_back(std::move(envelope));
  }
  cv_.notify_one();
}

Envelope Mailbox::pop() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return !queue_.empty(); });
  Envelope e = std::move(queue_.front());
  queue_.pop_front();
  return e;
}

std::optional<Envelope> Mailbox::try_pop() {
  std::lock_guard lock(mu_);
  if (queue_.empty()) return std::nullopt;
  Envelope e = std::move(queue_.front());
  queue_.pop_front();
  return e;
}

std::optional<Envelope> Mailbox::pop_for(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  if (!cv_.wait_for(lock, timeout, [&] { return !queue_.empty(); })) return std::nullopt;
  Envelope e = std::move(queue_.front());
  queue_.pop_front();
  return e;
}

std::size_t Mailbox::size() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

Trace::Trace() : start_(Clock::now()) {}

void Trace::record(const Message& message, ActorId sender, ActorId receiver) {
  std::lock_guard lock(mu_);
  entries_.push_back({std::string(message_kind(message)), sender, receiver,
                      seconds_between(start_, Clock::now())});
}

std::vector<TraceEntry> Trace::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::string Trace::to_text() const {
  std::ostringstream out;
  for (const TraceEntry& e : entries()) {
    out << format_double(e.seconds) << ' ' << actor_name(e.sender) << ' '
        << actor_name(e.receiver) << ' ' << e.kind << '\n';
  }
  return out.str();
}

Executor::Executor(ExecutorOptions options, std::shared_ptr<const DataSplit> data,
                   Mailbox& outbox, Trace* trace, ActorId reply_to)
    : options_(std::move(options)),
      data_(std::move(data)),
      outbox_(&outbox),
      trace_(trace),
      reply_to_(reply_to) {
  if (!data_) throw Error(ErrorCode::kInvalidArgument, "executor needs data");
  if (options_.batch_size == 0 || options_.max_iterations == 0) {
    throw Error(ErrorCode::kInvalidArgument, "batch_size and max_iterations must be positive");
  }
  trainer_ = std::make_unique<ModelTrainer>(*data_, options_.trainer);
  thread_ = std::thread([this] { run(); });
}

Executor::~Executor() {
  inbox_.push({ActorId::kHarness, Shutdown{}});
  thread_.join();
}

void Executor::send(ActorId sender, Message message) {
  if (trace_) trace_->record(message, sender, ActorId::kExecutor);
  inbox_.push({sender, std::move(message)});
}

void Executor::set_after_task_hook(std::function<void(std::size_t)> hook) {
  std::lock_guard lock(stats_mu_);
  hook_ = std::move(hook);
}

ExecutorStats Executor::stats() const {
  std::lock_guard lock(stats_mu_);
  return stats_;
}

std::uint64_t Executor::passes() const {
  std::lock_guard lock(stats_mu_);
  return passes_;
}

void Executor::emit(Message message) {
  if (trace_) trace_->record(message, ActorId::kExecutor, reply_to_);
  outbox_->push({ActorId::kExecutor, std::move(message)});
}

void Executor::run() {
  while (!stopping_) {
    if (consuming_ && !queue_.empty()) {
      while (auto e = inbox_.try_pop()) handle(std::move(*e));
      if (stopping_ || !consuming_ || queue_.empty()) continue;
      work_one_group();
      if (queue_.empty()) {
        consuming_ = false;
        emit(WorkDone{});
      }
    } else {
      handle(inbox_.pop());
    }
  }
}

void Executor::handle(Envelope envelope) {
  std::visit(Overloaded{
                 [&](BuildModel& m) { queue_.push_back(std::move(m.config)); },
                 [&](DoWork&) {
                   consuming_ = true;
                   if (queue_.empty()) {
                     consuming_ = false;
                     emit(WorkDone{});
                   }
                 },
                 [&](StopWork&) { consuming_ = false; },
                 [&](QueueSize& q) { q.reply->set_value(queue_.size()); },
                 [&](Shutdown&) { stopping_ = true; },
                 [](auto&) {},
             },
             envelope.message);
}

void Executor::work_one_group() {
  const std::size_t n = options_.batch ? std::min(options_.batch_size, queue_.size()) : 1;
  std::vector<ModelState> models;
  for (std::size_t i = 0; i < n; ++i) {
    models.push_back(trainer_->create(queue_.front(), next_id_++));
    queue_.pop_front();
  }
  const auto delay = std::chrono::duration_cast<Clock::duration>(options_.sched_delay);
  for (std::size_t it = 0; it < options_.max_iterations; ++it) {
    const auto t0 = Clock::now();
    if (delay.count() > 0) std::this_thread::sleep_for(delay);
    const auto t1 = Clock::now();
    trainer_->train(models, 1);
    const auto t2 = Clock::now();
    std::lock_guard lock(stats_mu_);
    ++stats_.tasks;
    stats_.model_iterations += n;
    stats_.overhead_seconds += seconds_between(t0, t1);
    stats_.compute_seconds += seconds_between(t1, t2);
    passes_ = trainer_->passes();
  }
  for (ModelState& m : models) emit(ModelBuilt{std::move(m)});
  built_ += n;
  std::function<void(std::size_t)> hook;
  {
    std::lock_guard lock(stats_mu_);
    hook = hook_;
  }
  if (hook) hook(built_);
}

Searcher::Searcher(SearcherOptions options, Trace* trace)
    : options_(std::move(options)), trace_(trace) {
  thread_ = std::thread([this] { run(); });
}

Searcher::~Searcher() {
  inbox_.push({ActorId::kHarness, Shutdown{}});
  thread_.join();
}

void Searcher::send(ActorId sender, Message message) {
  if (trace_) trace_->record(message, sender, ActorId::kSearcher);
  inbox_.push({sender, std::move(message)});
}

void Searcher::run() {
  while (true) {
    Envelope e = inbox_.pop();
    if (std::holds_alternative<Shutdown>(e.message)) return;
    handle(std::move(e));
  }
}

void Searcher::handle(Envelope envelope) {
  std::visit(
      Overloaded{
          [&](RunSearch& r) {
            if (started_) {
              r.ack->set_value("search already started; RunSearch ignored");
              return;
            }
            try {
              if (!r.data) throw Error(ErrorCode::kInvalidArgument, "RunSearch without data");
              strategy_ = make_strategy(options_.strategy, r.space, options_.seed,
                                        options_.budget_models, options_.tpe);
              executor_ = std::make_unique<Executor>(options_.executor, r.data, inbox_, trace_);
            } catch (const std::exception& ex) {
              strategy_.reset();
              r.ack->set_value(std::string(ex.what()));
              return;
            }
            started_ = true;
            r.ack->set_value(std::nullopt);
            submit_more();
          },
          [&](TopModel& q) { q.reply->set_value(best_model(models_)); },
          [&](AllBuilt& q) { q.reply->set_value(all_built_); },
          [&](ModelsBuilt& q) { q.reply->set_value(models_.size()); },
          [&](Models& q) { q.reply->set_value(models_); },
          [&](ModelBuilt& m) {
            history_.push_back({m.model.id, m.model.config, m.model.iterations_used,
                                m.model.val_error, ModelStatus::kFinished});
            models_.push_back(std::move(m.model));
          },
          [&](WorkDone&) { submit_more(); },
          [](auto&) {},
      },
      envelope.message);
}

void Searcher::submit_more() {
  const std::size_t remaining = options_.budget_models - submitted_;
  if (remaining == 0 || strategy_->exhausted()) {
    all_built_ = true;
    return;
  }
  const std::size_t slots = std::min(remaining, options_.executor.batch_size);
  std::vector<Configuration> proposals = strategy_->propose(slots, history_);
  if (proposals.empty()) {
    all_built_ = true;
    return;
  }
  for (Configuration& c : proposals) {
    executor_->send(ActorId::kSearcher, BuildModel{std::move(c)});
    ++submitted_;
  }
  executor_->send(ActorId::kSearcher, DoWork{});
}

Driver::Driver(SearcherOptions options)
    : searcher_(std::make_unique<Searcher>(std::move(options), &trace_)) {}

Driver::~Driver() = default;

std::optional<std::string> Driver::run_search(SearchSpace space,
                                              std::shared_ptr<const DataSplit> data) {
  auto ack = make_reply<std::optional<std::string>>();
  auto done = ack->get_future();
  searcher_->send(ActorId::kDriver, RunSearch{std::move(space), std::move(data), ack});
  return done.get();
}

std::optional<ModelState> Driver::top_model() {
  auto reply = make_reply<std::optional<ModelState>>();
  auto f = reply->get_future();
  searcher_->send(ActorId::kDriver, TopModel{reply});
  return f.get();
}

bool Driver::all_built() {
  auto reply = make_reply<bool>();
  auto f = reply->get_future();
  searcher_->send(ActorId::kDriver, AllBuilt{reply});
  return f.get();
}

std::size_t Driver::models_built() {
  auto reply = make_reply<std::size_t>();
  auto f = reply->get_future();
  searcher_->send(ActorId::kDriver, ModelsBuilt{reply});
  return f.get();
}

std::vector<ModelState> Driver::models() {
  auto reply = make_reply<std::vector<ModelState>>();
  auto f = reply->get_future();
  searcher_->send(ActorId::kDriver, Models{reply});
  return f.get();
}

bool Driver::wait_all_built(std::chrono::milliseconds timeout, std::chrono::milliseconds poll) {
  const auto deadline = Clock::now() + timeout;
  while (true) {
    if (all_built()) return true;
    if (Clock::now() >= deadline) return false;
    std::this_thread::sleep_for(poll);
  }
}

Eigen::MatrixXd partitioned_gradient(ModelFamily family, const Dataset& data,
                                     std::span<const RowRange> shards, const Eigen::MatrixXd& W,
                                     std::span<const double> lambdas) {
  if (shards.empty()) throw Error(ErrorCode::kInvalidArgument, "no shards");
  if (lambdas.size() != static_cast<std::size_t>(W.cols())) {
    throw Error(ErrorCode::kInvalidArgument, "one lambda per model column expected");
  }
  for (const RowRange& s : shards) {
    if (s.begin > s.end || s.end > data.rows()) {
      throw Error(ErrorCode::kInvalidArgument, "shard outside the data");
    }
  }
  std::vector<std::future<Eigen::MatrixXd>> parts;
  parts.reserve(shards.size());
  for (const RowRange& s : shards) {
    parts.push_back(std::async(std::launch::async, [&, s] {
      const auto begin = static_cast<Eigen::Index>(s.begin);
      const auto count = static_cast<Eigen::Index>(s.size());
      return gradient_data_term(family, W, data.X.middleRows(begin, count),
                                data.y.segment(begin, count));
    }));
  }
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(W.rows(), W.cols());
  for (auto& p : parts) total += p.get();
  const Eigen::Map<const Eigen::VectorXd> lambda(lambdas.data(),
                                                 static_cast<Eigen::Index>(lambdas.size()));
  total += W * lambda.asDiagonal();
  return total;
}

}  // namespace paq::exec
