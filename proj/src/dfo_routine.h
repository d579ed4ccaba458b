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

#ifndef PAQPLAN_SRC_DFO_ROUTINE_H_
#define PAQPLAN_SRC_DFO_ROUTINE_H_

#include <coroutine>
#include <exception>
#include <utility>
#include <vector>

#include "paqplan/search.h"

namespace paq {

// Coroutine handle for an ask/tell optimizer. The body writes the point it
// wants evaluated into the channel and suspends with `co_await Ask{ch}`;
// the owner fills in the value and resumes.
struct DerivativeFreeStrategy::Routine {
  struct promise_type {
    std::exception_ptr error;

    Routine get_return_object() {
      return Routine(std::coroutine_handle<promise_type>::from_promise(*this));
    }
    std::suspend_always initial_suspend() noexcept { return {}; }
    std::suspend_always final_suspend() noexcept { return {}; }
    void return_void() {}
    void unhandled_exception() { error = std::current_exception(); }
  };

  explicit Routine(std::coroutine_handle<promise_type> h) : handle(h) {}
  Routine(Routine&& other) noexcept : handle(std::exchange(other.handle, {})) {}
  Routine& operator=(Routine&&) = delete;
  ~Routine() {
    if (handle) handle.destroy();
  }

  bool done() const { return !handle || handle.done(); }

  // Runs until the next request or completion.
  void resume() {
    handle.resume();
    if (handle.promise().error) std::rethrow_exception(handle.promise().error);
  }

  std::coroutine_handle<promise_type> handle;
};

// Suspends the optimizer until the channel holds the value of the point
// already written to it. Kept trivially destructible: gcc 11 mishandles
// temporaries with destructors inside co_await expressions.
struct Ask {
  DerivativeFreeStrategy::Channel* channel;

  bool await_ready() const noexcept { return false; }
  void await_suspend(std::coroutine_handle<>) noexcept {}
  double await_resume() const noexcept { return channel->value; }
};

}  // namespace paq

#endif  // PAQPLAN_SRC_DFO_ROUTINE_H_
