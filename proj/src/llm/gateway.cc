// Copyright 2026 The Evotest Authors
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

#include "evotest/llm/gateway.h"

#include <algorithm>
#include <utility>

namespace evotest::llm {

Gateway::Gateway(std::shared_ptr<Backend> backend, int in_flight_cap)
    : backend_(std::move(backend)), cap_(std::max(1, in_flight_cap)) {}

CompletionResponse Gateway::Complete(const CompletionRequest& request) {
  {
    std::unique_lock lock(mu_);
    slot_free_.wait(lock, [&] { return in_flight_ < cap_; });
    ++in_flight_;
    int observed = max_in_flight_.load();
    while (observed < in_flight_ &&
           !max_in_flight_.compare_exchange_weak(observed, in_flight_)) {
    }
  }
  ++calls_;
  struct Release {
    Gateway* self;
    ~Release() {
      {
        std::lock_guard lock(self->mu_);
        --self->in_flight_;
      }
      self->slot_free_.notify_one();
    }
  } release{this};
  try {
    return backend_->Complete(request);
  } catch (...) {
    ++failures_;
    throw;
  }
}

}  // namespace evotest::llm
