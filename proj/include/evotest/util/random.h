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

#ifndef EVOTEST_UTIL_RANDOM_H_
#define EVOTEST_UTIL_RANDOM_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace evotest {

// Seeded generator with distribution helpers whose output depends only on
// the engine stream, so seeded runs reproduce across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1).
  double UniformReal() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, bound). bound must be positive.
  uint64_t UniformBelow(uint64_t bound) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform in [lo, hi].
  int64_t UniformInt(int64_t lo, int64_t hi) {
    const auto span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(UniformBelow(span));
  }

  bool Bernoulli(double p) { return UniformReal() < p; }

  template <typename T>
  const T& Pick(const std::vector<T>& items) {
    return items[UniformBelow(items.size())];
  }

  // Returns `count` distinct indices from [0, n), in ascending order.
  std::vector<size_t> SampleIndices(size_t n, size_t count) {
    std::vector<size_t> all(n);
    std::iota(all.begin(), all.end(), size_t{0});
    for (size_t i = 0; i < count && i < n; ++i) {
      const size_t j = i + UniformBelow(n - i);
      std::swap(all[i], all[j]);
    }
    all.resize(std::min(count, n));
    std::sort(all.begin(), all.end());
    return all;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace evotest

#endif  // EVOTEST_UTIL_RANDOM_H_
