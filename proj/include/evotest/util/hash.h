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

#ifndef EVOTEST_UTIL_HASH_H_
#define EVOTEST_UTIL_HASH_H_

#include <cstdint>
#include <string_view>

namespace evotest {

// 64-bit FNV-1a. Stable across platforms and runs, which std::hash is not.
constexpr uint64_t Fnv1a64(std::string_view data,
                           uint64_t basis = 0xcbf29ce484222325ULL) {
  uint64_t hash = basis;
  for (const char c : data) {
    hash ^= static_cast<uint8_t>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

// SplitMix64 finalizer; used to derive independent seeds from a parent seed.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr uint64_t MixSeeds(uint64_t a, uint64_t b) {
  return Mix64(a ^ Mix64(b + 0x632be59bd9b4e019ULL));
}

template <typename... Rest>
constexpr uint64_t MixSeeds(uint64_t a, uint64_t b, Rest... rest) {
  return MixSeeds(MixSeeds(a, b), static_cast<uint64_t>(rest)...);
}

}  // namespace evotest

#endif  // EVOTEST_UTIL_HASH_H_
