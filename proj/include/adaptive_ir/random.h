// Copyright 2026 The Adaptive IR Authors.
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

#ifndef ADAPTIVE_IR_RANDOM_H_
#define ADAPTIVE_IR_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace adaptive_ir {

// The standard distributions are implementation-defined, so every draw that
// must be reproducible across toolchains goes through these helpers on top of
// std::mt19937_64, whose output sequence is fixed by the standard.

// 53-bit uniform double in [0, 1).
inline double UnitUniform(std::mt19937_64 &engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) by rejection. bound must be positive.
inline uint64_t UniformBelow(std::mt19937_64 &engine, uint64_t bound) {
  const uint64_t limit = (0 - bound) % bound;
  for (;;) {
    uint64_t x = engine();
    if (x >= limit) return x % bound;
  }
}

// Fisher-Yates shuffle.
template <typename T>
void Shuffle(std::vector<T> &items, std::mt19937_64 &engine) {
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(UniformBelow(engine, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace adaptive_ir

#endif  // ADAPTIVE_IR_RANDOM_H_
