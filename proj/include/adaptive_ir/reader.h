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

#ifndef ADAPTIVE_IR_READER_H_
#define ADAPTIVE_IR_READER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "adaptive_ir/random.h"

namespace adaptive_ir {

// Parametric stand-in for a machine-comprehension reader. Every passed
// document emits one candidate answer with a confidence: Uniform(0, 1) for
// irrelevant documents, Uniform(delta, 1 + delta) for relevant ones. The
// query is answered correctly iff the most confident candidate comes from a
// relevant document.
struct ReaderModel {
  double delta = 0.5;
  uint64_t seed = 42;
};

struct ReadOutcome {
  std::string query_id;
  int n_used = 0;
  int k_relevant = 0;
  bool exact_match = false;

  bool operator==(const ReadOutcome &) const = default;
};

// Seed of the random stream that belongs to one query:
//   Mix64(master ^ Mix64(Fnv1a64(query_id))).
uint64_t QueryStreamSeed(uint64_t master_seed, std::string_view query_id);

// Master seed of reader replicate r: Mix64(master ^ Mix64(r + 1)).
uint64_t ReplicateSeed(uint64_t master_seed, uint64_t replicate);

// Simulates reading the candidates whose relevance pattern (in rank order) is
// given. Confidences are drawn in rank order from the query's stream, so a
// longer prefix extends a shorter one. Ties go to the earlier rank.
ReadOutcome SimulateRead(const ReaderModel &reader, std::string_view query_id,
                         std::span<const bool> relevant);

// Probability that the maximum of k draws from Uniform(delta, 1 + delta)
// exceeds the maximum of n - k draws from Uniform(0, 1). Exactly k / n when
// delta = 0; adaptive Gauss-Kronrod quadrature otherwise.
double ExactMatchProbability(int k, int n, double delta);

}  // namespace adaptive_ir

#endif  // ADAPTIVE_IR_READER_H_
