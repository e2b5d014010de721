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

#ifndef ADAPTIVE_IR_SYNTHETIC_H_
#define ADAPTIVE_IR_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "adaptive_ir/corpus.h"

namespace adaptive_ir {

// Seeded generator for a corpus-growth benchmark with known answers.
//
// Every query owns a set of topic terms and a unique answer token. Its single
// relevant document holds all topic terms plus the answer. Distractors are
// Zipf-distributed filler text; a fraction of them is topical, carrying a
// random subset of one query's topic terms but never an answer. Topic
// popularity is itself Zipf-distributed, so some queries attract many
// topical distractors as the corpus grows and others very few.
struct SyntheticConfig {
  int queries = 200;
  int train_queries = 200;
  int distractors = 20000;
  int topic_terms = 5;
  int question_terms = 3;
  double topical_fraction = 0.7;
  double term_inclusion = 0.4;
  int max_term_repeat = 2;
  int filler_min = 20;
  int filler_max = 40;  // exclusive
  int vocabulary = 3000;
  double zipf_exponent = 1.1;
  double topic_popularity = 1.0;
  uint64_t seed = 42;
};

struct SyntheticBenchmark {
  std::vector<Query> queries;
  std::vector<Document> relevant;  // relevant[i] answers queries[i]
  std::vector<Query> train_queries;
  std::vector<Document> train_relevant;
  std::vector<Document> distractors;
};

SyntheticBenchmark GenerateSyntheticBenchmark(const SyntheticConfig &config);

}  // namespace adaptive_ir

#endif  // ADAPTIVE_IR_SYNTHETIC_H_
