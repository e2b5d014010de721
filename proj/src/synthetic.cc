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

#include "adaptive_ir/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "adaptive_ir/error.h"
#include "adaptive_ir/random.h"
#include "adaptive_ir/text.h"

namespace adaptive_ir {
namespace {

std::string Numbered(const char *format, int a, int b = 0) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

// Inverse-CDF sampler over ranks 0..n-1 with P(r) proportional to
// (r + 1)^-exponent.
class ZipfSampler {
 public:
  ZipfSampler(int n, double exponent) : cumulative_(static_cast<size_t>(n)) {
    double total = 0.0;
    for (int r = 0; r < n; ++r) {
      total += std::pow(static_cast<double>(r + 1), -exponent);
      cumulative_[static_cast<size_t>(r)] = total;
    }
    for (double &c : cumulative_) c /= total;
  }

  int Sample(std::mt19937_64 &engine) const {
    double u = UnitUniform(engine);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<int>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

void Validate(const SyntheticConfig &c) {
  if (c.queries < 1 || c.train_queries < 0 || c.distractors < 0 ||
      c.topic_terms < 1 || c.question_terms < 1 ||
      c.question_terms > c.topic_terms || c.max_term_repeat < 1 ||
      c.filler_min < 0 || c.filler_max <= c.filler_min || c.vocabulary < 1 ||
      !(c.topical_fraction >= 0.0 && c.topical_fraction <= 1.0) ||
      !(c.term_inclusion >= 0.0 && c.term_inclusion <= 1.0) ||
      !(c.zipf_exponent >= 0.0) || !(c.topic_popularity >= 0.0)) {
    throw InvalidArgument("invalid synthetic benchmark configuration");
  }
}

}  // namespace

SyntheticBenchmark GenerateSyntheticBenchmark(const SyntheticConfig &config) {
  Validate(config);
  std::mt19937_64 engine(Mix64(config.seed ^ Fnv1a64("synthetic-benchmark")));
  const ZipfSampler filler_words(config.vocabulary, config.zipf_exponent);
  const int all_queries = config.queries + config.train_queries;

  auto append_filler = [&](std::string &text) {
    int length = config.filler_min +
                 static_cast<int>(UniformBelow(
                     engine, static_cast<uint64_t>(config.filler_max - config.filler_min)));
    for (int i = 0; i < length; ++i) {
      if (!text.empty()) text.push_back(' ');
      text += Numbered("w%05d", filler_words.Sample(engine));
    }
  };
  auto topic_term = [](int query, int term) {
    return Numbered("t%05dk%d", query, term);
  };

  // Document ids come from one shuffled numbering so that id order, which
  // breaks score ties, carries no information about relevance.
  const int total_docs = all_queries + config.distractors;
  std::vector<int> doc_numbers(static_cast<size_t>(total_docs));
  std::iota(doc_numbers.begin(), doc_numbers.end(), 0);
  Shuffle(doc_numbers, engine);
  int next_doc = 0;
  auto next_doc_id = [&] { return Numbered("doc%07d", doc_numbers[next_doc++]); };

  SyntheticBenchmark bench;
  for (int q = 0; q < all_queries; ++q) {
    std::vector<int> order(static_cast<size_t>(config.topic_terms));
    std::iota(order.begin(), order.end(), 0);
    Shuffle(order, engine);
    std::string question = "which";
    for (int i = 0; i < config.question_terms; ++i) {
      question += " " + topic_term(q, order[static_cast<size_t>(i)]);
    }
    question += "?";

    const std::string answer = Numbered("ans%05d", q);
    std::string text;
    for (int t = 0; t < config.topic_terms; ++t) {
      if (!text.empty()) text.push_back(' ');
      text += topic_term(q, t);
    }
    text += " " + answer;
    append_filler(text);

    const bool train = q >= config.queries;
    Query query{train ? Numbered("train%05d", q - config.queries)
                      : Numbered("q%05d", q),
                question,
                {answer}};
    Document doc{next_doc_id(), Numbered("Article on topic %d", q), text};
    (train ? bench.train_queries : bench.queries).push_back(std::move(query));
    (train ? bench.train_relevant : bench.relevant).push_back(std::move(doc));
  }

  const ZipfSampler topic_choice(all_queries, config.topic_popularity);
  std::vector<int> topic_by_popularity(static_cast<size_t>(all_queries));
  std::iota(topic_by_popularity.begin(), topic_by_popularity.end(), 0);
  Shuffle(topic_by_popularity, engine);

  bench.distractors.reserve(static_cast<size_t>(config.distractors));
  for (int i = 0; i < config.distractors; ++i) {
    std::string text;
    append_filler(text);
    if (UnitUniform(engine) < config.topical_fraction) {
      int topic = topic_by_popularity[static_cast<size_t>(topic_choice.Sample(engine))];
      for (int t = 0; t < config.topic_terms; ++t) {
        if (UnitUniform(engine) >= config.term_inclusion) continue;
        int repeat = 1 + static_cast<int>(UniformBelow(
                             engine, static_cast<uint64_t>(config.max_term_repeat)));
        for (int r = 0; r < repeat; ++r) {
          if (!text.empty()) text.push_back(' ');
          text += topic_term(topic, t);
        }
      }
    }
    if (text.empty()) text = "w00000";
    bench.distractors.push_back(
        Document{next_doc_id(), Numbered("Filler article %d", i), std::move(text)});
  }
  return bench;
}

}  // namespace adaptive_ir
