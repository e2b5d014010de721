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

#ifndef ADAPTIVE_IR_EVALUATION_H_
#define ADAPTIVE_IR_EVALUATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adaptive_ir/corpus.h"
#include "adaptive_ir/cutoff.h"
#include "adaptive_ir/reader.h"
#include "adaptive_ir/retrieval.h"

namespace adaptive_ir {

// A retrieval together with the relevance of each entry, in rank order.
struct JudgedRetrieval {
  ScoredCandidateList candidates;
  std::vector<bool> relevant;

  int RelevantInPrefix(int n) const;
  std::optional<int> FirstRelevantRank() const;
};

// Attaches labels to a retrieval. Throws InvalidArgument naming any
// candidate without a label.
JudgedRetrieval JudgeRetrieval(ScoredCandidateList candidates,
                               const RelevanceLabels &labels);

// Retrieves top-tau for every query and labels the candidates by answer
// containment. docs maps every indexed unit id to its document.
std::vector<JudgedRetrieval> RetrieveAndJudge(
    const SparseIndex &index, std::span<const Query> queries, int tau,
    const std::unordered_map<std::string, const Document *> &docs);

struct TrainingData {
  TrainingSet set;
  int used = 0;
  int excluded = 0;  // queries with no relevant document in the top tau
};

// One row per query that has a relevant candidate: its normalized scores
// (zero-padded to tau) and the rank of its first relevant document.
TrainingData BuildTrainingSet(std::span<const JudgedRetrieval> retrievals,
                              int tau);

// Fraction of queries with at least one relevant document in the top n.
double RecallAtN(std::span<const JudgedRetrieval> retrievals, int n);

// Mean number of relevant documents in the top n.
double AvgRelevantAtN(std::span<const JudgedRetrieval> retrievals, int n);

// Cutoff the model picks for one retrieval. Lists shorter than the model's
// tau (corpora with fewer than tau units) are padded with zero scores; the
// result never exceeds the list length.
int CutoffForRetrieval(const CutoffModel &model, const JudgedRetrieval &judged);

struct CutoffEvaluation {
  double exact_match = 0.0;
  // Among queries with a relevant candidate, the fraction whose first
  // relevant rank is within the predicted cutoff. 1 when no query qualifies.
  double coverage = 0.0;
  double mean_cutoff = 0.0;
};

// Averages the simulated reader's exact-match outcome over every query and
// over `replicates` reader streams derived with ReplicateSeed.
CutoffEvaluation EvaluateCutoff(std::span<const JudgedRetrieval> retrievals,
                                const CutoffModel &model,
                                const ReaderModel &reader, int replicates = 1);

inline double ExactMatchRate(std::span<const JudgedRetrieval> retrievals,
                             const CutoffModel &model, const ReaderModel &reader,
                             int replicates = 1) {
  return EvaluateCutoff(retrievals, model, reader, replicates).exact_match;
}

inline double Regret(double best, double value) { return best - value; }

struct CurvePoint {
  int64_t corpus_size = 0;
  double value = 0.0;

  bool operator==(const CurvePoint &) const = default;
};

struct PerformanceCurve {
  std::string system_label;
  std::vector<CurvePoint> points;

  bool operator==(const PerformanceCurve &) const = default;
};

// Trapezoidal weights in log corpus size, normalized to sum to one: half the
// log-gap to each neighbour. A single point gets weight one.
std::vector<double> LogSpanWeights(std::span<const int64_t> sizes);

// Per-size maximum over curves that share one size grid.
PerformanceCurve BestEnvelope(std::span<const PerformanceCurve> curves);

// Log-span weighted mean of best - curve over the shared grid.
double TotalRegret(const PerformanceCurve &curve, const PerformanceCurve &best);

struct RetrievalMetrics {
  int64_t corpus_size = 0;
  std::vector<double> recall;        // recall[n - 1] = recall@n
  std::vector<double> avg_relevant;  // avg_relevant[n - 1]

  bool operator==(const RetrievalMetrics &) const = default;
};

struct SystemResult {
  std::string label;
  PerformanceCurve exact_match;
  PerformanceCurve coverage;
  PerformanceCurve mean_cutoff;
  double total_regret = 0.0;

  bool operator==(const SystemResult &) const = default;
};

struct SweepReport {
  std::vector<int64_t> sizes;
  std::vector<RetrievalMetrics> retrieval;  // one per size
  std::vector<SystemResult> systems;
  PerformanceCurve best;
  std::vector<double> weights;

  bool operator==(const SweepReport &) const = default;
};

// Evaluates every system on one set of judged retrievals at one corpus size.
// Systems' totals are filled in by FinishReport.
void AppendSizeResults(SweepReport &report, int64_t corpus_size,
                       std::span<const JudgedRetrieval> retrievals,
                       std::span<const CutoffModel> systems,
                       const ReaderModel &reader, int replicates, int tau);

// Computes the best envelope, weights and total regrets.
void FinishReport(SweepReport &report);

struct SweepInput {
  std::vector<Document> relevant;     // seeded answer-bearing documents
  std::vector<Document> distractors;  // pool drawn from in a fixed order
  std::vector<Query> queries;
};

struct SweepConfig {
  std::vector<int64_t> grid;
  std::vector<CutoffModel> systems;
  ReaderModel reader;
  int replicates = 32;
  int tau = 20;
  IndexMode mode = IndexMode::kDocument;
  int hash_bits = kDefaultHashBits;
  uint64_t seed = 42;
  int threads = 1;
};

// Seeded Fisher-Yates permutation of [0, pool_size).
std::vector<size_t> DistractorOrder(size_t pool_size, uint64_t seed);

// Corpus at one grid size: every relevant document followed by the first
// size - |relevant| distractors in DistractorOrder.
std::vector<Document> SweepCorpus(const SweepInput &input,
                                  std::span<const size_t> order, int64_t size);

// Checks grid and systems against the input before any index is built.
void ValidateSweep(const SweepInput &input, const SweepConfig &config);

// Powers-of-two multiples of the smallest admissible size that fit in the
// distractor pool.
std::vector<int64_t> DefaultGrid(size_t num_relevant, size_t pool_size);

// Smallest admissible grid size: ceil(1.5 * number of relevant documents).
int64_t MinimumSweepSize(size_t num_relevant);

// Rebuilds the index at every grid size and evaluates all systems there.
SweepReport SweepCorpusGrowth(const SweepInput &input, const SweepConfig &config);

// CSV with columns system,corpus_size,metric,value preceded by '#' comment
// lines carrying the run configuration.
std::string FormatReportCsv(const SweepReport &report,
                            std::string_view config_json);

// JSON summary with the configuration, grid, weights and total regrets.
std::string FormatReportSummary(const SweepReport &report,
                                std::string_view config_json);

}  // namespace adaptive_ir

#endif  // ADAPTIVE_IR_EVALUATION_H_
