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

#include "adaptive_ir/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <numeric>
#include <sstream>
#include <thread>

#include "adaptive_ir/error.h"
#include "adaptive_ir/file_util.h"
#include "adaptive_ir/random.h"
#include "adaptive_ir/text.h"
#include "json.hpp"

namespace adaptive_ir {
namespace {

using nlohmann::json;

void RequireQueries(std::span<const JudgedRetrieval> retrievals) {
  if (retrievals.empty()) throw InvalidArgument("no queries to evaluate");
}

void RequirePositive(int n, const char *what) {
  if (n < 1) throw InvalidArgument(std::string(what) + " must be >= 1");
}

json ParseConfig(std::string_view config_json) {
  if (config_json.empty()) return json::object();
  json config = json::parse(config_json, nullptr, /*allow_exceptions=*/false);
  if (config.is_discarded()) throw InvalidArgument("config header is not JSON");
  return config;
}

}  // namespace

int JudgedRetrieval::RelevantInPrefix(int n) const {
  int limit = std::min<int>(n, static_cast<int>(relevant.size()));
  return static_cast<int>(std::count(relevant.begin(), relevant.begin() + limit, true));
}

std::optional<int> JudgedRetrieval::FirstRelevantRank() const {
  auto it = std::find(relevant.begin(), relevant.end(), true);
  if (it == relevant.end()) return std::nullopt;
  return static_cast<int>(it - relevant.begin()) + 1;
}

JudgedRetrieval JudgeRetrieval(ScoredCandidateList candidates,
                               const RelevanceLabels &labels) {
  JudgedRetrieval judged;
  judged.relevant.reserve(candidates.entries.size());
  for (const Candidate &c : candidates.entries) {
    auto it = labels.find(c.doc_id);
    if (it == labels.end()) {
      throw InvalidArgument("no relevance label for document \"" + c.doc_id + "\"");
    }
    judged.relevant.push_back(it->second);
  }
  judged.candidates = std::move(candidates);
  return judged;
}

std::vector<JudgedRetrieval> RetrieveAndJudge(
    const SparseIndex &index, std::span<const Query> queries, int tau,
    const std::unordered_map<std::string, const Document *> &docs) {
  std::vector<JudgedRetrieval> out;
  out.reserve(queries.size());
  for (const Query &query : queries) {
    AnswerMatcher matcher(query);
    JudgedRetrieval judged;
    judged.candidates = RetrieveTopK(index, query, tau);
    for (const Candidate &c : judged.candidates.entries) {
      auto it = docs.find(c.doc_id);
      if (it == docs.end()) {
        throw InvalidArgument("indexed unit \"" + c.doc_id +
                              "\" is missing from the corpus");
      }
      judged.relevant.push_back(matcher.Matches(*it->second));
    }
    out.push_back(std::move(judged));
  }
  return out;
}

TrainingData BuildTrainingSet(std::span<const JudgedRetrieval> retrievals,
                              int tau) {
  RequirePositive(tau, "tau");
  std::vector<const JudgedRetrieval *> usable;
  for (const JudgedRetrieval &r : retrievals) {
    if (r.candidates.entries.size() > static_cast<size_t>(tau)) {
      throw InvalidArgument("retrieval longer than tau");
    }
    if (r.FirstRelevantRank()) usable.push_back(&r);
  }
  TrainingData data;
  data.used = static_cast<int>(usable.size());
  data.excluded = static_cast<int>(retrievals.size() - usable.size());
  data.set.x = Eigen::MatrixXd::Zero(data.used, tau);
  data.set.y.resize(data.used);
  for (int i = 0; i < data.used; ++i) {
    const auto &entries = usable[static_cast<size_t>(i)]->candidates.entries;
    for (size_t j = 0; j < entries.size(); ++j) {
      data.set.x(i, static_cast<Eigen::Index>(j)) = entries[j].normalized_score;
    }
    data.set.y(i) = *usable[static_cast<size_t>(i)]->FirstRelevantRank();
  }
  return data;
}

double RecallAtN(std::span<const JudgedRetrieval> retrievals, int n) {
  RequireQueries(retrievals);
  RequirePositive(n, "n");
  size_t hits = 0;
  for (const JudgedRetrieval &r : retrievals) hits += r.RelevantInPrefix(n) > 0;
  return static_cast<double>(hits) / static_cast<double>(retrievals.size());
}

double AvgRelevantAtN(std::span<const JudgedRetrieval> retrievals, int n) {
  RequireQueries(retrievals);
  RequirePositive(n, "n");
  size_t total = 0;
  for (const JudgedRetrieval &r : retrievals) total += r.RelevantInPrefix(n);
  return static_cast<double>(total) / static_cast<double>(retrievals.size());
}

int CutoffForRetrieval(const CutoffModel &model, const JudgedRetrieval &judged) {
  std::vector<double> scores = judged.candidates.NormalizedScores();
  if (scores.empty()) throw InvalidArgument("empty retrieval");
  const int length = static_cast<int>(scores.size());
  if (std::optional<int> tau = ModelTau(model)) {
    if (length > *tau) {
      throw InvalidArgument("retrieval of length " + std::to_string(length) +
                            " exceeds the tau " + std::to_string(*tau) + " of " +
                            SystemLabel(model));
    }
    scores.resize(static_cast<size_t>(*tau), 0.0);
  }
  return std::min(PredictCutoff(model, scores), length);
}

CutoffEvaluation EvaluateCutoff(std::span<const JudgedRetrieval> retrievals,
                                const CutoffModel &model,
                                const ReaderModel &reader, int replicates) {
  RequireQueries(retrievals);
  RequirePositive(replicates, "replicates");
  std::vector<uint64_t> seeds;
  for (int r = 0; r < replicates; ++r) {
    seeds.push_back(ReplicateSeed(reader.seed, static_cast<uint64_t>(r)));
  }

  uint64_t matches = 0;
  uint64_t eligible = 0;
  uint64_t covered = 0;
  uint64_t cutoff_total = 0;
  for (const JudgedRetrieval &judged : retrievals) {
    int n = CutoffForRetrieval(model, judged);
    cutoff_total += n;
    if (std::optional<int> first = judged.FirstRelevantRank()) {
      ++eligible;
      covered += *first <= n;
    }
    // std::vector<bool> is packed, so the prefix is copied into plain bools.
    auto flags = std::make_unique<bool[]>(static_cast<size_t>(n));
    std::copy_n(judged.relevant.begin(), n, flags.get());
    std::span<const bool> prefix(flags.get(), static_cast<size_t>(n));
    for (uint64_t seed : seeds) {
      ReaderModel replica{reader.delta, seed};
      matches += SimulateRead(replica, judged.candidates.query_id, prefix).exact_match;
    }
  }
  CutoffEvaluation eval;
  const double queries = static_cast<double>(retrievals.size());
  eval.exact_match = static_cast<double>(matches) / (queries * replicates);
  eval.coverage = eligible == 0 ? 1.0
                                : static_cast<double>(covered) /
                                      static_cast<double>(eligible);
  eval.mean_cutoff = static_cast<double>(cutoff_total) / queries;
  return eval;
}

std::vector<double> LogSpanWeights(std::span<const int64_t> sizes) {
  if (sizes.empty()) throw InvalidArgument("empty size grid");
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1 || (i > 0 && sizes[i] <= sizes[i - 1])) {
      throw InvalidArgument("size grid must be positive and strictly increasing");
    }
  }
  if (sizes.size() == 1) return {1.0};
  const size_t m = sizes.size();
  std::vector<double> logs(m);
  for (size_t i = 0; i < m; ++i) logs[i] = std::log(static_cast<double>(sizes[i]));
  std::vector<double> weights(m);
  weights[0] = (logs[1] - logs[0]) / 2.0;
  weights[m - 1] = (logs[m - 1] - logs[m - 2]) / 2.0;
  for (size_t i = 1; i + 1 < m; ++i) weights[i] = (logs[i + 1] - logs[i - 1]) / 2.0;
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double &w : weights) w /= total;
  return weights;
}

PerformanceCurve BestEnvelope(std::span<const PerformanceCurve> curves) {
  if (curves.empty()) throw InvalidArgument("no curves");
  PerformanceCurve best{"best", curves[0].points};
  for (const PerformanceCurve &curve : curves.subspan(1)) {
    if (curve.points.size() != best.points.size()) {
      throw InvalidArgument("curves do not share a size grid");
    }
    for (size_t j = 0; j < curve.points.size(); ++j) {
      if (curve.points[j].corpus_size != best.points[j].corpus_size) {
        throw InvalidArgument("curves do not share a size grid");
      }
      best.points[j].value = std::max(best.points[j].value, curve.points[j].value);
    }
  }
  return best;
}

double TotalRegret(const PerformanceCurve &curve, const PerformanceCurve &best) {
  if (curve.points.size() != best.points.size()) {
    throw InvalidArgument("curve " + curve.system_label +
                          " does not share the size grid of the best envelope");
  }
  std::vector<int64_t> sizes;
  for (size_t j = 0; j < curve.points.size(); ++j) {
    if (curve.points[j].corpus_size != best.points[j].corpus_size) {
      throw InvalidArgument("curve " + curve.system_label +
                            " does not share the size grid of the best envelope");
    }
    sizes.push_back(curve.points[j].corpus_size);
  }
  std::vector<double> weights = LogSpanWeights(sizes);
  double total = 0.0;
  for (size_t j = 0; j < sizes.size(); ++j) {
    total += weights[j] * Regret(best.points[j].value, curve.points[j].value);
  }
  return total;
}

void AppendSizeResults(SweepReport &report, int64_t corpus_size,
                       std::span<const JudgedRetrieval> retrievals,
                       std::span<const CutoffModel> systems,
                       const ReaderModel &reader, int replicates, int tau) {
  if (!report.sizes.empty() && corpus_size <= report.sizes.back()) {
    throw InvalidArgument("corpus sizes must be appended in increasing order");
  }
  if (report.systems.empty()) {
    for (const CutoffModel &model : systems) {
      SystemResult result;
      result.label = SystemLabel(model);
      result.exact_match.system_label = result.label;
      result.coverage.system_label = result.label;
      result.mean_cutoff.system_label = result.label;
      report.systems.push_back(std::move(result));
    }
  } else if (report.systems.size() != systems.size()) {
    throw InvalidArgument("system list changed between corpus sizes");
  }

  report.sizes.push_back(corpus_size);
  RetrievalMetrics metrics;
  metrics.corpus_size = corpus_size;
  for (int n = 1; n <= tau; ++n) {
    metrics.recall.push_back(RecallAtN(retrievals, n));
    metrics.avg_relevant.push_back(AvgRelevantAtN(retrievals, n));
  }
  report.retrieval.push_back(std::move(metrics));

  for (size_t s = 0; s < systems.size(); ++s) {
    CutoffEvaluation eval = EvaluateCutoff(retrievals, systems[s], reader, replicates);
    report.systems[s].exact_match.points.push_back({corpus_size, eval.exact_match});
    report.systems[s].coverage.points.push_back({corpus_size, eval.coverage});
    report.systems[s].mean_cutoff.points.push_back({corpus_size, eval.mean_cutoff});
  }
}

void FinishReport(SweepReport &report) {
  if (report.systems.empty()) throw InvalidArgument("report has no systems");
  std::vector<PerformanceCurve> curves;
  for (const SystemResult &s : report.systems) curves.push_back(s.exact_match);
  report.best = BestEnvelope(curves);
  report.weights = LogSpanWeights(report.sizes);
  for (SystemResult &s : report.systems) {
    s.total_regret = TotalRegret(s.exact_match, report.best);
  }
}

std::vector<size_t> DistractorOrder(size_t pool_size, uint64_t seed) {
  std::vector<size_t> order(pool_size);
  std::iota(order.begin(), order.end(), size_t{0});
  std::mt19937_64 engine(Mix64(seed ^ Fnv1a64("distractor-order")));
  Shuffle(order, engine);
  return order;
}

int64_t MinimumSweepSize(size_t num_relevant) {
  return static_cast<int64_t>((3 * num_relevant + 1) / 2);
}

std::vector<Document> SweepCorpus(const SweepInput &input,
                                  std::span<const size_t> order, int64_t size) {
  const int64_t relevant = static_cast<int64_t>(input.relevant.size());
  if (size < relevant || size - relevant > static_cast<int64_t>(order.size())) {
    throw InvalidArgument("corpus size " + std::to_string(size) +
                          " cannot be assembled from the inputs");
  }
  std::vector<Document> corpus = input.relevant;
  corpus.reserve(static_cast<size_t>(size));
  for (int64_t i = 0; i < size - relevant; ++i) {
    corpus.push_back(input.distractors[order[static_cast<size_t>(i)]]);
  }
  return corpus;
}

void ValidateSweep(const SweepInput &input, const SweepConfig &config) {
  if (input.queries.empty()) throw InvalidArgument("sweep needs queries");
  if (input.relevant.empty()) throw InvalidArgument("sweep needs relevant documents");
  if (config.grid.empty()) throw InvalidArgument("size grid is empty");
  if (config.systems.empty()) throw InvalidArgument("no cutoff systems given");
  if (config.tau < 1) throw InvalidArgument("tau must be >= 1");
  if (config.replicates < 1) throw InvalidArgument("replicates must be >= 1");
  if (config.threads < 1) throw InvalidArgument("threads must be >= 1");
  if (config.hash_bits < kMinHashBits || config.hash_bits > kMaxHashBits) {
    throw InvalidArgument("hash_bits out of range");
  }
  if (!(config.reader.delta >= 0.0) || !std::isfinite(config.reader.delta)) {
    throw InvalidArgument("reader delta must be finite and >= 0");
  }
  for (size_t i = 1; i < config.grid.size(); ++i) {
    if (config.grid[i] <= config.grid[i - 1]) {
      throw InvalidArgument("size grid must be strictly increasing");
    }
  }
  const int64_t minimum = MinimumSweepSize(input.relevant.size());
  if (config.grid.front() < minimum) {
    throw InvalidArgument("smallest grid size " + std::to_string(config.grid.front()) +
                          " is below 1.5 x " + std::to_string(input.relevant.size()) +
                          " relevant documents (" + std::to_string(minimum) + ")");
  }
  const int64_t largest = static_cast<int64_t>(input.relevant.size() +
                                               input.distractors.size());
  if (config.grid.back() > largest) {
    throw InvalidArgument("grid size " + std::to_string(config.grid.back()) +
                          " exceeds the " + std::to_string(input.distractors.size()) +
                          " available distractors plus " +
                          std::to_string(input.relevant.size()) +
                          " relevant documents");
  }
  for (const CutoffModel &model : config.systems) {
    ValidateCutoffModel(model);
    if (std::optional<int> tau = ModelTau(model); tau && *tau != config.tau) {
      throw InvalidArgument(SystemLabel(model) + " has tau " + std::to_string(*tau) +
                            " but the sweep retrieves tau " +
                            std::to_string(config.tau));
    }
  }
}

std::vector<int64_t> DefaultGrid(size_t num_relevant, size_t pool_size) {
  const int64_t base = std::max<int64_t>(MinimumSweepSize(num_relevant), 1);
  const int64_t largest = static_cast<int64_t>(num_relevant + pool_size);
  std::vector<int64_t> grid;
  for (int64_t size = base; size <= largest; size *= 2) grid.push_back(size);
  return grid;
}

SweepReport SweepCorpusGrowth(const SweepInput &input, const SweepConfig &config) {
  ValidateSweep(input, config);
  const std::vector<size_t> order = DistractorOrder(input.distractors.size(), config.seed);

  std::unordered_map<std::string, const Document *> docs;
  for (const Document &d : input.relevant) docs.emplace(d.id, &d);
  for (const Document &d : input.distractors) {
    if (!docs.emplace(d.id, &d).second) {
      throw InvalidArgument("document id \"" + d.id + "\" appears twice");
    }
  }

  // Sizes are independent; workers claim them from a shared counter and the
  // results are merged in grid order afterwards.
  const size_t sizes = config.grid.size();
  std::vector<std::vector<JudgedRetrieval>> judged(sizes);
  std::vector<std::exception_ptr> errors(sizes);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < sizes; i = next++) {
      try {
        std::vector<Document> corpus = SweepCorpus(input, order, config.grid[i]);
        SparseIndex index = SparseIndex::Build(corpus, config.mode, config.hash_bits);
        judged[i] = RetrieveAndJudge(index, input.queries, config.tau, docs);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(config.threads, static_cast<int>(sizes));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const std::exception_ptr &e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepReport report;
  for (size_t i = 0; i < sizes; ++i) {
    AppendSizeResults(report, config.grid[i], judged[i], config.systems,
                      config.reader, config.replicates, config.tau);
  }
  FinishReport(report);
  return report;
}

std::string FormatReportCsv(const SweepReport &report,
                            std::string_view config_json) {
  std::ostringstream out;
  out << "# adaptive-ir report\n";
  out << "# config: " << ParseConfig(config_json).dump() << "\n";
  out << "system,corpus_size,metric,value\n";
  auto row = [&](const std::string &system, int64_t size, const std::string &metric,
                 double value) {
    out << system << ',' << size << ',' << metric << ',' << FormatDouble(value) << '\n';
  };
  for (size_t j = 0; j < report.sizes.size(); ++j) {
    const int64_t size = report.sizes[j];
    const RetrievalMetrics &m = report.retrieval[j];
    for (size_t n = 0; n < m.recall.size(); ++n) {
      row("retriever", size, "recall@" + std::to_string(n + 1), m.recall[n]);
    }
    for (size_t n = 0; n < m.avg_relevant.size(); ++n) {
      row("retriever", size, "avg_relevant@" + std::to_string(n + 1),
          m.avg_relevant[n]);
    }
    for (const SystemResult &s : report.systems) {
      row(s.label, size, "exact_match", s.exact_match.points[j].value);
      if (!report.best.points.empty()) {
        row(s.label, size, "regret",
            Regret(report.best.points[j].value, s.exact_match.points[j].value));
      }
      row(s.label, size, "coverage", s.coverage.points[j].value);
      row(s.label, size, "mean_cutoff", s.mean_cutoff.points[j].value);
    }
  }
  return out.str();
}

std::string FormatReportSummary(const SweepReport &report,
                                std::string_view config_json) {
  json summary;
  summary["config"] = ParseConfig(config_json);
  summary["corpus_sizes"] = report.sizes;
  summary["regret_weights"] = report.weights;
  json best = json::array();
  for (const CurvePoint &p : report.best.points) best.push_back(p.value);
  summary["best_exact_match"] = best;
  json systems = json::array();
  for (const SystemResult &s : report.systems) {
    json em = json::array();
    for (const CurvePoint &p : s.exact_match.points) em.push_back(p.value);
    systems.push_back({{"system", s.label},
                       {"total_regret", s.total_regret},
                       {"exact_match", em}});
  }
  summary["systems"] = systems;
  return summary.dump(2) + "\n";
}

}  // namespace adaptive_ir
