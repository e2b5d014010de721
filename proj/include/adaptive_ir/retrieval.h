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

#ifndef ADAPTIVE_IR_RETRIEVAL_H_
#define ADAPTIVE_IR_RETRIEVAL_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adaptive_ir/corpus.h"

namespace adaptive_ir {

// Feature space of a SparseIndex.
//   kDocument:  hashed unigram + bigram counts, scored by tf-idf dot product.
//   kParagraph: exact unigram terms, scored by tf-idf cosine.
enum class IndexMode : uint8_t { kDocument = 0, kParagraph = 1 };

std::string_view IndexModeName(IndexMode mode);
IndexMode ParseIndexMode(std::string_view name);

inline constexpr int kDefaultHashBits = 24;
inline constexpr int kMinHashBits = 8;
inline constexpr int kMaxHashBits = 30;

// Bucket of a unigram or bigram in the hashed feature space: FNV-1a 64 of the
// token (bigrams joined by one space) reduced mod 2^hash_bits.
uint64_t HashFeature(std::string_view feature, int hash_bits);

// Hashed unigram and bigram buckets of a token stream, with repetition.
std::vector<uint64_t> HashedFeatures(std::span<const std::string> tokens,
                                     int hash_bits);

// idf = ln((N - df + 0.5) / (df + 0.5)), floored at zero.
double InverseDocumentFrequency(uint64_t num_units, uint64_t doc_freq);

struct Candidate {
  std::string doc_id;
  double raw_score = 0.0;
  double normalized_score = 0.0;

  bool operator==(const Candidate &) const = default;
};

// Top-tau retrieval result. Entries are ordered by raw score descending with
// ties broken by ascending doc id; normalized scores sum to one.
struct ScoredCandidateList {
  std::string query_id;
  int tau = 0;
  std::vector<Candidate> entries;

  std::vector<double> NormalizedScores() const;

  bool operator==(const ScoredCandidateList &) const = default;
};

// Immutable inverted tf-idf index. Feature weights are raw term count times
// floored idf; queries are weighted the same way. Query features that do not
// occur in the corpus are dropped.
class SparseIndex {
 public:
  using SparseVector = std::vector<std::pair<uint64_t, double>>;

  // hash_bits is only meaningful in document mode but is validated and
  // recorded in both.
  static SparseIndex Build(std::span<const Document> units, IndexMode mode,
                           int hash_bits = kDefaultHashBits);

  IndexMode mode() const { return mode_; }
  int hash_bits() const { return hash_bits_; }
  size_t size() const { return unit_ids_.size(); }
  const std::vector<std::string> &unit_ids() const { return unit_ids_; }
  size_t num_features() const { return features_.size(); }

  // Document frequency of a feature key (hash bucket in document mode, term
  // in paragraph mode); zero when absent.
  uint32_t DocumentFrequency(uint64_t feature) const;
  uint32_t TermDocumentFrequency(std::string_view term) const;

  // tf-idf vector of a unit or a query, keyed by feature id and ascending.
  // In paragraph mode feature ids index the sorted vocabulary.
  SparseVector UnitVector(size_t unit) const;
  SparseVector QueryVector(std::string_view question) const;

  // One score per unit, in index order. All scores are non-negative.
  std::vector<double> Score(std::string_view question) const;

  ScoredCandidateList Retrieve(std::string_view question, int tau,
                               std::string query_id = {}) const;

  std::string Serialize() const;
  static SparseIndex Deserialize(std::string_view bytes);
  void Save(const std::filesystem::path &path) const;
  static SparseIndex Load(const std::filesystem::path &path);

  static constexpr uint32_t kFormatVersion = 1;

 private:
  SparseIndex() = default;

  void FinishLayout();
  std::vector<std::pair<size_t, uint32_t>> QueryCounts(
      std::string_view question) const;
  ptrdiff_t FeatureSlot(uint64_t feature) const;

  IndexMode mode_ = IndexMode::kDocument;
  int hash_bits_ = kDefaultHashBits;
  std::vector<std::string> unit_ids_;
  std::vector<uint32_t> id_rank_;  // position of each unit id in sorted order
  std::vector<std::string> vocabulary_;  // paragraph mode only, sorted
  std::vector<uint64_t> features_;       // ascending feature keys
  std::vector<uint32_t> doc_freq_;
  std::vector<double> idf_;
  std::vector<uint64_t> posting_offsets_;
  std::vector<uint32_t> posting_units_;
  std::vector<double> posting_weights_;
  std::vector<double> unit_norms_;
};

// Convenience wrappers matching the index operations.
inline SparseIndex BuildIndex(std::span<const Document> units, IndexMode mode,
                              int hash_bits = kDefaultHashBits) {
  return SparseIndex::Build(units, mode, hash_bits);
}

inline std::vector<double> ScoreQuery(const SparseIndex &index,
                                      std::string_view question) {
  return index.Score(question);
}

ScoredCandidateList RetrieveTopK(const SparseIndex &index, const Query &query,
                                 int tau);

// Normalizes raw scores over the given list: raw / sum, or uniform when the
// sum is zero.
void NormalizeCandidateScores(std::vector<Candidate> &entries);

}  // namespace adaptive_ir

#endif  // ADAPTIVE_IR_RETRIEVAL_H_
