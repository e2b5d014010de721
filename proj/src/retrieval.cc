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

#include "adaptive_ir/retrieval.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "adaptive_ir/binary_io.h"
#include "adaptive_ir/error.h"
#include "adaptive_ir/file_util.h"
#include "adaptive_ir/text.h"

namespace adaptive_ir {
namespace {

constexpr std::string_view kIndexMagic = "AIRINDEX";

struct Posting {
  uint64_t feature;
  uint32_t unit;
  uint32_t count;
};

void ValidateHashBits(int hash_bits) {
  if (hash_bits < kMinHashBits || hash_bits > kMaxHashBits) {
    throw InvalidArgument("hash_bits must lie in [" +
                          std::to_string(kMinHashBits) + ", " +
                          std::to_string(kMaxHashBits) + "], got " +
                          std::to_string(hash_bits));
  }
}

// Collapses a list of feature keys into (key, count) sorted by key.
template <typename Key>
std::vector<std::pair<Key, uint32_t>> CountSorted(std::vector<Key> keys) {
  std::sort(keys.begin(), keys.end());
  std::vector<std::pair<Key, uint32_t>> counts;
  for (auto &key : keys) {
    if (!counts.empty() && counts.back().first == key) {
      ++counts.back().second;
    } else {
      counts.emplace_back(std::move(key), 1);
    }
  }
  return counts;
}

}  // namespace

std::string_view IndexModeName(IndexMode mode) {
  return mode == IndexMode::kDocument ? "document" : "paragraph";
}

IndexMode ParseIndexMode(std::string_view name) {
  if (name == "document") return IndexMode::kDocument;
  if (name == "paragraph") return IndexMode::kParagraph;
  throw InvalidArgument("unknown index mode \"" + std::string(name) +
                        "\" (expected document or paragraph)");
}

uint64_t HashFeature(std::string_view feature, int hash_bits) {
  return Fnv1a64(feature) & ((uint64_t{1} << hash_bits) - 1);
}

std::vector<uint64_t> HashedFeatures(std::span<const std::string> tokens,
                                     int hash_bits) {
  std::vector<uint64_t> features;
  features.reserve(tokens.size() * 2);
  for (size_t i = 0; i < tokens.size(); ++i) {
    features.push_back(HashFeature(tokens[i], hash_bits));
    if (i + 1 < tokens.size()) {
      features.push_back(HashFeature(tokens[i] + " " + tokens[i + 1], hash_bits));
    }
  }
  return features;
}

double InverseDocumentFrequency(uint64_t num_units, uint64_t doc_freq) {
  double n = static_cast<double>(num_units);
  double df = static_cast<double>(doc_freq);
  return std::max(0.0, std::log((n - df + 0.5) / (df + 0.5)));
}

std::vector<double> ScoredCandidateList::NormalizedScores() const {
  std::vector<double> scores;
  scores.reserve(entries.size());
  for (const Candidate &c : entries) scores.push_back(c.normalized_score);
  return scores;
}

void NormalizeCandidateScores(std::vector<Candidate> &entries) {
  double total = 0.0;
  for (const Candidate &c : entries) total += c.raw_score;
  for (Candidate &c : entries) {
    c.normalized_score = total > 0.0
                             ? c.raw_score / total
                             : 1.0 / static_cast<double>(entries.size());
  }
}

SparseIndex SparseIndex::Build(std::span<const Document> units, IndexMode mode,
                               int hash_bits) {
  if (units.empty()) throw InvalidArgument("cannot index an empty corpus");
  ValidateHashBits(hash_bits);

  SparseIndex index;
  index.mode_ = mode;
  index.hash_bits_ = hash_bits;
  index.unit_ids_.reserve(units.size());
  for (const Document &doc : units) index.unit_ids_.push_back(doc.id);
  {
    std::vector<std::string> sorted = index.unit_ids_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InvalidArgument("duplicate unit id in corpus");
    }
  }

  std::vector<Posting> postings;
  if (mode == IndexMode::kDocument) {
    for (uint32_t u = 0; u < units.size(); ++u) {
      auto counts = CountSorted(HashedFeatures(Tokenize(units[u].text), hash_bits));
      for (const auto &[feature, count] : counts) {
        postings.push_back({feature, u, count});
      }
    }
  } else {
    std::vector<std::vector<std::pair<std::string, uint32_t>>> unit_terms;
    unit_terms.reserve(units.size());
    for (const Document &doc : units) {
      unit_terms.push_back(CountSorted(Tokenize(doc.text)));
      for (const auto &entry : unit_terms.back()) {
        index.vocabulary_.push_back(entry.first);
      }
    }
    std::sort(index.vocabulary_.begin(), index.vocabulary_.end());
    index.vocabulary_.erase(
        std::unique(index.vocabulary_.begin(), index.vocabulary_.end()),
        index.vocabulary_.end());
    std::unordered_map<std::string_view, uint64_t> term_id;
    term_id.reserve(index.vocabulary_.size());
    for (uint64_t i = 0; i < index.vocabulary_.size(); ++i) {
      term_id.emplace(index.vocabulary_[i], i);
    }
    for (uint32_t u = 0; u < unit_terms.size(); ++u) {
      for (const auto &[term, count] : unit_terms[u]) {
        postings.push_back({term_id.at(term), u, count});
      }
    }
  }

  std::sort(postings.begin(), postings.end(),
            [](const Posting &a, const Posting &b) {
              return std::tie(a.feature, a.unit) < std::tie(b.feature, b.unit);
            });

  const uint64_t n = units.size();
  index.posting_units_.reserve(postings.size());
  index.posting_weights_.reserve(postings.size());
  for (size_t i = 0; i < postings.size();) {
    size_t j = i;
    while (j < postings.size() && postings[j].feature == postings[i].feature) ++j;
    uint32_t df = static_cast<uint32_t>(j - i);
    double idf = InverseDocumentFrequency(n, df);
    index.features_.push_back(postings[i].feature);
    index.doc_freq_.push_back(df);
    index.idf_.push_back(idf);
    index.posting_offsets_.push_back(i);
    for (size_t k = i; k < j; ++k) {
      index.posting_units_.push_back(postings[k].unit);
      index.posting_weights_.push_back(static_cast<double>(postings[k].count) * idf);
    }
    i = j;
  }
  index.posting_offsets_.push_back(postings.size());
  index.FinishLayout();
  return index;
}

// Derives the tie-break ranks and unit norms from the stored postings. Norms
// accumulate squared weights in ascending feature order.
void SparseIndex::FinishLayout() {
  std::vector<uint32_t> order(unit_ids_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return unit_ids_[a] < unit_ids_[b];
  });
  id_rank_.assign(unit_ids_.size(), 0);
  for (uint32_t r = 0; r < order.size(); ++r) id_rank_[order[r]] = r;

  std::vector<double> sum_squares(unit_ids_.size(), 0.0);
  for (size_t p = 0; p < posting_units_.size(); ++p) {
    sum_squares[posting_units_[p]] += posting_weights_[p] * posting_weights_[p];
  }
  unit_norms_.resize(sum_squares.size());
  for (size_t u = 0; u < sum_squares.size(); ++u) {
    unit_norms_[u] = std::sqrt(sum_squares[u]);
  }
}

ptrdiff_t SparseIndex::FeatureSlot(uint64_t feature) const {
  auto it = std::lower_bound(features_.begin(), features_.end(), feature);
  if (it == features_.end() || *it != feature) return -1;
  return it - features_.begin();
}

uint32_t SparseIndex::DocumentFrequency(uint64_t feature) const {
  ptrdiff_t slot = FeatureSlot(feature);
  return slot < 0 ? 0 : doc_freq_[slot];
}

uint32_t SparseIndex::TermDocumentFrequency(std::string_view term) const {
  if (mode_ == IndexMode::kDocument) {
    return DocumentFrequency(HashFeature(term, hash_bits_));
  }
  auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), term);
  if (it == vocabulary_.end() || *it != term) return 0;
  return DocumentFrequency(static_cast<uint64_t>(it - vocabulary_.begin()));
}

std::vector<std::pair<size_t, uint32_t>> SparseIndex::QueryCounts(
    std::string_view question) const {
  std::vector<std::string> tokens = Tokenize(question);
  std::vector<uint64_t> keys;
  if (mode_ == IndexMode::kDocument) {
    keys = HashedFeatures(tokens, hash_bits_);
  } else {
    for (const std::string &token : tokens) {
      auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), token);
      if (it != vocabulary_.end() && *it == token) {
        keys.push_back(static_cast<uint64_t>(it - vocabulary_.begin()));
      }
    }
  }
  std::vector<std::pair<size_t, uint32_t>> counts;
  for (const auto &[key, count] : CountSorted(std::move(keys))) {
    ptrdiff_t slot = FeatureSlot(key);
    if (slot >= 0) counts.emplace_back(static_cast<size_t>(slot), count);
  }
  return counts;
}

SparseIndex::SparseVector SparseIndex::QueryVector(
    std::string_view question) const {
  SparseVector vec;
  for (const auto &[slot, count] : QueryCounts(question)) {
    vec.emplace_back(features_[slot], static_cast<double>(count) * idf_[slot]);
  }
  return vec;
}

SparseIndex::SparseVector SparseIndex::UnitVector(size_t unit) const {
  if (unit >= size()) throw InvalidArgument("unit out of range");
  SparseVector vec;
  for (size_t f = 0; f < features_.size(); ++f) {
    for (uint64_t p = posting_offsets_[f]; p < posting_offsets_[f + 1]; ++p) {
      if (posting_units_[p] == unit) {
        vec.emplace_back(features_[f], posting_weights_[p]);
        break;
      }
    }
  }
  return vec;
}

std::vector<double> SparseIndex::Score(std::string_view question) const {
  std::vector<double> scores(size(), 0.0);
  double query_sum_squares = 0.0;
  for (const auto &[slot, count] : QueryCounts(question)) {
    double weight = static_cast<double>(count) * idf_[slot];
    query_sum_squares += weight * weight;
    for (uint64_t p = posting_offsets_[slot]; p < posting_offsets_[slot + 1]; ++p) {
      scores[posting_units_[p]] += weight * posting_weights_[p];
    }
  }
  if (mode_ == IndexMode::kParagraph) {
    double query_norm = std::sqrt(query_sum_squares);
    for (size_t u = 0; u < scores.size(); ++u) {
      scores[u] = (query_norm == 0.0 || unit_norms_[u] == 0.0)
                      ? 0.0
                      : scores[u] / (query_norm * unit_norms_[u]);
    }
  }
  return scores;
}

ScoredCandidateList SparseIndex::Retrieve(std::string_view question, int tau,
                                          std::string query_id) const {
  if (tau < 1) throw InvalidArgument("tau must be at least 1");
  std::vector<double> scores = Score(question);
  std::vector<uint32_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  size_t keep = std::min<size_t>(static_cast<size_t>(tau), order.size());
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](uint32_t a, uint32_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return id_rank_[a] < id_rank_[b];
                    });

  ScoredCandidateList list;
  list.query_id = std::move(query_id);
  list.tau = tau;
  list.entries.reserve(keep);
  for (size_t i = 0; i < keep; ++i) {
    list.entries.push_back({unit_ids_[order[i]], scores[order[i]], 0.0});
  }
  NormalizeCandidateScores(list.entries);
  return list;
}

ScoredCandidateList RetrieveTopK(const SparseIndex &index, const Query &query,
                                 int tau) {
  return index.Retrieve(query.question, tau, query.id);
}

// Layout (little-endian):
//   magic "AIRINDEX", u32 version, u8 mode, u32 hash_bits,
//   u64 units, units x string id,
//   u64 vocabulary size, vocabulary x string,
//   u64 features, features x (u64 key, u32 df, f64 idf),
//   u64 postings, (features + 1) x u64 offset, postings x (u32 unit, f64 weight)
// Strings are u32 length + bytes.
std::string SparseIndex::Serialize() const {
  BinaryWriter w;
  w.PutBytes(kIndexMagic);
  w.PutU32(kFormatVersion);
  w.PutU8(static_cast<uint8_t>(mode_));
  w.PutU32(static_cast<uint32_t>(hash_bits_));
  w.PutU64(unit_ids_.size());
  for (const std::string &id : unit_ids_) w.PutString(id);
  w.PutU64(vocabulary_.size());
  for (const std::string &term : vocabulary_) w.PutString(term);
  w.PutU64(features_.size());
  for (size_t f = 0; f < features_.size(); ++f) {
    w.PutU64(features_[f]);
    w.PutU32(doc_freq_[f]);
    w.PutF64(idf_[f]);
  }
  w.PutU64(posting_units_.size());
  for (uint64_t offset : posting_offsets_) w.PutU64(offset);
  for (size_t p = 0; p < posting_units_.size(); ++p) {
    w.PutU32(posting_units_[p]);
    w.PutF64(posting_weights_[p]);
  }
  return w.buffer();
}

SparseIndex SparseIndex::Deserialize(std::string_view bytes) {
  BinaryReader r(bytes);
  if (bytes.size() < kIndexMagic.size() ||
      r.GetBytes(kIndexMagic.size()) != kIndexMagic) {
    throw FormatError("not an index file");
  }
  uint32_t version = r.GetU32();
  if (version != kFormatVersion) {
    throw FormatError("index format version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(kFormatVersion) + ")");
  }
  SparseIndex index;
  uint8_t mode = r.GetU8();
  if (mode > 1) throw FormatError("bad index mode tag");
  index.mode_ = static_cast<IndexMode>(mode);
  index.hash_bits_ = static_cast<int>(r.GetU32());
  if (index.hash_bits_ < kMinHashBits || index.hash_bits_ > kMaxHashBits) {
    throw FormatError("bad hash_bits in index file");
  }
  // Every length is bounded by the bytes left so a corrupt count cannot
  // trigger a huge allocation.
  auto checked_count = [&](uint64_t n) {
    if (n > bytes.size()) throw FormatError("corrupt length in index file");
    return static_cast<size_t>(n);
  };
  size_t units = checked_count(r.GetU64());
  if (units == 0) throw FormatError("index holds no units");
  for (size_t i = 0; i < units; ++i) index.unit_ids_.push_back(r.GetString());
  size_t vocab = checked_count(r.GetU64());
  for (size_t i = 0; i < vocab; ++i) index.vocabulary_.push_back(r.GetString());
  size_t features = checked_count(r.GetU64());
  for (size_t f = 0; f < features; ++f) {
    index.features_.push_back(r.GetU64());
    index.doc_freq_.push_back(r.GetU32());
    index.idf_.push_back(r.GetF64());
  }
  size_t postings = checked_count(r.GetU64());
  for (size_t f = 0; f <= features; ++f) {
    index.posting_offsets_.push_back(r.GetU64());
  }
  for (size_t p = 0; p < postings; ++p) {
    uint32_t unit = r.GetU32();
    if (unit >= units) throw FormatError("posting refers to unknown unit");
    index.posting_units_.push_back(unit);
    index.posting_weights_.push_back(r.GetF64());
  }
  if (!r.AtEnd()) throw FormatError("trailing bytes in index file");
  if (index.posting_offsets_.front() != 0 ||
      index.posting_offsets_.back() != postings ||
      !std::is_sorted(index.posting_offsets_.begin(),
                      index.posting_offsets_.end()) ||
      !std::is_sorted(index.features_.begin(), index.features_.end())) {
    throw FormatError("inconsistent posting layout in index file");
  }
  index.FinishLayout();
  return index;
}

void SparseIndex::Save(const std::filesystem::path &path) const {
  WriteFileAtomic(path, Serialize());
}

SparseIndex SparseIndex::Load(const std::filesystem::path &path) {
  std::string bytes = ReadFile(path);
  try {
    return Deserialize(bytes);
  } catch (const FormatError &e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace adaptive_ir
