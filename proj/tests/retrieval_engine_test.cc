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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "adaptive_ir/error.h"
#include "adaptive_ir/retrieval.h"
#include "test_support.h"

namespace adaptive_ir {
namespace {

std::vector<Document> Docs(std::initializer_list<const char *> texts) {
  std::vector<Document> docs;
  int i = 0;
  for (const char *t : texts) docs.push_back({"d" + std::to_string(i++), "", t});
  return docs;
}

std::vector<std::string> Ids(const ScoredCandidateList &list) {
  std::vector<std::string> ids;
  for (const Candidate &c : list.entries) ids.push_back(c.doc_id);
  return ids;
}

double Sum(const std::vector<double> &v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST(IdfTest, HandComputedExamples) {
  EXPECT_EQ(InverseDocumentFrequency(3, 2), 0.0);  // ln(1.5 / 2.5) < 0
  EXPECT_EQ(InverseDocumentFrequency(1, 1), 0.0);  // ln(0.5 / 1.5) < 0
  EXPECT_DOUBLE_EQ(InverseDocumentFrequency(3, 1), std::log(2.5 / 1.5));
  EXPECT_DOUBLE_EQ(InverseDocumentFrequency(10, 1), std::log(9.5 / 1.5));
}

TEST(BuildTest, FlooredIdfZeroesCommonTerm) {
  auto docs = Docs({"a", "b", "a"});
  auto index = SparseIndex::Build(docs, IndexMode::kParagraph);
  EXPECT_EQ(index.TermDocumentFrequency("a"), 2u);
  EXPECT_EQ(index.TermDocumentFrequency("b"), 1u);
  for (const auto &[f, w] : index.UnitVector(0)) EXPECT_EQ(w, 0.0);
  ASSERT_EQ(index.UnitVector(1).size(), 1u);
  EXPECT_DOUBLE_EQ(index.UnitVector(1)[0].second, std::log(2.5 / 1.5));

  auto hashed = SparseIndex::Build(docs, IndexMode::kDocument);
  EXPECT_EQ(hashed.DocumentFrequency(HashFeature("a", kDefaultHashBits)), 2u);
}

TEST(BuildTest, SingleDocumentHasZeroWeightsAndUniformFallback) {
  auto docs = Docs({"only one document here"});
  for (IndexMode mode : {IndexMode::kDocument, IndexMode::kParagraph}) {
    auto index = SparseIndex::Build(docs, mode);
    EXPECT_EQ(index.size(), 1u);
    for (const auto &[f, w] : index.UnitVector(0)) EXPECT_EQ(w, 0.0);
    auto list = index.Retrieve("one document", 5);
    ASSERT_EQ(list.entries.size(), 1u);
    EXPECT_EQ(list.entries[0].raw_score, 0.0);
    EXPECT_EQ(list.entries[0].normalized_score, 1.0);
  }
}

TEST(BuildTest, RejectsBadArguments) {
  auto docs = Docs({"x"});
  EXPECT_THROW(SparseIndex::Build(docs, IndexMode::kDocument, 31), InvalidArgument);
  EXPECT_THROW(SparseIndex::Build(docs, IndexMode::kDocument, 7), InvalidArgument);
  EXPECT_NO_THROW(SparseIndex::Build(docs, IndexMode::kDocument, 8));
  EXPECT_NO_THROW(SparseIndex::Build(docs, IndexMode::kDocument, 30));
  std::vector<Document> none;
  EXPECT_THROW(SparseIndex::Build(none, IndexMode::kDocument), InvalidArgument);
  auto index = SparseIndex::Build(docs, IndexMode::kDocument);
  EXPECT_THROW(index.Retrieve("x", 0), InvalidArgument);
}

TEST(BuildTest, HashedFeaturesIncludeBigrams) {
  std::vector<std::string> toks = {"new", "york", "city"};
  auto feats = HashedFeatures(toks, 20);
  ASSERT_EQ(feats.size(), 5u);
  const uint64_t mask = (1u << 20) - 1;
  EXPECT_EQ(feats[0], testing::OracleFnv1a("new") & mask);
  EXPECT_NE(std::find(feats.begin(), feats.end(), testing::OracleFnv1a("new york") & mask),
            feats.end());
  EXPECT_NE(std::find(feats.begin(), feats.end(), testing::OracleFnv1a("york city") & mask),
            feats.end());
}

TEST(ScoreTest, UniqueTermGivesStrictMaximum) {
  auto docs = Docs({"apple banana cherry", "banana cherry date", "cherry date elder"});
  for (IndexMode mode : {IndexMode::kDocument, IndexMode::kParagraph}) {
    auto index = SparseIndex::Build(docs, mode);
    auto scores = index.Score("apple apple apple");
    auto oracle = testing::OracleScores(docs, "apple apple apple", mode, kDefaultHashBits);
    EXPECT_EQ(scores, oracle);
    EXPECT_GT(scores[0], 0.0);
    EXPECT_GT(scores[0], scores[1]);
    EXPECT_GT(scores[0], scores[2]);
  }
}

TEST(ScoreTest, NoOverlapGivesZeros) {
  auto docs = Docs({"apple banana", "cherry date", "elder fig"});
  for (IndexMode mode : {IndexMode::kDocument, IndexMode::kParagraph}) {
    auto index = SparseIndex::Build(docs, mode);
    for (double s : index.Score("zebra yak")) EXPECT_EQ(s, 0.0);
    for (double s : index.Score("")) EXPECT_EQ(s, 0.0);
    auto list = index.Retrieve("zebra", 4);
    ASSERT_EQ(list.entries.size(), 3u);
    for (const Candidate &c : list.entries) EXPECT_DOUBLE_EQ(c.normalized_score, 1.0 / 3);
    EXPECT_EQ(Ids(list), (std::vector<std::string>{"d0", "d1", "d2"}));
  }
}

TEST(ScoreTest, ParagraphCosineOfIdenticalTextIsOne) {
  auto docs = Docs({"the quick brown fox", "lazy dog sleeps", "brown dog barks loudly"});
  auto index = SparseIndex::Build(docs, IndexMode::kParagraph);
  auto scores = index.Score("lazy dog sleeps");
  EXPECT_NEAR(scores[1], 1.0, 1e-12);
  for (double s : scores) EXPECT_LE(s, 1.0 + 1e-12);
}

TEST(ScoreTest, ScoresAreNonNegative) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    auto docs = testing::RandomToyCorpus(rng);
    std::string q = testing::RandomToyQuestion(rng);
    for (IndexMode mode : {IndexMode::kDocument, IndexMode::kParagraph}) {
      for (double s : SparseIndex::Build(docs, mode).Score(q)) EXPECT_GE(s, 0.0);
    }
  }
}

TEST(NormalizeTest, Examples) {
  std::vector<Candidate> entries = {{"a", 2.0, 0}, {"b", 1.0, 0}, {"c", 1.0, 0}};
  NormalizeCandidateScores(entries);
  EXPECT_EQ(entries[0].normalized_score, 0.5);
  EXPECT_EQ(entries[1].normalized_score, 0.25);
  EXPECT_EQ(entries[2].normalized_score, 0.25);

  std::vector<Candidate> zeros(4);
  NormalizeCandidateScores(zeros);
  for (const Candidate &c : zeros) EXPECT_EQ(c.normalized_score, 0.25);
}

TEST(RetrieveTest, LengthIsMinOfTauAndCorpus) {
  auto docs = Docs({"a b", "b c", "c d", "d e", "e f"});
  auto index = SparseIndex::Build(docs, IndexMode::kDocument);
  EXPECT_EQ(index.Retrieve("b", 20).entries.size(), 5u);
  EXPECT_EQ(index.Retrieve("b", 3).entries.size(), 3u);
  auto list = RetrieveTopK(index, Query{"q7", "b", {"x"}}, 2);
  EXPECT_EQ(list.query_id, "q7");
  EXPECT_EQ(list.tau, 2);
}

// Dense brute-force oracle: same ranking and bit-identical raw scores.
TEST(RetrieveTest, MatchesDenseOracleOnRandomCorpora) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 100; ++trial) {
    auto docs = testing::RandomToyCorpus(rng);
    std::string q = testing::RandomToyQuestion(rng);
    int tau = 1 + static_cast<int>(rng() % 25);
    for (IndexMode mode : {IndexMode::kDocument, IndexMode::kParagraph}) {
      int bits = mode == IndexMode::kDocument ? 8 + static_cast<int>(rng() % 3) * 8 : 24;
      auto index = SparseIndex::Build(docs, mode, bits);
      auto oracle = testing::OracleScores(docs, q, mode, bits);
      EXPECT_EQ(index.Score(q), oracle) << "trial " << trial;
      auto list = index.Retrieve(q, tau);
      EXPECT_EQ(Ids(list), testing::OracleRanking(docs, oracle, tau)) << "trial " << trial;
    }
  }
}

TEST(RetrieveTest, PrefixContainmentAndNormalization) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    auto docs = testing::RandomToyCorpus(rng);
    std::string q = testing::RandomToyQuestion(rng);
    for (IndexMode mode : {IndexMode::kDocument, IndexMode::kParagraph}) {
      auto index = SparseIndex::Build(docs, mode);
      auto full = index.Retrieve(q, 20);
      EXPECT_NEAR(Sum(full.NormalizedScores()), 1.0, 1e-9);
      for (int n = 1; n <= 20; ++n) {
        auto top = index.Retrieve(q, n);
        EXPECT_NEAR(Sum(top.NormalizedScores()), 1.0, 1e-9);
        for (double s : top.NormalizedScores()) {
          EXPECT_GE(s, 0.0);
          EXPECT_LE(s, 1.0);
        }
        auto prefix = Ids(full);
        prefix.resize(std::min<size_t>(n, prefix.size()));
        EXPECT_EQ(Ids(top), prefix);
      }
    }
  }
}

// Building from a permuted corpus yields the same scores per id and the same
// ranking: the index does not depend on input order.
TEST(RetrieveTest, CanonicalUnderInputOrder) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    auto docs = testing::RandomToyCorpus(rng);
    auto shuffled = docs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::string q = testing::RandomToyQuestion(rng);
    for (IndexMode mode : {IndexMode::kDocument, IndexMode::kParagraph}) {
      auto a = SparseIndex::Build(docs, mode).Retrieve(q, 20);
      auto b = SparseIndex::Build(shuffled, mode).Retrieve(q, 20);
      EXPECT_EQ(a, b);
    }
  }
}

TEST(PersistTest, RoundTripPreservesRetrieval) {
  testing::TempDir dir("index");
  std::mt19937_64 rng(12);
  auto docs = testing::RandomToyCorpus(rng);
  for (IndexMode mode : {IndexMode::kDocument, IndexMode::kParagraph}) {
    auto index = SparseIndex::Build(docs, mode, 16);
    index.Save(dir / "i.bin");
    auto loaded = SparseIndex::Load(dir / "i.bin");
    EXPECT_EQ(loaded.mode(), mode);
    EXPECT_EQ(loaded.hash_bits(), 16);
    EXPECT_EQ(loaded.unit_ids(), index.unit_ids());
    EXPECT_EQ(loaded.Serialize(), index.Serialize());
    for (int t = 0; t < 10; ++t) {
      std::string q = testing::RandomToyQuestion(rng);
      EXPECT_EQ(loaded.Retrieve(q, 7), index.Retrieve(q, 7));
    }
  }
}

TEST(PersistTest, RejectsCorruptFiles) {
  auto index = SparseIndex::Build(Docs({"a b c", "c d"}), IndexMode::kDocument);
  std::string bytes = index.Serialize();

  std::string bad_version = bytes;
  bad_version[8] = static_cast<char>(bad_version[8] + 1);
  EXPECT_THROW(SparseIndex::Deserialize(bad_version), FormatError);
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(SparseIndex::Deserialize(bad_magic), FormatError);
  for (size_t cut : {size_t{0}, size_t{5}, bytes.size() / 2, bytes.size() - 1}) {
    EXPECT_THROW(SparseIndex::Deserialize(bytes.substr(0, cut)), FormatError) << cut;
  }
  EXPECT_THROW(SparseIndex::Deserialize(bytes + "x"), FormatError);
  EXPECT_THROW(SparseIndex::Load("/nonexistent/index.bin"), IoError);
}

}  // namespace
}  // namespace adaptive_ir
