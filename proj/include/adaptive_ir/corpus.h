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

#ifndef ADAPTIVE_IR_CORPUS_H_
#define ADAPTIVE_IR_CORPUS_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adaptive_ir {

// A retrievable unit of text. In paragraph mode each paragraph of a source
// record becomes its own Document with id "<record id>#<k>".
struct Document {
  std::string id;
  std::string title;
  std::string text;

  bool operator==(const Document &) const = default;
};

struct Query {
  std::string id;
  std::string question;
  std::vector<std::string> answers;

  bool operator==(const Query &) const = default;
};

enum class Unit { kDocument, kParagraph };

std::string_view UnitName(Unit unit);
Unit ParseUnit(std::string_view name);

// Reads one JSON record per line: {"id": ..., "title": ..., "text": ...}.
// Empty lines are skipped. Errors name the 1-based line number of the
// offending record, and duplicate ids are reported with both.
std::vector<Document> ParseCorpus(std::istream &in, Unit unit,
                                  std::string_view source_name = "<stream>");
std::vector<Document> IngestCorpus(const std::filesystem::path &path,
                                   Unit unit);

// Reads one JSON record per line: {"id": ..., "question": ...,
// "answers": [...]}.
std::vector<Query> ParseQueries(std::istream &in,
                                std::string_view source_name = "<stream>");
std::vector<Query> IngestQueries(const std::filesystem::path &path);

void WriteCorpus(std::ostream &out, std::span<const Document> docs);
void WriteQueries(std::ostream &out, std::span<const Query> queries);

// Paragraphs are maximal groups of non-blank lines; a blank line is one that
// holds only whitespace.
std::vector<std::string> SplitParagraphs(std::string_view text);

// Distant-supervision relevance: the normalized text contains some
// normalized gold answer as a substring.
bool LabelRelevance(const Document &doc, const Query &query);

// Same rule as LabelRelevance with the answers normalized once up front.
class AnswerMatcher {
 public:
  explicit AnswerMatcher(const Query &query);

  bool Matches(const Document &doc) const;
  bool MatchesNormalized(std::string_view normalized_text) const;

 private:
  std::vector<std::string> answers_;
};

}  // namespace adaptive_ir

#endif  // ADAPTIVE_IR_CORPUS_H_
