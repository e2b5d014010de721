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

#include "adaptive_ir/corpus.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "adaptive_ir/error.h"
#include "adaptive_ir/text.h"
#include "json.hpp"

namespace adaptive_ir {
namespace {

using nlohmann::json;

std::string Where(std::string_view source, size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

const std::string &StringField(const json &record, const char *key,
                               std::string_view source, size_t line) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_string()) {
    throw FormatError(Where(source, line) + ": line " + std::to_string(line) +
                      " lacks string field \"" + key + "\"");
  }
  return it->get_ref<const std::string &>();
}

json ParseLine(const std::string &text, std::string_view source, size_t line) {
  json record = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (record.is_discarded() || !record.is_object()) {
    throw FormatError(Where(source, line) + ": malformed record on line " +
                      std::to_string(line));
  }
  return record;
}

bool IsBlank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

std::ifstream OpenInput(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

std::string_view UnitName(Unit unit) {
  return unit == Unit::kDocument ? "document" : "paragraph";
}

Unit ParseUnit(std::string_view name) {
  if (name == "document") return Unit::kDocument;
  if (name == "paragraph") return Unit::kParagraph;
  throw InvalidArgument("unknown unit mode \"" + std::string(name) +
                        "\" (expected document or paragraph)");
}

std::vector<std::string> SplitParagraphs(std::string_view text) {
  std::vector<std::string> paragraphs;
  std::string current;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (IsBlank(line)) {
      if (!current.empty()) paragraphs.push_back(std::move(current));
      current.clear();
    } else {
      if (!current.empty()) current.push_back('\n');
      current.append(line);
    }
    pos = end + 1;
  }
  if (!current.empty()) paragraphs.push_back(std::move(current));
  return paragraphs;
}

std::vector<Document> ParseCorpus(std::istream &in, Unit unit,
                                  std::string_view source_name) {
  std::vector<Document> docs;
  std::unordered_map<std::string, size_t> first_line;
  std::string text;
  size_t line = 0;

  auto emit = [&](Document doc) {
    auto [it, inserted] = first_line.emplace(doc.id, line);
    if (!inserted) {
      throw FormatError(Where(source_name, line) + ": duplicate id \"" +
                        doc.id + "\" on line " + std::to_string(line) +
                        " (first seen on line " + std::to_string(it->second) +
                        ")");
    }
    docs.push_back(std::move(doc));
  };

  while (std::getline(in, text)) {
    ++line;
    if (IsBlank(text)) continue;
    json record = ParseLine(text, source_name, line);
    Document doc{StringField(record, "id", source_name, line),
                 StringField(record, "title", source_name, line),
                 StringField(record, "text", source_name, line)};
    if (doc.id.empty()) {
      throw FormatError(Where(source_name, line) + ": empty id on line " +
                        std::to_string(line));
    }
    if (NormalizeText(doc.text).empty()) {
      throw FormatError(Where(source_name, line) + ": empty text on line " +
                        std::to_string(line));
    }
    if (unit == Unit::kDocument) {
      emit(std::move(doc));
      continue;
    }
    std::vector<std::string> paragraphs = SplitParagraphs(doc.text);
    for (size_t k = 0; k < paragraphs.size(); ++k) {
      emit(Document{doc.id + "#" + std::to_string(k), doc.title,
                    std::move(paragraphs[k])});
    }
  }
  return docs;
}

std::vector<Document> IngestCorpus(const std::filesystem::path &path,
                                   Unit unit) {
  std::ifstream in = OpenInput(path);
  return ParseCorpus(in, unit, path.string());
}

std::vector<Query> ParseQueries(std::istream &in,
                                std::string_view source_name) {
  std::vector<Query> queries;
  std::unordered_map<std::string, size_t> first_line;
  std::string text;
  size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (IsBlank(text)) continue;
    json record = ParseLine(text, source_name, line);
    Query query{StringField(record, "id", source_name, line),
                StringField(record, "question", source_name, line),
                {}};
    auto answers = record.find("answers");
    if (answers == record.end() || !answers->is_array() || answers->empty()) {
      throw FormatError(Where(source_name, line) + ": line " +
                        std::to_string(line) + " needs a non-empty answers list");
    }
    for (const json &answer : *answers) {
      if (!answer.is_string() ||
          NormalizeText(answer.get_ref<const std::string &>()).empty()) {
        throw FormatError(Where(source_name, line) + ": empty answer on line " +
                          std::to_string(line));
      }
      query.answers.push_back(answer.get<std::string>());
    }
    if (query.id.empty()) {
      throw FormatError(Where(source_name, line) + ": empty id on line " +
                        std::to_string(line));
    }
    auto [it, inserted] = first_line.emplace(query.id, line);
    if (!inserted) {
      throw FormatError(Where(source_name, line) + ": duplicate id \"" +
                        query.id + "\" on line " + std::to_string(line) +
                        " (first seen on line " + std::to_string(it->second) +
                        ")");
    }
    queries.push_back(std::move(query));
  }
  return queries;
}

std::vector<Query> IngestQueries(const std::filesystem::path &path) {
  std::ifstream in = OpenInput(path);
  return ParseQueries(in, path.string());
}

void WriteCorpus(std::ostream &out, std::span<const Document> docs) {
  for (const Document &doc : docs) {
    out << json{{"id", doc.id}, {"title", doc.title}, {"text", doc.text}}.dump()
        << '\n';
  }
}

void WriteQueries(std::ostream &out, std::span<const Query> queries) {
  for (const Query &query : queries) {
    out << json{{"id", query.id},
                {"question", query.question},
                {"answers", query.answers}}
               .dump()
        << '\n';
  }
}

AnswerMatcher::AnswerMatcher(const Query &query) {
  answers_.reserve(query.answers.size());
  for (const std::string &answer : query.answers) {
    std::string normalized = NormalizeText(answer);
    if (!normalized.empty()) answers_.push_back(std::move(normalized));
  }
}

bool AnswerMatcher::Matches(const Document &doc) const {
  return MatchesNormalized(NormalizeText(doc.text));
}

bool AnswerMatcher::MatchesNormalized(std::string_view normalized_text) const {
  for (const std::string &answer : answers_) {
    if (normalized_text.find(answer) != std::string_view::npos) return true;
  }
  return false;
}

bool LabelRelevance(const Document &doc, const Query &query) {
  return AnswerMatcher(query).Matches(doc);
}

}  // namespace adaptive_ir
