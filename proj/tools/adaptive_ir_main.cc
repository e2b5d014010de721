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

// adaptive-ir: index, train, retrieve, eval, sweep and synth subcommands.
//
// Exit status: 0 when the requested artifact was written, 2 on usage, I/O or
// validation errors, 1 on anything unexpected.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "adaptive_ir/corpus.h"
#include "adaptive_ir/cutoff.h"
#include "adaptive_ir/error.h"
#include "adaptive_ir/evaluation.h"
#include "adaptive_ir/file_util.h"
#include "adaptive_ir/reader.h"
#include "adaptive_ir/retrieval.h"
#include "adaptive_ir/synthetic.h"
#include "adaptive_ir/text.h"

namespace air = adaptive_ir;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kUsageExit = 2;

struct Options {
  std::string corpus;
  std::string queries;
  std::string index;
  std::string model;
  std::string mode = "document";
  int bits = air::kDefaultHashBits;
  std::optional<int> tau;
  std::vector<std::string> cutoffs;
  double theta = 0.75;
  std::optional<int> offset_b;
  double lambda = air::kDefaultLambda;
  double delta = 0.5;
  uint64_t seed = 42;
  std::string grid;
  std::string out;
  std::string summary;
  std::string question;
  int replicates = 32;
  int threads = 1;
  air::OptimizerConfig optimizer;
  int synth_queries = 200;
  int synth_distractors = 20000;
};

air::Unit UnitFor(air::IndexMode mode) {
  return mode == air::IndexMode::kParagraph ? air::Unit::kParagraph
                                            : air::Unit::kDocument;
}

void RequireFlag(const std::string &value, const char *flag) {
  if (value.empty()) {
    throw air::InvalidArgument(std::string(flag) + " is required");
  }
}

void CheckBits(int bits) {
  if (bits < air::kMinHashBits || bits > air::kMaxHashBits) {
    throw air::InvalidArgument("--bits must lie in [" +
                               std::to_string(air::kMinHashBits) + ", " +
                               std::to_string(air::kMaxHashBits) + "], got " +
                               std::to_string(bits));
  }
}

void CheckReader(const Options &opt) {
  if (!(opt.delta >= 0.0) || !std::isfinite(opt.delta)) {
    throw air::InvalidArgument("--delta must be finite and >= 0");
  }
  if (opt.replicates < 1) throw air::InvalidArgument("--replicates must be >= 1");
  if (opt.threads < 1) throw air::InvalidArgument("--threads must be >= 1");
}

void CheckTau(int tau) {
  if (tau < 1) throw air::InvalidArgument("--tau must be >= 1");
}

std::vector<int64_t> ParseGrid(const std::string &text) {
  std::vector<int64_t> grid;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    size_t used = 0;
    int64_t size = 0;
    try {
      size = std::stoll(item, &used);
    } catch (const std::logic_error &) {
      used = 0;
    }
    if (item.empty() || used != item.size() || size < 1) {
      throw air::InvalidArgument("--grid entry \"" + item +
                                 "\" is not a positive integer");
    }
    grid.push_back(size);
  }
  if (grid.empty()) throw air::InvalidArgument("--grid is empty");
  return grid;
}

// Loads the --cutoff systems. Tau for threshold systems resolves afterwards,
// because it may depend on an ordinal model's tau.
struct SystemSpecs {
  std::vector<air::CutoffModel> models;
  int tau = 20;
};

SystemSpecs ResolveSystems(const Options &opt,
                           const std::vector<std::string> &defaults) {
  const std::vector<std::string> &specs = opt.cutoffs.empty() ? defaults : opt.cutoffs;
  SystemSpecs out;
  std::optional<int> ordinal_tau;
  bool any_threshold = false;
  for (const std::string &spec : specs) {
    air::CutoffModel model;
    if (spec == "threshold") {
      model = air::ThresholdCutoff{opt.theta, 0};
    } else {
      model = air::ParseCutoffSpec(spec, 1);
    }
    if (auto *ord = std::get_if<air::OrdinalCutoff>(&model)) {
      if (ordinal_tau && *ordinal_tau != ord->tau) {
        throw air::InvalidArgument("ordinal models disagree on tau (" +
                                   std::to_string(*ordinal_tau) + " vs " +
                                   std::to_string(ord->tau) + ")");
      }
      ordinal_tau = ord->tau;
      if (opt.offset_b) ord->b = *opt.offset_b;
    }
    if (std::holds_alternative<air::ThresholdCutoff>(model)) any_threshold = true;
    out.models.push_back(std::move(model));
  }
  if (opt.tau) {
    out.tau = *opt.tau;
  } else if (ordinal_tau) {
    out.tau = *ordinal_tau;
  } else {
    out.tau = any_threshold ? 15 : 20;
  }
  CheckTau(out.tau);
  for (air::CutoffModel &model : out.models) {
    if (auto *th = std::get_if<air::ThresholdCutoff>(&model)) th->tau = out.tau;
    if (auto *ord = std::get_if<air::OrdinalCutoff>(&model); ord && ord->tau != out.tau) {
      throw air::InvalidArgument("ordinal model has tau " + std::to_string(ord->tau) +
                                 " but --tau is " + std::to_string(out.tau));
    }
    air::ValidateCutoffModel(model);
  }
  return out;
}

json SystemsJson(const std::vector<air::CutoffModel> &models) {
  json labels = json::array();
  for (const air::CutoffModel &m : models) labels.push_back(air::SystemLabel(m));
  return labels;
}

std::string SummaryPath(const Options &opt) {
  if (!opt.summary.empty()) return opt.summary;
  fs::path p(opt.out);
  p.replace_extension(".summary.json");
  return p.string();
}

std::unordered_map<std::string, const air::Document *> DocMap(
    const std::vector<air::Document> &docs) {
  std::unordered_map<std::string, const air::Document *> map;
  map.reserve(docs.size());
  for (const air::Document &d : docs) map.emplace(d.id, &d);
  return map;
}

void EchoRegrets(const air::SweepReport &report) {
  for (const air::SystemResult &s : report.systems) {
    std::printf("%s total_regret=%s\n", s.label.c_str(),
                air::FormatDouble(s.total_regret).c_str());
  }
}

int RunIndex(const Options &opt) {
  RequireFlag(opt.corpus, "--corpus");
  RequireFlag(opt.out, "--out");
  air::IndexMode mode = air::ParseIndexMode(opt.mode);
  CheckBits(opt.bits);
  auto units = air::IngestCorpus(opt.corpus, UnitFor(mode));
  auto index = air::SparseIndex::Build(units, mode, opt.bits);
  index.Save(opt.out);
  std::printf("indexed %zu units mode=%s bits=%d features=%zu -> %s\n", index.size(),
              std::string(air::IndexModeName(mode)).c_str(), opt.bits,
              index.num_features(), opt.out.c_str());
  return 0;
}

int RunTrain(const Options &opt) {
  RequireFlag(opt.corpus, "--corpus");
  RequireFlag(opt.queries, "--queries");
  RequireFlag(opt.out, "--out");
  air::IndexMode mode = air::ParseIndexMode(opt.mode);
  CheckBits(opt.bits);
  const int tau = opt.tau.value_or(20);
  CheckTau(tau);
  const int b = opt.offset_b.value_or(1);
  if (b < 0) throw air::InvalidArgument("--offset-b must be >= 0");
  if (!(opt.lambda >= 0.0) || !std::isfinite(opt.lambda)) {
    throw air::InvalidArgument("--lambda must be finite and >= 0");
  }
  if (opt.optimizer.iterations < 1 || !(opt.optimizer.initial_step > 0.0)) {
    throw air::InvalidArgument("--iterations must be >= 1 and --step > 0");
  }

  auto docs = air::IngestCorpus(opt.corpus, UnitFor(mode));
  auto queries = air::IngestQueries(opt.queries);
  auto index = air::SparseIndex::Build(docs, mode, opt.bits);
  auto judged = air::RetrieveAndJudge(index, queries, tau, DocMap(docs));
  air::TrainingData data = air::BuildTrainingSet(judged, tau);
  if (data.used == 0) {
    throw air::InvalidArgument("no training query has a relevant document in its top " +
                               std::to_string(tau));
  }
  air::OrdinalCutoff model = air::FitOrdinal(data.set, opt.lambda, b, opt.optimizer);

  json file = json::parse(air::SerializeModel(model));
  file["training"] = {{"corpus", opt.corpus},
                      {"queries", opt.queries},
                      {"mode", std::string(air::IndexModeName(mode))},
                      {"bits", opt.bits},
                      {"tau", tau},
                      {"b", b},
                      {"lambda", opt.lambda},
                      {"iterations", opt.optimizer.iterations},
                      {"step", opt.optimizer.initial_step},
                      {"n_used", data.used},
                      {"n_excluded", data.excluded}};
  air::WriteFileAtomic(opt.out, file.dump(2) + "\n");
  std::printf("N_used=%d N_excluded=%d surrogate_loss=%s true_loss=%s -> %s\n",
              data.used, data.excluded, air::FormatDouble(model.surrogate_loss).c_str(),
              air::FormatDouble(model.true_loss).c_str(), opt.out.c_str());
  return 0;
}

int RunRetrieve(const Options &opt) {
  if (opt.index.empty() && opt.corpus.empty()) {
    throw air::InvalidArgument("--index or --corpus is required");
  }
  if (opt.question.empty() == opt.queries.empty()) {
    throw air::InvalidArgument("give exactly one of --question and --queries");
  }
  std::optional<air::CutoffModel> cutoff;
  int tau = opt.tau.value_or(20);
  if (!opt.cutoffs.empty()) {
    if (opt.cutoffs.size() > 1) throw air::InvalidArgument("retrieve takes one --cutoff");
    SystemSpecs systems = ResolveSystems(opt, {});
    cutoff = systems.models.front();
    tau = systems.tau;
  }
  CheckTau(tau);

  std::optional<air::SparseIndex> index;
  if (!opt.index.empty()) {
    index = air::SparseIndex::Load(opt.index);
  } else {
    air::IndexMode mode = air::ParseIndexMode(opt.mode);
    CheckBits(opt.bits);
    auto units = air::IngestCorpus(opt.corpus, UnitFor(mode));
    index = air::SparseIndex::Build(units, mode, opt.bits);
  }

  std::vector<air::Query> queries;
  if (!opt.question.empty()) {
    queries.push_back({"question", opt.question, {}});
  } else {
    queries = air::IngestQueries(opt.queries);
  }

  json config = {{"command", "retrieve"},
                 {"index", opt.index},
                 {"corpus", opt.index.empty() ? opt.corpus : ""},
                 {"mode", std::string(air::IndexModeName(index->mode()))},
                 {"bits", index->hash_bits()},
                 {"tau", tau},
                 {"cutoff", cutoff ? air::SystemLabel(*cutoff) : ""}};
  json results = json::array();
  for (const air::Query &q : queries) {
    air::JudgedRetrieval judged;
    judged.candidates = index->Retrieve(q.question, tau, q.id);
    judged.relevant.assign(judged.candidates.entries.size(), false);
    json entries = json::array();
    for (const air::Candidate &c : judged.candidates.entries) {
      entries.push_back({{"doc_id", c.doc_id},
                         {"raw_score", c.raw_score},
                         {"normalized_score", c.normalized_score}});
    }
    json result = {{"query_id", q.id}, {"candidates", entries}};
    if (cutoff) result["cutoff"] = air::CutoffForRetrieval(*cutoff, judged);
    results.push_back(std::move(result));
  }
  std::string text = json{{"config", config}, {"results", results}}.dump(2) + "\n";
  if (opt.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    air::WriteFileAtomic(opt.out, text);
    std::printf("retrieved %zu queries -> %s\n", queries.size(), opt.out.c_str());
  }
  return 0;
}

const std::vector<std::string> kDefaultSystems = {"fixed:1", "fixed:3", "fixed:5",
                                                  "fixed:10", "threshold"};

json ReportConfig(const Options &opt, const char *command, air::IndexMode mode,
                  const SystemSpecs &systems) {
  return {{"command", command},
          {"corpus", opt.corpus},
          {"queries", opt.queries},
          {"mode", std::string(air::IndexModeName(mode))},
          {"bits", opt.bits},
          {"tau", systems.tau},
          {"systems", SystemsJson(systems.models)},
          {"theta", opt.theta},
          {"delta", opt.delta},
          {"seed", opt.seed},
          {"replicates", opt.replicates}};
}

void WriteReport(const Options &opt, const air::SweepReport &report, const json &config) {
  const std::string config_text = config.dump();
  const std::string summary_path = SummaryPath(opt);
  air::WriteFileAtomic(opt.out, air::FormatReportCsv(report, config_text));
  air::WriteFileAtomic(summary_path, air::FormatReportSummary(report, config_text));
  EchoRegrets(report);
  std::printf("wrote %s and %s\n", opt.out.c_str(), summary_path.c_str());
}

int RunEval(const Options &opt) {
  RequireFlag(opt.corpus, "--corpus");
  RequireFlag(opt.queries, "--queries");
  RequireFlag(opt.out, "--out");
  air::IndexMode mode = air::ParseIndexMode(opt.mode);
  CheckBits(opt.bits);
  CheckReader(opt);
  SystemSpecs systems = ResolveSystems(opt, kDefaultSystems);

  auto docs = air::IngestCorpus(opt.corpus, UnitFor(mode));
  auto queries = air::IngestQueries(opt.queries);
  air::SparseIndex index = air::SparseIndex::Build(docs, mode, opt.bits);
  auto judged = air::RetrieveAndJudge(index, queries, systems.tau, DocMap(docs));

  air::SweepReport report;
  air::AppendSizeResults(report, static_cast<int64_t>(index.size()), judged,
                         systems.models, air::ReaderModel{opt.delta, opt.seed},
                         opt.replicates, systems.tau);
  air::FinishReport(report);
  WriteReport(opt, report, ReportConfig(opt, "eval", mode, systems));
  return 0;
}

int RunSweep(const Options &opt) {
  RequireFlag(opt.corpus, "--corpus");
  RequireFlag(opt.queries, "--queries");
  RequireFlag(opt.out, "--out");
  air::IndexMode mode = air::ParseIndexMode(opt.mode);
  CheckBits(opt.bits);
  CheckReader(opt);
  SystemSpecs systems = ResolveSystems(opt, kDefaultSystems);
  std::optional<std::vector<int64_t>> grid;
  if (!opt.grid.empty()) grid = ParseGrid(opt.grid);

  air::SweepInput input;
  input.queries = air::IngestQueries(opt.queries);
  std::vector<air::AnswerMatcher> matchers;
  matchers.reserve(input.queries.size());
  for (const air::Query &q : input.queries) matchers.emplace_back(q);
  for (air::Document &doc : air::IngestCorpus(opt.corpus, UnitFor(mode))) {
    const std::string text = air::NormalizeText(doc.text);
    bool relevant = false;
    for (const air::AnswerMatcher &m : matchers) {
      if (m.MatchesNormalized(text)) {
        relevant = true;
        break;
      }
    }
    (relevant ? input.relevant : input.distractors).push_back(std::move(doc));
  }

  air::SweepConfig config;
  config.grid = grid ? *grid
                     : air::DefaultGrid(input.relevant.size(), input.distractors.size());
  config.systems = systems.models;
  config.reader = {opt.delta, opt.seed};
  config.replicates = opt.replicates;
  config.tau = systems.tau;
  config.mode = mode;
  config.hash_bits = opt.bits;
  config.seed = opt.seed;
  config.threads = opt.threads;
  air::ValidateSweep(input, config);

  json header = ReportConfig(opt, "sweep", mode, systems);
  header["grid"] = config.grid;
  header["relevant_units"] = input.relevant.size();
  header["distractor_pool"] = input.distractors.size();
  air::SweepReport report = air::SweepCorpusGrowth(input, config);
  WriteReport(opt, report, header);
  return 0;
}

void WriteJsonl(const fs::path &path, const std::vector<air::Document> &docs) {
  std::ostringstream out;
  air::WriteCorpus(out, docs);
  air::WriteFileAtomic(path, out.str());
}

void WriteJsonl(const fs::path &path, const std::vector<air::Query> &queries) {
  std::ostringstream out;
  air::WriteQueries(out, queries);
  air::WriteFileAtomic(path, out.str());
}

int RunSynth(const Options &opt) {
  RequireFlag(opt.out, "--out");
  air::SyntheticConfig config;
  config.queries = opt.synth_queries;
  config.train_queries = opt.synth_queries;
  config.distractors = opt.synth_distractors;
  config.seed = opt.seed;
  if (config.queries < 1 || config.distractors < 1) {
    throw air::InvalidArgument("--num-queries and --num-distractors must be >= 1");
  }
  air::SyntheticBenchmark bench = air::GenerateSyntheticBenchmark(config);
  const fs::path dir(opt.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw air::IoError("cannot create directory " + dir.string());

  std::vector<air::Document> corpus = bench.relevant;
  corpus.insert(corpus.end(), bench.distractors.begin(), bench.distractors.end());
  std::vector<air::Document> train_corpus = bench.train_relevant;
  train_corpus.insert(train_corpus.end(), bench.distractors.begin(),
                      bench.distractors.end());
  WriteJsonl(dir / "corpus.jsonl", corpus);
  WriteJsonl(dir / "queries.jsonl", bench.queries);
  WriteJsonl(dir / "train_corpus.jsonl", train_corpus);
  WriteJsonl(dir / "train_queries.jsonl", bench.train_queries);
  std::printf("wrote %zu queries, %zu relevant and %zu distractor documents to %s\n",
              bench.queries.size(), bench.relevant.size(), bench.distractors.size(),
              dir.string().c_str());
  return 0;
}

void AddRetrievalFlags(CLI::App *cmd, Options &opt) {
  cmd->add_option("--mode", opt.mode, "document | paragraph")
      ->check(CLI::IsMember({"document", "paragraph"}))
      ->capture_default_str();
  cmd->add_option("--bits", opt.bits, "hash bits in document mode")->capture_default_str();
}

void AddReaderFlags(CLI::App *cmd, Options &opt) {
  cmd->add_option("--cutoff", opt.cutoffs,
                  "fixed:N | threshold[:THETA] | ordinal:PATH (repeatable)");
  cmd->add_option("--theta", opt.theta, "threshold for a bare 'threshold' system")
      ->capture_default_str();
  cmd->add_option("--offset-b", opt.offset_b, "override b of ordinal models");
  cmd->add_option("--delta", opt.delta, "reader relevance boost")->capture_default_str();
  cmd->add_option("--seed", opt.seed, "master seed")->capture_default_str();
  cmd->add_option("--replicates", opt.replicates, "reader replicates")
      ->capture_default_str();
  cmd->add_option("--summary", opt.summary, "summary JSON path");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Adaptive retrieval cutoffs for retriever-reader QA pipelines"};
  app.require_subcommand(1);
  Options opt;

  auto *index = app.add_subcommand("index", "build and save a sparse index");
  index->add_option("--corpus", opt.corpus, "corpus JSONL")->required();
  index->add_option("--out", opt.out, "index file")->required();
  AddRetrievalFlags(index, opt);

  auto *train = app.add_subcommand("train", "fit an ordinal cutoff model");
  train->add_option("--corpus", opt.corpus, "training corpus JSONL")->required();
  train->add_option("--queries", opt.queries, "training queries JSONL")->required();
  train->add_option("--out", opt.out, "model file")->required();
  train->add_option("--tau", opt.tau, "candidates per query (default 20)");
  train->add_option("--offset-b", opt.offset_b, "offset b (default 1)");
  train->add_option("--lambda", opt.lambda, "ridge weight")->capture_default_str();
  train->add_option("--iterations", opt.optimizer.iterations, "subgradient steps")
      ->capture_default_str();
  train->add_option("--step", opt.optimizer.initial_step, "initial step size")
      ->capture_default_str();
  AddRetrievalFlags(train, opt);

  auto *retrieve = app.add_subcommand("retrieve", "rank candidates for questions");
  retrieve->add_option("--index", opt.index, "index file");
  retrieve->add_option("--corpus", opt.corpus, "corpus JSONL (when no --index)");
  retrieve->add_option("--question", opt.question, "a single question");
  retrieve->add_option("--queries", opt.queries, "queries JSONL");
  retrieve->add_option("--tau", opt.tau, "candidates per query");
  retrieve->add_option("--cutoff", opt.cutoffs, "cutoff system to apply");
  retrieve->add_option("--theta", opt.theta, "threshold for a bare 'threshold'")
      ->capture_default_str();
  retrieve->add_option("--offset-b", opt.offset_b, "override b of an ordinal model");
  retrieve->add_option("--out", opt.out, "output JSON (default stdout)");
  AddRetrievalFlags(retrieve, opt);

  auto *eval = app.add_subcommand("eval", "evaluate cutoff systems on one corpus");
  eval->add_option("--corpus", opt.corpus, "corpus JSONL")->required();
  eval->add_option("--queries", opt.queries, "queries JSONL")->required();
  eval->add_option("--out", opt.out, "report CSV")->required();
  eval->add_option("--tau", opt.tau, "candidates per query");
  AddRetrievalFlags(eval, opt);
  AddReaderFlags(eval, opt);

  auto *sweep = app.add_subcommand("sweep", "evaluate systems on a growing corpus");
  sweep->add_option("--corpus", opt.corpus, "corpus JSONL")->required();
  sweep->add_option("--queries", opt.queries, "queries JSONL")->required();
  sweep->add_option("--out", opt.out, "report CSV")->required();
  sweep->add_option("--tau", opt.tau, "candidates per query");
  sweep->add_option("--grid", opt.grid, "comma-separated corpus sizes");
  sweep->add_option("--threads", opt.threads, "concurrent index builds")
      ->capture_default_str();
  AddRetrievalFlags(sweep, opt);
  AddReaderFlags(sweep, opt);

  auto *synth = app.add_subcommand("synth", "write a synthetic benchmark");
  synth->add_option("--out", opt.out, "output directory")->required();
  synth->add_option("--seed", opt.seed, "generator seed")->capture_default_str();
  synth->add_option("--num-queries", opt.synth_queries, "test and training queries")
      ->capture_default_str();
  synth->add_option("--num-distractors", opt.synth_distractors, "distractor pool size")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : kUsageExit;
  }

  try {
    if (index->parsed()) return RunIndex(opt);
    if (train->parsed()) return RunTrain(opt);
    if (retrieve->parsed()) return RunRetrieve(opt);
    if (eval->parsed()) return RunEval(opt);
    if (sweep->parsed()) return RunSweep(opt);
    if (synth->parsed()) return RunSynth(opt);
  } catch (const air::Error &e) {
    std::fprintf(stderr, "adaptive-ir: error: %s\n", e.what());
    return kUsageExit;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "adaptive-ir: internal error: %s\n", e.what());
    return 1;
  }
  return 1;
}
