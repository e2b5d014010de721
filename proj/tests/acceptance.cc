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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Criteria 6-9 drive the adaptive-ir binary end to end
// on the seeded synthetic benchmark.

#include <sys/wait.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "adaptive_ir/cutoff.h"
#include "adaptive_ir/random.h"
#include "adaptive_ir/reader.h"
#include "adaptive_ir/retrieval.h"
#include "test_support.h"

#ifndef ADAPTIVE_IR_BINARY
#error "ADAPTIVE_IR_BINARY must name the CLI executable"
#endif

namespace air = adaptive_ir;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void Report(int id, bool pass, double seconds, const std::string &detail) {
  std::printf("%s criterion %d: %s (%.2f s)\n", pass ? "PASS" : "FAIL", id, detail.c_str(),
              seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char *format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

std::vector<double> RandomSimplex(std::mt19937_64 &rng, int tau) {
  std::exponential_distribution<double> e;
  std::vector<double> v(tau);
  double total = 0.0;
  for (double &x : v) total += (x = e(rng));
  for (double &x : v) x /= total;
  return v;
}

// 1. Threshold rule against a scan of every prefix.
void ThresholdExactness() {
  auto start = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    int tau = 1 + static_cast<int>(rng() % 25);
    auto s = RandomSimplex(rng, tau);
    double theta = std::max(unit(rng), 1e-12);
    int expected = 0;
    for (int k = 1; k <= tau; ++k) {
      double total = 0.0;
      for (int j = 0; j < k; ++j) total += s[j];
      if (total < theta) expected = k;
    }
    expected = std::clamp(expected, 1, tau);
    mismatches += air::ThresholdCutoffSize(s, theta) != expected;
  }
  double secs = Since(start);
  Report(1, mismatches == 0 && secs < 5.0, secs,
         Fmt("threshold rule vs prefix scan, 10000 instances, %.0f mismatches", mismatches));
}

// 2. Ordinal prediction algebra and monotonicity in the offset.
void OrdinalAlgebra() {
  auto start = Clock::now();
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> coef(-40.0, 40.0);
  int mismatches = 0, non_monotone = 0;
  for (int i = 0; i < 1000; ++i) {
    int tau = 1 + static_cast<int>(rng() % 25);
    auto s = RandomSimplex(rng, tau);
    air::OrdinalCutoff model;
    model.tau = tau;
    model.beta.resize(tau);
    for (double &x : model.beta) x = coef(rng);
    model.b = static_cast<int>(rng() % 6);
    double dot = 0.0;
    for (int j = 0; j < tau; ++j) dot += s[j] * model.beta[j];
    long long expected = std::clamp<long long>(
        static_cast<long long>(std::ceil(dot)) + model.b, 1, tau);
    int got = air::PredictCutoff(model, s);
    mismatches += got != expected;
    air::OrdinalCutoff higher = model;
    higher.b += 1 + static_cast<int>(rng() % 3);
    non_monotone += air::PredictCutoff(higher, s) < got;
  }
  double secs = Since(start);
  Report(2, mismatches == 0 && non_monotone == 0, secs,
         Fmt("ordinal prediction, 1000 triples, %.0f mismatches, %.0f monotonicity violations",
             mismatches, non_monotone));
}

// 3. Recovery of a known coefficient vector.
void RegressionRecovery() {
  auto start = Clock::now();
  const int rows = 500, tau = 20;
  const double lambda = 0.01;
  std::mt19937_64 rng(303);
  Eigen::VectorXd beta_star = Eigen::VectorXd::Zero(tau);
  beta_star(0) = 4.0;
  air::TrainingSet train = air::testing::RecoveryData(rng, rows, tau, beta_star);
  air::OrdinalCutoff first = air::FitOrdinal(train, lambda, 0);
  air::OrdinalCutoff second = air::FitOrdinal(train, lambda, 0);
  double secs = Since(start);

  Eigen::Map<const Eigen::VectorXd> beta(first.beta.data(), tau);
  double mae = 0.0;
  for (int i = 0; i < rows; ++i) {
    double dot = 0.0;
    for (int j = 0; j < tau; ++j) dot += train.x(i, j) * beta(j);
    mae += std::abs(std::ceil(dot) - train.y(i));
  }
  mae /= rows;
  double loss = air::testing::OracleRankLoss(train, beta, lambda);
  double bound = air::testing::OracleRankLoss(train, beta_star, lambda) + 0.1 * rows;
  bool identical = first.beta.size() == second.beta.size() &&
                   std::equal(first.beta.begin(), first.beta.end(), second.beta.begin(),
                              [](double a, double b) {
                                return std::bit_cast<uint64_t>(a) == std::bit_cast<uint64_t>(b);
                              });
  Report(3, mae <= 0.5 && loss <= bound && identical && secs < 30.0, secs,
         Fmt("recovery MAE %.4f (<= 0.5), loss %.3f (bound %.3f), bit-identical %.0f", mae,
             loss, bound, identical));
}

// 4. Sparse retrieval against the dense brute-force oracle.
void RetrievalOracle() {
  auto start = Clock::now();
  std::mt19937_64 rng(404);
  int mismatches = 0, checks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto docs = air::testing::RandomToyCorpus(rng);
    std::string q = air::testing::RandomToyQuestion(rng);
    int tau = 1 + static_cast<int>(rng() % 20);
    for (air::IndexMode mode : {air::IndexMode::kDocument, air::IndexMode::kParagraph}) {
      auto index = air::SparseIndex::Build(docs, mode);
      auto oracle = air::testing::OracleScores(docs, q, mode, air::kDefaultHashBits);
      std::vector<std::string> got;
      for (const auto &c : index.Retrieve(q, tau).entries) got.push_back(c.doc_id);
      mismatches += got != air::testing::OracleRanking(docs, oracle, tau);
      ++checks;
    }
  }
  Report(4, mismatches == 0, Since(start),
         Fmt("%.0f corpus/mode pairs vs dense oracle, %.0f ranking mismatches", checks,
             mismatches));
}

// 5. Simulated reader against the exact probability, 10^5 trials per cell.
void ReaderCalibration() {
  auto start = Clock::now();
  const int trials = 100000;
  double worst = 0.0;
  int exact_failures = 0, cells = 0;
  std::mt19937_64 placement(505);
  for (double delta : {0.0, 0.25, 0.5, 1.0}) {
    for (int n = 1; n <= 6; ++n) {
      for (int k = 0; k <= n; ++k) {
        double oracle = air::ExactMatchProbability(k, n, delta);
        if (delta == 0.0 && oracle != static_cast<double>(k) / n) ++exact_failures;
        air::ReaderModel reader{delta, 0x5eedULL + static_cast<uint64_t>(cells)};
        std::vector<int> slots(n);
        auto relevant = std::make_unique<bool[]>(n);
        int hits = 0;
        for (int t = 0; t < trials; ++t) {
          for (int i = 0; i < n; ++i) slots[i] = i;
          air::Shuffle(slots, placement);
          for (int i = 0; i < n; ++i) relevant[i] = false;
          for (int i = 0; i < k; ++i) relevant[slots[i]] = true;
          hits += air::SimulateRead(reader, "trial-" + std::to_string(t),
                                    {relevant.get(), static_cast<size_t>(n)})
                      .exact_match;
        }
        worst = std::max(worst, std::abs(static_cast<double>(hits) / trials - oracle));
        ++cells;
      }
    }
  }
  Report(5, worst <= 0.01 && exact_failures == 0, Since(start),
         Fmt("%.0f cells, max |empirical - oracle| = %.4f (<= 0.01), %.0f zero-boost "
             "cells differing from k/n",
             cells, worst, exact_failures));
}

int RunCli(const std::string &args, std::string *output = nullptr) {
  std::string command = std::string(ADAPTIVE_IR_BINARY) + " " + args + " 2>&1";
  FILE *pipe = popen(command.c_str(), "r");
  if (!pipe) return -1;
  std::string text;
  char buffer[4096];
  size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) text.append(buffer, got);
  int raw = pclose(pipe);
  if (output) *output = text;
  int status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  if (status != 0) std::fprintf(stderr, "command failed (%d): %s\n%s", status, args.c_str(), text.c_str());
  return status;
}

// Values parsed from a report CSV: [system][metric][corpus size].
using Table = std::map<std::string, std::map<std::string, std::map<int64_t, double>>>;

Table ParseCsv(const std::string &text) {
  Table table;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("system,", 0) == 0) continue;
    std::istringstream row(line);
    std::string system, size, metric, value;
    std::getline(row, system, ',');
    std::getline(row, size, ',');
    std::getline(row, metric, ',');
    std::getline(row, value, ',');
    table[system][metric][std::stoll(size)] = std::stod(value);
  }
  return table;
}

// Trapezoidal log-span regret, written independently of the library.
double WeightedRegret(const std::vector<int64_t> &sizes, const std::vector<double> &best,
                      const std::vector<double> &values) {
  const size_t m = sizes.size();
  std::vector<double> w(m);
  for (size_t j = 0; j < m; ++j) {
    double lo = std::log(static_cast<double>(sizes[j > 0 ? j - 1 : j]));
    double hi = std::log(static_cast<double>(sizes[j + 1 < m ? j + 1 : j]));
    w[j] = (hi - lo) / 2.0;
  }
  double total_w = 0.0, total = 0.0;
  for (double x : w) total_w += x;
  for (size_t j = 0; j < m; ++j) total += w[j] / total_w * (best[j] - values[j]);
  return total;
}

// 6-9. Synthetic benchmark through the CLI.
void Benchmark(const fs::path &work) {
  auto start = Clock::now();
  const std::string bin_dir = "'" + work.string() + "'";
  auto at = [&](const char *name) { return "'" + (work / name).string() + "'"; };
  const std::vector<int64_t> grid = {300, 1200, 4800, 19200};
  const std::string sweep_args =
      "sweep --corpus " + at("corpus.jsonl") + " --queries " + at("queries.jsonl") +
      " --cutoff fixed:1 --cutoff fixed:3 --cutoff fixed:5 --cutoff fixed:10"
      " --cutoff threshold:0.75 --cutoff ordinal:" + at("ordinal.json") +
      " --tau 20 --grid 300,1200,4800,19200 --delta 0.5 --replicates 32 --seed 42 --out ";

  bool ok = RunCli("synth --out " + bin_dir + " --num-queries 200 --num-distractors 20000"
                   " --seed 42") == 0;
  ok = ok && RunCli("train --corpus " + at("train_corpus.jsonl") + " --queries " +
                    at("train_queries.jsonl") + " --tau 20 --offset-b 1 --lambda 0.0001"
                    " --out " + at("ordinal.json")) == 0;
  ok = ok && RunCli(sweep_args + at("run1.csv")) == 0;
  double first_run = Since(start);
  ok = ok && RunCli(sweep_args + at("run2.csv") + " --threads 2") == 0;
  if (!ok) {
    for (int id = 6; id <= 9; ++id) Report(id, false, Since(start), "benchmark run failed");
    return;
  }
  const std::string csv1 = air::testing::ReadText(work / "run1.csv");
  const std::string csv2 = air::testing::ReadText(work / "run2.csv");
  Table table = ParseCsv(csv1);

  // 6: trade-off among the fixed top-n systems.
  const std::vector<std::pair<std::string, int>> fixed = {
      {"top-1", 1}, {"top-3", 3}, {"top-5", 5}, {"top-10", 10}};
  auto em = [&](const std::string &system, int64_t size) {
    return table[system]["exact_match"][size];
  };
  auto leader = [&](int64_t size, double *margin) {
    std::vector<std::pair<double, int>> ranked;
    for (const auto &[label, n] : fixed) ranked.push_back({em(label, size), n});
    std::sort(ranked.rbegin(), ranked.rend());
    *margin = ranked[0].first - ranked[1].first;
    return ranked[0].second;
  };
  double small_margin = 0.0, large_margin = 0.0;
  int small_leader = leader(grid.front(), &small_margin);
  int large_leader = leader(grid.back(), &large_margin);
  bool trade_off = small_leader == 1 && small_margin > 0.0 && large_leader >= 5 &&
                   large_margin > 0.0;
  Report(6, trade_off && first_run < 600.0, first_run,
         Fmt("top-1 EM %.4f leads at 300 by %.4f; top-%.0f leads at 19200 by %.4f",
             em("top-1", grid.front()), small_margin, large_leader, large_margin));

  // 7: regret ordering, recomputed from the CSV and cross-checked against
  // the summary file.
  std::vector<std::string> systems = {"top-1", "top-3", "top-5", "top-10",
                                      "threshold-0.75", "ordinal-b1"};
  std::vector<double> best(grid.size(), 0.0);
  for (const auto &s : systems) {
    for (size_t j = 0; j < grid.size(); ++j) best[j] = std::max(best[j], em(s, grid[j]));
  }
  std::map<std::string, double> regret;
  for (const auto &s : systems) {
    std::vector<double> values;
    for (int64_t size : grid) values.push_back(em(s, size));
    regret[s] = WeightedRegret(grid, best, values);
  }
  auto summary = nlohmann::json::parse(air::testing::ReadText(work / "run1.summary.json"));
  double summary_gap = 0.0;
  for (const auto &entry : summary["systems"]) {
    summary_gap = std::max(summary_gap, std::abs(entry["total_regret"].get<double>() -
                                                 regret[entry["system"].get<std::string>()]));
  }
  std::vector<double> fixed_regrets;
  for (const auto &[label, n] : fixed) fixed_regrets.push_back(regret[label]);
  std::sort(fixed_regrets.begin(), fixed_regrets.end());
  bool ordinal_ok = regret["ordinal-b1"] <= fixed_regrets.front();
  bool threshold_ok = regret["threshold-0.75"] <= fixed_regrets[fixed_regrets.size() - 2];
  Report(7, ordinal_ok && threshold_ok && summary_gap < 1e-9, Since(start),
         Fmt("regret ordinal %.4f <= best fixed %.4f; threshold %.4f <= second-worst fixed "
             "%.4f",
             regret["ordinal-b1"], fixed_regrets.front(), regret["threshold-0.75"],
             fixed_regrets[fixed_regrets.size() - 2]));

  // 8: metric monotonicity on every corpus of the grid.
  int violations = 0;
  const int tau = 20;
  for (int64_t size : grid) {
    for (int n = 1; n < tau; ++n) {
      for (const char *metric : {"recall@", "avg_relevant@"}) {
        double lo = table["retriever"][metric + std::to_string(n)][size];
        double hi = table["retriever"][metric + std::to_string(n + 1)][size];
        violations += hi < lo;
      }
    }
  }
  const std::string at_tau = "recall@" + std::to_string(tau);
  for (size_t j = 1; j < grid.size(); ++j) {
    violations += table["retriever"][at_tau][grid[j]] > table["retriever"][at_tau][grid[j - 1]];
  }
  Report(8, violations == 0 && table["retriever"][at_tau].size() == grid.size(), Since(start),
         Fmt("recall@20 %.3f -> %.3f across the grid, %.0f monotonicity violations",
             table["retriever"][at_tau][grid.front()], table["retriever"][at_tau][grid.back()],
             violations));

  // 9: byte-identical reruns, the second with two worker threads.
  Report(9, !csv1.empty() && csv1 == csv2, Since(start),
         Fmt("two sweeps with identical flags: %.0f bytes each, identical %.0f",
             static_cast<double>(csv1.size()), csv1 == csv2));
}

}  // namespace

int main() {
  ThresholdExactness();
  OrdinalAlgebra();
  RegressionRecovery();
  RetrievalOracle();
  ReaderCalibration();
  air::testing::TempDir work("acceptance");
  Benchmark(work.path());
  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
