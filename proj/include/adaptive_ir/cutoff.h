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

#ifndef ADAPTIVE_IR_CUTOFF_H_
#define ADAPTIVE_IR_CUTOFF_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "adaptive_ir/retrieval.h"

namespace adaptive_ir {

// Always pass the first n candidates.
struct FixedCutoff {
  int n = 1;

  bool operator==(const FixedCutoff &) const = default;
};

// Keep the longest prefix whose cumulative normalized score stays below theta.
struct ThresholdCutoff {
  double theta = 0.75;
  int tau = 15;

  bool operator==(const ThresholdCutoff &) const = default;
};

// Ordinal ridge regression: n = ceil(s . beta) + b, clamped to [1, tau].
struct OrdinalCutoff {
  std::vector<double> beta;
  int b = 1;
  int tau = 20;
  double lambda = 0.0;
  // Objective values recorded at the fitted beta; see FitOrdinal.
  double surrogate_loss = 0.0;
  double true_loss = 0.0;

  bool operator==(const OrdinalCutoff &) const = default;
};

using CutoffModel = std::variant<FixedCutoff, ThresholdCutoff, OrdinalCutoff>;

// Throws InvalidArgument when the model violates its invariants.
void ValidateCutoffModel(const CutoffModel &model);

// "top-<n>", "threshold-<theta>" or "ordinal-b<b>".
std::string SystemLabel(const CutoffModel &model);

// Largest tau the model accepts; Fixed models accept any list length.
std::optional<int> ModelTau(const CutoffModel &model);

// Tolerance on sum(scores) == 1.
inline constexpr double kNormalizationTolerance = 1e-9;

// Throws InvalidArgument unless scores are non-empty, each in [0, 1] and sum
// to one within kNormalizationTolerance.
void ValidateNormalizedScores(std::span<const double> scores);

// n = max { k : s_1 + ... + s_k < theta }, or 1 when even s_1 >= theta;
// the result lies in [1, len(scores)].
int ThresholdCutoffSize(std::span<const double> scores, double theta);

using RelevanceLabels = std::unordered_map<std::string, bool>;

// 1-based rank of the first relevant candidate, or nullopt if there is none.
// Throws InvalidArgument naming the first candidate without a label.
std::optional<int> FirstRelevantRank(const ScoredCandidateList &candidates,
                                     const RelevanceLabels &labels);

// Rows of x are normalized top-tau score vectors; y holds the 1-based rank of
// the first relevant document for each row.
struct TrainingSet {
  Eigen::MatrixXd x;
  Eigen::VectorXi y;

  int tau() const { return static_cast<int>(x.cols()); }
  int rows() const { return static_cast<int>(x.rows()); }
};

// Throws InvalidArgument on empty sets, non-finite values, rows that are not
// normalized, or targets outside [1, tau].
void ValidateTrainingSet(const TrainingSet &train);

struct OptimizerConfig {
  int iterations = 5000;
  // Step at iteration t is initial_step / sqrt(t).
  double initial_step = 10.0;
};

inline constexpr double kDefaultLambda = 1e-4;

// Smooth surrogate minimized during training:
//   J(beta) = mean_i |x_i . beta - (y_i - 1/2)| + lambda * ||beta||_2^2.
double SurrogateObjective(const TrainingSet &train,
                          const Eigen::VectorXd &beta, double lambda);

// The rank loss reported for model selection:
//   L(beta) = ||ceil(X beta) - y||_1 + lambda * ||beta||_2.
double OrdinalRankLoss(const TrainingSet &train, const Eigen::VectorXd &beta,
                       double lambda);

// Proximal subgradient descent on SurrogateObjective from beta = 0. Each step
// moves along the L1 subgradient and then applies the closed-form proximal map
// of the ridge term, which keeps the iteration stable for any lambda. Returns
// the iterate with the lowest surrogate objective. Single-threaded and
// deterministic.
OrdinalCutoff FitOrdinal(const TrainingSet &train, double lambda, int b,
                         const OptimizerConfig &config = {});

// Cutoff for one normalized score vector. Threshold and Ordinal models need
// exactly tau scores; Fixed models accept any length and return
// min(n, len(scores)).
int PredictCutoff(const CutoffModel &model, std::span<const double> scores);

// Ordinal prediction before clamping: ceil(s . beta) + b.
long long RawOrdinalPrediction(const OrdinalCutoff &model,
                               std::span<const double> scores);

std::string SerializeModel(const CutoffModel &model);
CutoffModel ParseModel(std::string_view text);
void SaveModel(const CutoffModel &model, const std::filesystem::path &path);
CutoffModel LoadModel(const std::filesystem::path &path);

inline constexpr int kModelFormatVersion = 1;

// Parses "fixed:N", "threshold:THETA" (uses tau) or "ordinal:PATH".
CutoffModel ParseCutoffSpec(std::string_view spec, int tau);

}  // namespace adaptive_ir

#endif  // ADAPTIVE_IR_CUTOFF_H_
