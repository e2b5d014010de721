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

#include "adaptive_ir/cutoff.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adaptive_ir/error.h"
#include "adaptive_ir/file_util.h"
#include "json.hpp"

namespace adaptive_ir {
namespace {

using nlohmann::json;

constexpr std::string_view kModelFormat = "adaptive-ir-cutoff-model";

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void ValidateTheta(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw InvalidArgument("theta must lie in (0, 1], got " + FormatDouble(theta));
  }
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

template <typename T>
T Require(const json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw FormatError(std::string("model file lacks field \"") + key + "\"");
  }
  try {
    return it->get<T>();
  } catch (const json::exception &) {
    throw FormatError(std::string("model field \"") + key + "\" has wrong type");
  }
}

}  // namespace

void ValidateCutoffModel(const CutoffModel &model) {
  std::visit(
      Overloaded{
          [](const FixedCutoff &m) {
            if (m.n < 1) throw InvalidArgument("fixed cutoff n must be >= 1");
          },
          [](const ThresholdCutoff &m) {
            ValidateTheta(m.theta);
            if (m.tau < 1) throw InvalidArgument("tau must be >= 1");
          },
          [](const OrdinalCutoff &m) {
            if (m.tau < 1) throw InvalidArgument("tau must be >= 1");
            if (static_cast<int>(m.beta.size()) != m.tau) {
              throw InvalidArgument("ordinal beta has length " +
                                    std::to_string(m.beta.size()) +
                                    " but tau is " + std::to_string(m.tau));
            }
            if (m.b < 0) throw InvalidArgument("offset b must be >= 0");
            if (!(m.lambda >= 0.0) || !std::isfinite(m.lambda)) {
              throw InvalidArgument("lambda must be finite and >= 0");
            }
            for (double v : m.beta) {
              if (!std::isfinite(v)) throw InvalidArgument("non-finite beta");
            }
          }},
      model);
}

std::string SystemLabel(const CutoffModel &model) {
  return std::visit(
      Overloaded{
          [](const FixedCutoff &m) { return "top-" + std::to_string(m.n); },
          [](const ThresholdCutoff &m) {
            return "threshold-" + FormatDouble(m.theta);
          },
          [](const OrdinalCutoff &m) { return "ordinal-b" + std::to_string(m.b); }},
      model);
}

std::optional<int> ModelTau(const CutoffModel &model) {
  return std::visit(
      Overloaded{[](const FixedCutoff &) -> std::optional<int> { return {}; },
                 [](const ThresholdCutoff &m) -> std::optional<int> { return m.tau; },
                 [](const OrdinalCutoff &m) -> std::optional<int> { return m.tau; }},
      model);
}

void ValidateNormalizedScores(std::span<const double> scores) {
  if (scores.empty()) throw InvalidArgument("score vector is empty");
  double total = 0.0;
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw InvalidArgument("normalized score out of [0, 1]: " + FormatDouble(s));
    }
    total += s;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw InvalidArgument("scores are not normalized (sum " + FormatDouble(total) +
                          ")");
  }
}

int ThresholdCutoffSize(std::span<const double> scores, double theta) {
  ValidateTheta(theta);
  ValidateNormalizedScores(scores);
  int best = 0;
  double cumulative = 0.0;
  for (size_t k = 0; k < scores.size(); ++k) {
    cumulative += scores[k];
    if (cumulative < theta) best = static_cast<int>(k) + 1;
  }
  return std::clamp(best, 1, static_cast<int>(scores.size()));
}

std::optional<int> FirstRelevantRank(const ScoredCandidateList &candidates,
                                     const RelevanceLabels &labels) {
  std::optional<int> first;
  for (size_t i = 0; i < candidates.entries.size(); ++i) {
    const std::string &id = candidates.entries[i].doc_id;
    auto it = labels.find(id);
    if (it == labels.end()) {
      throw InvalidArgument("no relevance label for document \"" + id + "\"");
    }
    if (it->second && !first) first = static_cast<int>(i) + 1;
  }
  return first;
}

void ValidateTrainingSet(const TrainingSet &train) {
  if (train.rows() == 0) throw InvalidArgument("training set is empty");
  if (train.tau() == 0) throw InvalidArgument("training rows have no scores");
  if (train.y.size() != train.x.rows()) {
    throw InvalidArgument("training targets and rows differ in count");
  }
  if (!train.x.allFinite()) throw InvalidArgument("non-finite training score");
  for (int i = 0; i < train.rows(); ++i) {
    double total = train.x.row(i).sum();
    if (std::abs(total - 1.0) > kNormalizationTolerance ||
        (train.x.row(i).array() < 0.0).any()) {
      throw InvalidArgument("training row " + std::to_string(i) +
                            " is not a normalized score vector");
    }
    if (train.y(i) < 1 || train.y(i) > train.tau()) {
      throw InvalidArgument("training target " + std::to_string(train.y(i)) +
                            " outside [1, tau]");
    }
  }
}

double SurrogateObjective(const TrainingSet &train, const Eigen::VectorXd &beta,
                          double lambda) {
  Eigen::VectorXd target = train.y.cast<double>().array() - 0.5;
  Eigen::VectorXd residual = train.x * beta - target;
  return residual.cwiseAbs().mean() + lambda * beta.squaredNorm();
}

double OrdinalRankLoss(const TrainingSet &train, const Eigen::VectorXd &beta,
                       double lambda) {
  double l1 = 0.0;
  std::vector<double> row(train.tau());
  for (int i = 0; i < train.rows(); ++i) {
    for (int j = 0; j < train.tau(); ++j) row[j] = train.x(i, j);
    double predicted = std::ceil(Dot(row, std::span(beta.data(), beta.size())));
    l1 += std::abs(predicted - static_cast<double>(train.y(i)));
  }
  return l1 + lambda * beta.norm();
}

OrdinalCutoff FitOrdinal(const TrainingSet &train, double lambda, int b,
                         const OptimizerConfig &config) {
  ValidateTrainingSet(train);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("lambda must be finite and >= 0");
  }
  if (b < 0) throw InvalidArgument("offset b must be >= 0");
  if (config.iterations < 1 || !(config.initial_step > 0.0)) {
    throw InvalidArgument("optimizer needs iterations >= 1 and a positive step");
  }

  const Eigen::MatrixXd &x = train.x;
  const double rows = static_cast<double>(train.rows());
  Eigen::VectorXd target = train.y.cast<double>().array() - 0.5;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(train.tau());
  Eigen::VectorXd best = beta;
  double best_objective = SurrogateObjective(train, beta, lambda);

  for (int t = 1; t <= config.iterations; ++t) {
    Eigen::VectorXd residual = x * beta - target;
    Eigen::VectorXd sign = residual.unaryExpr(
        [](double r) { return r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0); });
    Eigen::VectorXd gradient = x.transpose() * sign / rows;
    double step = config.initial_step / std::sqrt(static_cast<double>(t));
    beta = (beta - step * gradient) / (1.0 + 2.0 * step * lambda);

    double objective = SurrogateObjective(train, beta, lambda);
    if (objective < best_objective) {
      best_objective = objective;
      best = beta;
    }
  }

  OrdinalCutoff model;
  model.beta.assign(best.data(), best.data() + best.size());
  model.b = b;
  model.tau = train.tau();
  model.lambda = lambda;
  model.surrogate_loss = best_objective;
  model.true_loss = OrdinalRankLoss(train, best, lambda);
  return model;
}

long long RawOrdinalPrediction(const OrdinalCutoff &model,
                               std::span<const double> scores) {
  if (scores.size() != model.beta.size()) {
    throw InvalidArgument("score vector has length " +
                          std::to_string(scores.size()) + " but model tau is " +
                          std::to_string(model.tau));
  }
  double raw = std::ceil(Dot(scores, model.beta));
  // Keep absurd coefficients from overflowing the integer conversion.
  raw = std::clamp(raw, -1e15, 1e15);
  return static_cast<long long>(raw) + model.b;
}

int PredictCutoff(const CutoffModel &model, std::span<const double> scores) {
  return std::visit(
      Overloaded{
          [&](const FixedCutoff &m) {
            if (scores.empty()) throw InvalidArgument("score vector is empty");
            return std::min(m.n, static_cast<int>(scores.size()));
          },
          [&](const ThresholdCutoff &m) {
            if (static_cast<int>(scores.size()) != m.tau) {
              throw InvalidArgument("score vector has length " +
                                    std::to_string(scores.size()) +
                                    " but model tau is " + std::to_string(m.tau));
            }
            return ThresholdCutoffSize(scores, m.theta);
          },
          [&](const OrdinalCutoff &m) {
            long long raw = RawOrdinalPrediction(m, scores);
            ValidateNormalizedScores(scores);
            return static_cast<int>(
                std::clamp<long long>(raw, 1, static_cast<long long>(m.tau)));
          }},
      model);
}

std::string SerializeModel(const CutoffModel &model) {
  ValidateCutoffModel(model);
  json j;
  j["format"] = kModelFormat;
  j["version"] = kModelFormatVersion;
  std::visit(Overloaded{[&](const FixedCutoff &m) {
                          j["type"] = "fixed";
                          j["n"] = m.n;
                        },
                        [&](const ThresholdCutoff &m) {
                          j["type"] = "threshold";
                          j["tau"] = m.tau;
                          j["theta"] = m.theta;
                        },
                        [&](const OrdinalCutoff &m) {
                          j["type"] = "ordinal";
                          j["tau"] = m.tau;
                          j["b"] = m.b;
                          j["lambda"] = m.lambda;
                          j["beta"] = m.beta;
                          j["surrogate_loss"] = m.surrogate_loss;
                          j["true_loss"] = m.true_loss;
                        }},
             model);
  return j.dump(2) + "\n";
}

CutoffModel ParseModel(std::string_view text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw FormatError("model file is not a JSON object");
  }
  if (Require<std::string>(j, "format") != kModelFormat) {
    throw FormatError("not a cutoff model file");
  }
  int version = Require<int>(j, "version");
  if (version != kModelFormatVersion) {
    throw FormatError("model format version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(kModelFormatVersion) + ")");
  }
  std::string type = Require<std::string>(j, "type");
  CutoffModel model;
  if (type == "fixed") {
    model = FixedCutoff{Require<int>(j, "n")};
  } else if (type == "threshold") {
    model = ThresholdCutoff{Require<double>(j, "theta"), Require<int>(j, "tau")};
  } else if (type == "ordinal") {
    OrdinalCutoff m;
    m.tau = Require<int>(j, "tau");
    m.b = Require<int>(j, "b");
    m.lambda = Require<double>(j, "lambda");
    m.beta = Require<std::vector<double>>(j, "beta");
    m.surrogate_loss = Require<double>(j, "surrogate_loss");
    m.true_loss = Require<double>(j, "true_loss");
    model = std::move(m);
  } else {
    throw FormatError("unknown model type \"" + type + "\"");
  }
  try {
    ValidateCutoffModel(model);
  } catch (const InvalidArgument &e) {
    throw FormatError(std::string("invalid model: ") + e.what());
  }
  return model;
}

void SaveModel(const CutoffModel &model, const std::filesystem::path &path) {
  WriteFileAtomic(path, SerializeModel(model));
}

CutoffModel LoadModel(const std::filesystem::path &path) {
  std::string text = ReadFile(path);
  try {
    return ParseModel(text);
  } catch (const FormatError &e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

CutoffModel ParseCutoffSpec(std::string_view spec, int tau) {
  size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument("cutoff spec \"" + std::string(spec) +
                          "\" must look like fixed:N, threshold:THETA or "
                          "ordinal:PATH");
  }
  std::string kind(spec.substr(0, colon));
  std::string arg(spec.substr(colon + 1));
  CutoffModel model;
  try {
    if (kind == "fixed") {
      size_t used = 0;
      int n = std::stoi(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
      model = FixedCutoff{n};
    } else if (kind == "threshold") {
      size_t used = 0;
      double theta = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
      model = ThresholdCutoff{theta, tau};
    } else if (kind == "ordinal") {
      return LoadModel(arg);
    } else {
      throw InvalidArgument("unknown cutoff kind \"" + kind + "\"");
    }
  } catch (const std::logic_error &) {
    throw InvalidArgument("bad number in cutoff spec \"" + std::string(spec) + "\"");
  }
  ValidateCutoffModel(model);
  return model;
}

}  // namespace adaptive_ir
