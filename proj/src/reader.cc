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

#include "adaptive_ir/reader.h"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "adaptive_ir/error.h"
#include "adaptive_ir/text.h"

namespace adaptive_ir {

uint64_t QueryStreamSeed(uint64_t master_seed, std::string_view query_id) {
  return Mix64(master_seed ^ Mix64(Fnv1a64(query_id)));
}

uint64_t ReplicateSeed(uint64_t master_seed, uint64_t replicate) {
  return Mix64(master_seed ^ Mix64(replicate + 1));
}

ReadOutcome SimulateRead(const ReaderModel &reader, std::string_view query_id,
                         std::span<const bool> relevant) {
  if (relevant.empty()) throw InvalidArgument("reader needs at least one document");
  if (!(reader.delta >= 0.0) || !std::isfinite(reader.delta)) {
    throw InvalidArgument("reader delta must be finite and >= 0");
  }
  std::mt19937_64 engine(QueryStreamSeed(reader.seed, query_id));
  ReadOutcome outcome;
  outcome.query_id = std::string(query_id);
  outcome.n_used = static_cast<int>(relevant.size());
  double best = -1.0;
  for (bool is_relevant : relevant) {
    double confidence = UnitUniform(engine) + (is_relevant ? reader.delta : 0.0);
    if (is_relevant) ++outcome.k_relevant;
    if (confidence > best) {
      best = confidence;
      outcome.exact_match = is_relevant;
    }
  }
  return outcome;
}

double ExactMatchProbability(int k, int n, double delta) {
  if (n < 1 || k < 0 || k > n) {
    throw InvalidArgument("need 0 <= k <= n and n >= 1, got k=" +
                          std::to_string(k) + " n=" + std::to_string(n));
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InvalidArgument("delta must be finite and >= 0");
  }
  if (k == 0) return 0.0;
  if (k == n) return 1.0;
  if (delta == 0.0) return static_cast<double>(k) / static_cast<double>(n);

  // P = integral over a in [delta, 1 + delta] of the density of the relevant
  // maximum, k (a - delta)^(k-1), times P(noise maximum < a) = min(a, 1)^(n-k).
  // Above a = 1 the noise factor is 1 and the piece integrates in closed form.
  const double kd = k;
  const double noise = n - k;
  double upper = std::min(1.0, 1.0 + delta);
  double inner = 0.0;
  if (delta < upper) {
    auto integrand = [&](double a) {
      return kd * std::pow(a - delta, kd - 1.0) * std::pow(a, noise);
    };
    inner = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, delta, upper, 15, 1e-14);
  }
  double tail = delta >= 1.0 ? 1.0 : 1.0 - std::pow(1.0 - delta, kd);
  return inner + tail;
}

}  // namespace adaptive_ir
