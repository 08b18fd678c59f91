// Copyright 2026 The mglab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mglab/schedule.hpp"

#include <cmath>

#include "mglab/error.hpp"

namespace mglab {

std::vector<double> AlphaWeights(std::int64_t t, int horizon) {
  Require(t >= 0, "learners", "alpha weights need t >= 0");
  Require(horizon >= 1, "learners", "alpha weights need H >= 1");
  // alpha_t^j for all j by a single backward pass over the running product
  // prod_{k=j+1..t}(1 - alpha_k).
  std::vector<double> w(static_cast<std::size_t>(t) + 1, 0.0);
  double tail = 1.0;
  for (std::int64_t j = t; j >= 1; --j) {
    const double a = Alpha(j, horizon);
    w[j] = a * tail;
    tail *= (1.0 - a);
  }
  w[0] = tail;
  return w;
}

double LogWeightRatio(std::int64_t t, int horizon) {
  Require(t >= 1, "bandit-core", "weight ratio needs t >= 1");
  // alpha_t^t / alpha_t^1 = alpha_t / prod_{k=2..t}(1 - alpha_k) with
  // 1 - alpha_k = (k - 1) / (H + k); the product is
  // Gamma(t) Gamma(H + 2) / Gamma(H + t + 1).
  const double n = static_cast<double>(t);
  const double H = static_cast<double>(horizon);
  const double log_prod =
      std::lgamma(n) + std::lgamma(H + 2.0) - std::lgamma(H + n + 1.0);
  return std::log(Alpha(t, horizon)) - log_prod;
}

double AlphaSampler::LogTail(std::int64_t j) {
  while (static_cast<std::int64_t>(log_tail_.size()) <= j) {
    const std::int64_t k = static_cast<std::int64_t>(log_tail_.size());
    log_tail_.push_back(log_tail_.back() +
                        std::log(static_cast<double>(k - 1) /
                                 static_cast<double>(horizon_ + k)));
  }
  return log_tail_[j];
}

std::int64_t AlphaSampler::Sample(std::int64_t t, RngStream& rng) {
  Require(t >= 1, "certified-policy", "cannot sample l from an empty range");
  // Smallest j with P(l <= j) > u; P(l <= t) = 1 and P(l <= 0) = 0.
  const double log_u = std::log(rng.Uniform());
  const double log_t = LogTail(t);
  std::int64_t lo = 1, hi = t;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    // log P(l <= mid) = LogTail(t) - LogTail(mid).
    if (log_t - LogTail(mid) > log_u) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace mglab
