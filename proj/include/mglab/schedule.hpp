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

#ifndef MGLAB_SCHEDULE_HPP_
#define MGLAB_SCHEDULE_HPP_

#include <cstdint>
#include <vector>

#include "mglab/rng.hpp"

namespace mglab {

// Step size (H + 1) / (H + t) for t >= 1.
inline double Alpha(std::int64_t t, int horizon) {
  return static_cast<double>(horizon + 1) / static_cast<double>(horizon + t);
}

// (alpha_t^0, ..., alpha_t^t): alpha_t^j = alpha_j prod_{k=j+1..t}(1 - alpha_k)
// and alpha_t^0 = prod_{k=1..t}(1 - alpha_k).
std::vector<double> AlphaWeights(std::int64_t t, int horizon);

// log(alpha_t^t / alpha_t^1): the predictable weight u_t in log space.
double LogWeightRatio(std::int64_t t, int horizon);

// Draws l in [1, t] with P(l = j) = alpha_t^j in O(log t) via the closed
// form P(l <= j) = prod_{k=j+1..t}(1 - alpha_k).
class AlphaSampler {
 public:
  explicit AlphaSampler(int horizon) : horizon_(horizon) {}
  std::int64_t Sample(std::int64_t t, RngStream& rng);

 private:
  // log prod_{k=2..j}(1 - alpha_k) for j >= 1; grown on demand.
  double LogTail(std::int64_t j);

  int horizon_;
  std::vector<double> log_tail_{0.0, 0.0};
};

}  // namespace mglab

#endif  // MGLAB_SCHEDULE_HPP_
