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

#ifndef MGLAB_JOINT_HPP_
#define MGLAB_JOINT_HPP_

#include <span>
#include <vector>

#include "mglab/game.hpp"

namespace mglab {

// out[a] = prod_{j != skip} dists[j][a_j] over all joint actions a.
// Pass skip = -1 to include every player.
inline void ProductProbabilities(const JointActionSpace& space,
                                 std::span<const std::span<const double>> dists,
                                 int skip, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(space.size()), 0.0);
  out[0] = 1.0;
  std::int64_t filled = 1;
  for (int j = 0; j < space.num_players(); ++j) {
    const int A = space.num_actions(j);
    // Expand digit j; entries [0, filled) hold the product over players < j.
    for (int b = A - 1; b >= 0; --b) {
      const double w = (j == skip) ? 1.0 : dists[j][b];
      const std::int64_t base = b * filled;
      for (std::int64_t x = 0; x < filled; ++x) out[base + x] = out[x] * w;
    }
    filled *= A;
  }
}

}  // namespace mglab

#endif  // MGLAB_JOINT_HPP_
