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

#ifndef MGLAB_GENERATORS_HPP_
#define MGLAB_GENERATORS_HPP_

#include <cstdint>
#include <vector>

#include "mglab/game.hpp"

namespace mglab {

struct RandomGameSpec {
  int num_players = 2;
  int num_states = 2;
  int horizon = 2;
  // One entry per player, or a single entry shared by all players.
  std::vector<int> num_actions{2};
  std::uint64_t seed = 0;
  RewardKind kind = RewardKind::kBernoulli;
  // Identical rewards for all players (a Markov cooperative game).
  bool cooperative = false;
};

// Transitions are flat Dirichlet draws, reward means uniform on [0, 1].
MarkovGame RandomGame(const RandomGameSpec& spec);

// Random product policy with Dirichlet rows.
MarkovProductPolicy RandomPolicy(const MarkovGame& game, std::uint64_t seed);

// Random pure policy for every player.
MarkovProductPolicy RandomPurePolicy(const MarkovGame& game,
                                     std::uint64_t seed);

}  // namespace mglab

#endif  // MGLAB_GENERATORS_HPP_
