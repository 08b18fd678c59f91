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

#include "mglab/generators.hpp"

#include <cmath>

#include "mglab/error.hpp"
#include "mglab/rng.hpp"

namespace mglab {

namespace {

// Flat Dirichlet via normalised exponentials. Draws are in (0, 1] so every
// entry is strictly positive.
void Dirichlet(RngStream& rng, std::span<double> out) {
  double total = 0.0;
  for (double& x : out) {
    x = -std::log(1.0 - rng.Uniform());
    total += x;
  }
  if (!(total > 0.0)) {
    for (double& x : out) x = 1.0 / static_cast<double>(out.size());
    return;
  }
  for (double& x : out) x /= total;
}

}  // namespace

MarkovGame RandomGame(const RandomGameSpec& spec) {
  Require(spec.num_players >= 1, "game-core", "need at least one player");
  std::vector<int> actions = spec.num_actions;
  if (actions.size() == 1 && spec.num_players > 1) {
    actions.assign(spec.num_players, spec.num_actions[0]);
  }
  Require(static_cast<int>(actions.size()) == spec.num_players, "game-core",
          "action list must have one entry or one per player");
  GameTensors t = GameTensors::Zeros(spec.num_players, spec.horizon,
                                     spec.num_states, actions, spec.kind);
  RngStream trans = RngStream::Derive(spec.seed, "gen-transitions");
  RngStream rew = RngStream::Derive(spec.seed, "gen-rewards");
  const std::int64_t J = t.joint_size();
  const int S = spec.num_states;
  for (int h = 0; h < spec.horizon; ++h) {
    for (int s = 0; s < S; ++s) {
      for (std::int64_t a = 0; a < J; ++a) {
        Dirichlet(trans, std::span<double>(&t.P(h, s, a, 0), S));
        const double shared = rew.Uniform();
        for (int i = 0; i < spec.num_players; ++i) {
          t.R(h, s, a, i) =
              spec.cooperative || i == 0 ? shared : rew.Uniform();
        }
      }
    }
  }
  return MarkovGame(std::move(t));
}

MarkovProductPolicy RandomPolicy(const MarkovGame& game, std::uint64_t seed) {
  MarkovProductPolicy pi(game.horizon(), game.num_states(),
                         game.num_actions());
  RngStream rng = RngStream::Derive(seed, "gen-policy");
  for (int h = 0; h < game.horizon(); ++h) {
    for (int i = 0; i < game.num_players(); ++i) {
      for (int s = 0; s < game.num_states(); ++s) {
        Dirichlet(rng, pi.MutableProbs(h, i, s));
      }
    }
  }
  return pi;
}

MarkovProductPolicy RandomPurePolicy(const MarkovGame& game,
                                     std::uint64_t seed) {
  MarkovProductPolicy pi(game.horizon(), game.num_states(),
                         game.num_actions());
  RngStream rng = RngStream::Derive(seed, "gen-pure-policy");
  for (int h = 0; h < game.horizon(); ++h) {
    for (int i = 0; i < game.num_players(); ++i) {
      for (int s = 0; s < game.num_states(); ++s) {
        pi.SetPure(h, i, s, static_cast<int>(rng.Below(game.num_actions(i))));
      }
    }
  }
  return pi;
}

}  // namespace mglab
