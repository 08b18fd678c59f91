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

// Single-agent reductions for Markov potential games: the induced MDP of one
// player, the UCBVI-UPLOW learner and Nash coordinate ascent.

#ifndef MGLAB_MPG_HPP_
#define MGLAB_MPG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "mglab/game.hpp"
#include "mglab/rng.hpp"

namespace mglab {

// Player i's MDP with the others' parts of `policy` marginalised out
// analytically. One player, reward means only (deterministic kind).
MarkovGame ExactMdpView(const MarkovGame& game,
                        const MarkovProductPolicy& policy, int player);

// Player i's MDP where the others' actions are drawn from `policy` when the
// learner acts. Opponent draws come from `opponents`, rewards and transitions
// from `env`.
class SamplingMdpView {
 public:
  SamplingMdpView(const MarkovGame& game, const MarkovProductPolicy& policy,
                  int player, RngStream opponents, RngStream env);

  int horizon() const { return game_->horizon(); }
  int num_states() const { return game_->num_states(); }
  int num_actions() const { return game_->num_actions(player_); }
  int initial_state() const { return game_->initial_state(); }

  struct Outcome {
    double reward = 0.0;
    int next_state = 0;
  };
  Outcome Step(int h, int s, int action);
  std::int64_t steps() const { return steps_; }

 private:
  const MarkovGame* game_;
  const MarkovProductPolicy* policy_;
  int player_;
  RngStream opponents_;
  RngStream env_;
  std::vector<int> actions_;
  std::vector<double> rewards_;
  std::int64_t steps_ = 0;
};

// c (sqrt(var iota / t) + H^2 S iota / t).
double BernsteinBonus(std::int64_t t, double variance, double c, int horizon,
                      int num_states, double iota);

struct UcbviParams {
  std::int64_t episodes = 1000;
  double c = 0.5;
  double iota = 0.0;  // 0: log(S A H K / p)
  double p = 0.05;

  double ResolvedIota(int num_states, int num_actions, int horizon) const;
};

struct UcbviResult {
  std::vector<int> policy;  // action per h * S + s
  std::int64_t best_episode = 0;  // k* (1-based)
  double best_upper = 0.0;
  double best_lower = 0.0;
  // V_up^k(s1), V_low^k(s1) at the start of each episode.
  std::vector<double> upper;
  std::vector<double> lower;
};

// Full-sweep UCBVI with upper and lower bounds. Every episode recomputes Q for
// all (h, s, a) with visits, using empirical mean rewards and transitions.
// Returns the greedy policy of the episode with the smallest V_up - V_low at
// s1 (earliest on ties).
UcbviResult UcbviUplow(SamplingMdpView& mdp, const UcbviParams& params);

// Mean realised return of `policy` over `episodes` rollouts with its standard
// error. Actions use rng.Split(0), the environment rng.Split(1).
MonteCarloEstimate MonteCarloValue(const MarkovGame& game,
                                   const MarkovProductPolicy& policy,
                                   std::int64_t episodes, const RngStream& rng);

struct NashCaConfig {
  double eps = 0.1;
  double p = 0.05;
  double iota = 0.0;      // 0: log(m H S A_max / (p eps))
  double n_scale = 4.0;   // N = n_scale H^2 iota / eps^2
  double k_scale = 2.0;   // K_i = k_scale H^3 S A_i iota / eps^2
  std::int64_t mc_episodes = 0;       // overrides N when > 0
  std::int64_t learner_episodes = 0;  // overrides every K_i when > 0
  double phi_max = 0.0;   // 0: m H
  double ucbvi_c = 0.5;

  void Validate() const;
  double ResolvedIota(const MarkovGame& game) const;
  std::int64_t ResolvedN(const MarkovGame& game) const;
  std::int64_t ResolvedK(const MarkovGame& game, int player) const;
  // ceil(4 phi_max / eps).
  std::int64_t LoopCap(const MarkovGame& game) const;
};

struct NashCaAuditRow {
  std::int64_t iteration = 0;
  int player = 0;
  double delta = 0.0;
  double value_before = 0.0;  // V_hat_i(pi)
  double value_after = 0.0;   // V_hat_i(pi_hat_i, pi_-i)
  std::int64_t episodes = 0;  // learner + evaluation episodes of this row
  bool accepted = false;
};

struct NashCaResult {
  MarkovProductPolicy policy;
  bool certified = false;  // stopped by the eps/2 rule, not by the cap
  std::int64_t iterations = 0;
  std::int64_t total_episodes = 0;
  std::vector<NashCaAuditRow> audit;
  // Initial policy followed by the policy after every accepted update.
  std::vector<MarkovProductPolicy> path;
};

// Streams: baseline evaluation ("nash-ca-mc", t, 0), candidate evaluation
// ("nash-ca-mc", t, i + 1), learner ("nash-ca-ucbvi", t, i) and its
// environment ("nash-ca-env", t, i).
NashCaResult NashCa(const MarkovGame& game, const NashCaConfig& config,
                    std::uint64_t seed);

std::string NashCaAuditCsv(const NashCaResult& result);

}  // namespace mglab

#endif  // MGLAB_MPG_HPP_
