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

// Tabular episodic Markov games, Markov product policies, simulation and
// exact backward dynamic programming.
//
// Conventions: steps h, states s, actions and players are 0-based. A joint
// action is a mixed-radix integer with player 0 as the least significant
// digit.

#ifndef MGLAB_GAME_HPP_
#define MGLAB_GAME_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mglab/rng.hpp"

namespace mglab {

inline constexpr std::int64_t kMaxJointActions = std::int64_t{1} << 20;
inline constexpr std::int64_t kMaxStateSteps = 100000;
// Dense transition tensor entries, H * S * |A| * S.
inline constexpr std::int64_t kMaxTransitionEntries = std::int64_t{1} << 27;

enum class RewardKind : std::uint8_t { kDeterministic = 0, kBernoulli = 1 };

struct RewardSpec {
  RewardKind kind = RewardKind::kDeterministic;
  double mean = 0.0;
};

class JointActionSpace {
 public:
  JointActionSpace() = default;
  explicit JointActionSpace(std::vector<int> num_actions);

  int num_players() const { return static_cast<int>(num_actions_.size()); }
  int num_actions(int player) const { return num_actions_[player]; }
  const std::vector<int>& num_actions() const { return num_actions_; }
  std::int64_t size() const { return size_; }

  std::int64_t Encode(std::span<const int> actions) const;
  void Decode(std::int64_t joint, std::span<int> actions) const;
  std::vector<int> Decode(std::int64_t joint) const;
  int ActionOf(std::int64_t joint, int player) const {
    return static_cast<int>((joint / stride_[player]) % num_actions_[player]);
  }
  // Joint action with `player`'s digit replaced by `action`.
  std::int64_t WithAction(std::int64_t joint, int player, int action) const {
    return joint + (action - ActionOf(joint, player)) * stride_[player];
  }
  std::int64_t stride(int player) const { return stride_[player]; }

 private:
  std::vector<int> num_actions_;
  std::vector<std::int64_t> stride_;
  std::int64_t size_ = 1;
};

// Raw tensors of a game. Filled by generators and parsers, then validated by
// the MarkovGame constructor.
struct GameTensors {
  int num_players = 0;
  int horizon = 0;
  int num_states = 0;
  std::vector<int> num_actions;
  int initial_state = 0;
  // [h][s][joint][s']
  std::vector<double> transitions;
  // [h][s][joint][player]
  std::vector<double> reward_means;
  std::vector<RewardKind> reward_kinds;

  // Zero transitions/rewards of the right shape (validates the caps).
  static GameTensors Zeros(int num_players, int horizon, int num_states,
                           std::vector<int> num_actions,
                           RewardKind kind = RewardKind::kDeterministic);

  std::int64_t joint_size() const;
  double& P(int h, int s, std::int64_t a, int next);
  double& R(int h, int s, std::int64_t a, int player);
  RewardKind& Kind(int h, int s, std::int64_t a, int player);
};

class MarkovGame {
 public:
  // Throws Error(kValidation) when an invariant fails.
  explicit MarkovGame(GameTensors tensors);

  int num_players() const { return t_.num_players; }
  int horizon() const { return t_.horizon; }
  int num_states() const { return t_.num_states; }
  int num_actions(int player) const { return t_.num_actions[player]; }
  const std::vector<int>& num_actions() const { return t_.num_actions; }
  int max_actions() const;
  int initial_state() const { return t_.initial_state; }
  const JointActionSpace& joint() const { return joint_; }
  std::int64_t num_joint_actions() const { return joint_.size(); }

  std::span<const double> Transition(int h, int s, std::int64_t a) const {
    return {t_.transitions.data() + TransitionOffset(h, s, a),
            static_cast<std::size_t>(t_.num_states)};
  }
  std::span<const double> RewardMeans(int h, int s, std::int64_t a) const {
    return {t_.reward_means.data() + RewardOffset(h, s, a),
            static_cast<std::size_t>(t_.num_players)};
  }
  double RewardMean(int h, int s, std::int64_t a, int player) const {
    return t_.reward_means[RewardOffset(h, s, a) + player];
  }
  RewardKind Kind(int h, int s, std::int64_t a, int player) const {
    return t_.reward_kinds[RewardOffset(h, s, a) + player];
  }
  RewardSpec Reward(int h, int s, std::int64_t a, int player) const {
    return {Kind(h, s, a, player), RewardMean(h, s, a, player)};
  }

  // Identical reward means for all players everywhere.
  bool IsCooperative() const;
  const GameTensors& tensors() const { return t_; }

 private:
  std::size_t TransitionOffset(int h, int s, std::int64_t a) const {
    return ((static_cast<std::size_t>(h) * t_.num_states + s) * joint_.size() +
            a) *
           t_.num_states;
  }
  std::size_t RewardOffset(int h, int s, std::int64_t a) const {
    return ((static_cast<std::size_t>(h) * t_.num_states + s) * joint_.size() +
            a) *
           t_.num_players;
  }

  GameTensors t_;
  JointActionSpace joint_;
};

// Per (h, player, s) distribution over that player's actions.
class MarkovProductPolicy {
 public:
  MarkovProductPolicy() = default;
  // Uniform policy of the given shape.
  MarkovProductPolicy(int horizon, int num_states, std::vector<int> num_actions);
  static MarkovProductPolicy Uniform(const MarkovGame& game);
  // Deterministic policy playing action 0 everywhere.
  static MarkovProductPolicy FirstAction(const MarkovGame& game);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_players() const { return static_cast<int>(num_actions_.size()); }
  const std::vector<int>& num_actions() const { return num_actions_; }

  std::span<const double> Probs(int h, int player, int s) const {
    return {probs_.data() + Offset(h, player, s),
            static_cast<std::size_t>(num_actions_[player])};
  }
  std::span<double> MutableProbs(int h, int player, int s) {
    return {probs_.data() + Offset(h, player, s),
            static_cast<std::size_t>(num_actions_[player])};
  }
  void SetPure(int h, int player, int s, int action);
  // Replaces player's part by `other`'s part for the same player.
  void CopyPlayer(const MarkovProductPolicy& other, int player);

  bool IsPure(double tol = 1e-12) const;
  bool IsPlayerPure(int player, double tol = 1e-12) const;
  // Argmax action; for pure policies this is the played action.
  int PureAction(int h, int player, int s) const;

  // Throws unless shapes match `game` and every vector is a distribution.
  void ValidateFor(const MarkovGame& game) const;

  bool operator==(const MarkovProductPolicy&) const = default;

 private:
  std::size_t Offset(int h, int player, int s) const {
    return (static_cast<std::size_t>(h) * num_states_ + s) * sum_actions_ +
           prefix_[player];
  }

  int horizon_ = 0;
  int num_states_ = 0;
  std::vector<int> num_actions_;
  std::vector<int> prefix_;
  int sum_actions_ = 0;
  std::vector<double> probs_;
};

struct StepRecord {
  int state = 0;
  std::vector<int> actions;
  std::int64_t joint = 0;
  std::vector<double> rewards;
  int next_state = 0;
};

using EpisodeTrace = std::vector<StepRecord>;

// Fills `actions` (one entry per player) for step h in state s.
using Actor = std::function<void(int h, int s, std::span<int> actions)>;

// Realised per-player rewards for one step; Bernoulli specs draw from `env`.
// One uniform is consumed per player regardless of the kind.
void RealizeRewards(const MarkovGame& game, int h, int s, std::int64_t joint,
                    RngStream& env, std::span<double> rewards);
int SampleNextState(const MarkovGame& game, int h, int s, std::int64_t joint,
                    RngStream& env);

EpisodeTrace SampleEpisode(const MarkovGame& game, const Actor& actor,
                           RngStream& env);

// Actor that samples each player's action independently from `policy`.
Actor PolicyActor(const MarkovProductPolicy& policy, RngStream& rng);

struct MonteCarloEstimate {
  std::vector<double> mean;  // per player
  std::vector<double> se;    // standard error of the mean
  std::int64_t episodes = 0;
};

// Average realised return over `episodes` rollouts of `actor`.
MonteCarloEstimate MonteCarloReturns(const MarkovGame& game, const Actor& actor,
                                     std::int64_t episodes, RngStream& env);

// Per-(h, s, player) values of a product policy; V[H] = 0.
class ValueTable {
 public:
  ValueTable(int horizon, int num_states, int num_players)
      : num_states_(num_states),
        num_players_(num_players),
        v_(static_cast<std::size_t>(horizon + 1) * num_states * num_players,
           0.0) {}
  double& at(int h, int s, int i) {
    return v_[(static_cast<std::size_t>(h) * num_states_ + s) * num_players_ +
              i];
  }
  double at(int h, int s, int i) const {
    return v_[(static_cast<std::size_t>(h) * num_states_ + s) * num_players_ +
              i];
  }

 private:
  int num_states_;
  int num_players_;
  std::vector<double> v_;
};

ValueTable EvaluatePolicy(const MarkovGame& game,
                          const MarkovProductPolicy& policy);

// V_{1,i}(s1) for every player, with reward means.
std::vector<double> ExactValue(const MarkovGame& game,
                               const MarkovProductPolicy& policy);

struct BestResponse {
  double value = 0.0;
  // Deterministic action per (h, s), indexed h * S + s.
  std::vector<int> actions;
  // `policy` with player i's part replaced by `actions`.
  MarkovProductPolicy policy;
};

// Best Markov response of `player` against the other players' parts of
// `policy`. Ties go to the lowest action index.
BestResponse BestResponseValue(const MarkovGame& game,
                               const MarkovProductPolicy& policy, int player);

// max_i (best response value - own value); nonnegative up to rounding.
double NeGap(const MarkovGame& game, const MarkovProductPolicy& policy);

// Three-state embedding of a one-step game over `num_actions` with good set
// `good`: state 0 = s1, 1 = s_+, 2 = s_-. Transitions from s1 favour s_+ by
// eps / (2 (H-1)) on good joint actions; s_+ pays 1 per step after the first.
MarkovGame EmbedOneStepGame(const std::vector<int>& num_actions,
                            std::span<const std::int64_t> good, int horizon,
                            double eps);

// H = 1, S = 1 game from a per-(joint, player) mean table.
MarkovGame MakeOneStepGame(const std::vector<int>& num_actions,
                           std::span<const double> means, RewardKind kind);

}  // namespace mglab

#endif  // MGLAB_GAME_HPP_
