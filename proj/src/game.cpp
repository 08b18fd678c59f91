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

#include "mglab/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mglab/error.hpp"
#include "mglab/joint.hpp"

namespace mglab {

namespace {

constexpr const char* kOrigin = "game-core";

}  // namespace

JointActionSpace::JointActionSpace(std::vector<int> num_actions)
    : num_actions_(std::move(num_actions)) {
  stride_.resize(num_actions_.size());
  size_ = 1;
  for (std::size_t i = 0; i < num_actions_.size(); ++i) {
    Require(num_actions_[i] >= 1, kOrigin, "every player needs >= 1 action");
    stride_[i] = size_;
    size_ *= num_actions_[i];
    Require(size_ <= kMaxJointActions, kOrigin,
            "joint action space exceeds 2^20");
  }
}

std::int64_t JointActionSpace::Encode(std::span<const int> actions) const {
  Require(actions.size() == num_actions_.size(), kOrigin,
          "joint action has wrong number of players");
  std::int64_t joint = 0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    Require(actions[i] >= 0 && actions[i] < num_actions_[i], kOrigin,
            "action index out of range");
    joint += actions[i] * stride_[i];
  }
  return joint;
}

void JointActionSpace::Decode(std::int64_t joint,
                              std::span<int> actions) const {
  for (std::size_t i = 0; i < num_actions_.size(); ++i) {
    actions[i] = static_cast<int>(joint % num_actions_[i]);
    joint /= num_actions_[i];
  }
}

std::vector<int> JointActionSpace::Decode(std::int64_t joint) const {
  std::vector<int> out(num_actions_.size());
  Decode(joint, out);
  return out;
}

GameTensors GameTensors::Zeros(int num_players, int horizon, int num_states,
                               std::vector<int> num_actions, RewardKind kind) {
  Require(num_players >= 1, kOrigin, "need at least one player");
  Require(horizon >= 1, kOrigin, "horizon must be >= 1");
  Require(num_states >= 1, kOrigin, "need at least one state");
  Require(static_cast<int>(num_actions.size()) == num_players, kOrigin,
          "action counts must have one entry per player");
  Require(static_cast<std::int64_t>(horizon) * num_states <= kMaxStateSteps,
          kOrigin, "S * H exceeds 1e5");
  JointActionSpace joint(num_actions);
  const std::int64_t hs = static_cast<std::int64_t>(horizon) * num_states;
  Require(hs * joint.size() * num_states <= kMaxTransitionEntries, kOrigin,
          "dense transition tensor too large");
  GameTensors t;
  t.num_players = num_players;
  t.horizon = horizon;
  t.num_states = num_states;
  t.num_actions = std::move(num_actions);
  t.transitions.assign(hs * joint.size() * num_states, 0.0);
  t.reward_means.assign(hs * joint.size() * num_players, 0.0);
  t.reward_kinds.assign(t.reward_means.size(), kind);
  return t;
}

std::int64_t GameTensors::joint_size() const {
  std::int64_t n = 1;
  for (int a : num_actions) n *= a;
  return n;
}

double& GameTensors::P(int h, int s, std::int64_t a, int next) {
  return transitions[((static_cast<std::size_t>(h) * num_states + s) *
                          joint_size() +
                      a) *
                         num_states +
                     next];
}

double& GameTensors::R(int h, int s, std::int64_t a, int player) {
  return reward_means[((static_cast<std::size_t>(h) * num_states + s) *
                           joint_size() +
                       a) *
                          num_players +
                      player];
}

RewardKind& GameTensors::Kind(int h, int s, std::int64_t a, int player) {
  return reward_kinds[((static_cast<std::size_t>(h) * num_states + s) *
                           joint_size() +
                       a) *
                          num_players +
                      player];
}

MarkovGame::MarkovGame(GameTensors tensors) : t_(std::move(tensors)) {
  Require(t_.num_players >= 1, kOrigin, "need at least one player");
  Require(t_.horizon >= 1, kOrigin, "horizon must be >= 1");
  Require(t_.num_states >= 1, kOrigin, "need at least one state");
  Require(static_cast<int>(t_.num_actions.size()) == t_.num_players, kOrigin,
          "action counts must have one entry per player");
  Require(static_cast<std::int64_t>(t_.horizon) * t_.num_states <=
              kMaxStateSteps,
          kOrigin, "S * H exceeds 1e5");
  Require(t_.initial_state >= 0 && t_.initial_state < t_.num_states, kOrigin,
          "initial state out of range");
  joint_ = JointActionSpace(t_.num_actions);
  const std::size_t rows =
      static_cast<std::size_t>(t_.horizon) * t_.num_states * joint_.size();
  Require(t_.transitions.size() == rows * t_.num_states, kOrigin,
          "transition tensor has wrong size");
  Require(t_.reward_means.size() == rows * t_.num_players, kOrigin,
          "reward tensor has wrong size");
  Require(t_.reward_kinds.size() == t_.reward_means.size(), kOrigin,
          "reward kind tensor has wrong size");
  for (std::size_t row = 0; row < rows; ++row) {
    double sum = 0.0;
    for (int n = 0; n < t_.num_states; ++n) {
      const double p = t_.transitions[row * t_.num_states + n];
      Require(p >= 0.0 && std::isfinite(p), kOrigin,
              "negative or non-finite transition probability");
      sum += p;
    }
    Require(std::abs(sum - 1.0) <= 1e-12, kOrigin,
            "transition row " + std::to_string(row) + " sums to " +
                std::to_string(sum));
  }
  for (double r : t_.reward_means) {
    Require(r >= 0.0 && r <= 1.0, kOrigin, "reward mean outside [0, 1]");
  }
}

int MarkovGame::max_actions() const {
  return *std::max_element(t_.num_actions.begin(), t_.num_actions.end());
}

bool MarkovGame::IsCooperative() const {
  const std::size_t rows = t_.reward_means.size() / t_.num_players;
  for (std::size_t row = 0; row < rows; ++row) {
    const double* r = t_.reward_means.data() + row * t_.num_players;
    for (int i = 1; i < t_.num_players; ++i) {
      if (r[i] != r[0]) return false;
    }
  }
  return true;
}

MarkovProductPolicy::MarkovProductPolicy(int horizon, int num_states,
                                         std::vector<int> num_actions)
    : horizon_(horizon),
      num_states_(num_states),
      num_actions_(std::move(num_actions)) {
  prefix_.resize(num_actions_.size());
  sum_actions_ = 0;
  for (std::size_t i = 0; i < num_actions_.size(); ++i) {
    prefix_[i] = sum_actions_;
    sum_actions_ += num_actions_[i];
  }
  probs_.resize(static_cast<std::size_t>(horizon_) * num_states_ *
                sum_actions_);
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < num_states_; ++s) {
      for (int i = 0; i < num_players(); ++i) {
        auto p = MutableProbs(h, i, s);
        std::fill(p.begin(), p.end(), 1.0 / num_actions_[i]);
      }
    }
  }
}

MarkovProductPolicy MarkovProductPolicy::Uniform(const MarkovGame& game) {
  return MarkovProductPolicy(game.horizon(), game.num_states(),
                             game.num_actions());
}

MarkovProductPolicy MarkovProductPolicy::FirstAction(const MarkovGame& game) {
  MarkovProductPolicy p = Uniform(game);
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < game.num_states(); ++s) {
      for (int i = 0; i < game.num_players(); ++i) p.SetPure(h, i, s, 0);
    }
  }
  return p;
}

void MarkovProductPolicy::SetPure(int h, int player, int s, int action) {
  auto p = MutableProbs(h, player, s);
  std::fill(p.begin(), p.end(), 0.0);
  p[action] = 1.0;
}

void MarkovProductPolicy::CopyPlayer(const MarkovProductPolicy& other,
                                     int player) {
  Require(other.horizon_ == horizon_ && other.num_states_ == num_states_ &&
              other.num_actions_ == num_actions_,
          kOrigin, "policy shapes differ");
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < num_states_; ++s) {
      auto src = other.Probs(h, player, s);
      std::copy(src.begin(), src.end(), MutableProbs(h, player, s).begin());
    }
  }
}

bool MarkovProductPolicy::IsPlayerPure(int player, double tol) const {
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < num_states_; ++s) {
      int ones = 0;
      for (double x : Probs(h, player, s)) {
        if (std::abs(x - 1.0) <= tol) {
          ++ones;
        } else if (std::abs(x) > tol) {
          return false;
        }
      }
      if (ones != 1) return false;
    }
  }
  return true;
}

bool MarkovProductPolicy::IsPure(double tol) const {
  for (int i = 0; i < num_players(); ++i) {
    if (!IsPlayerPure(i, tol)) return false;
  }
  return true;
}

int MarkovProductPolicy::PureAction(int h, int player, int s) const {
  auto p = Probs(h, player, s);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

void MarkovProductPolicy::ValidateFor(const MarkovGame& game) const {
  Require(horizon_ == game.horizon() && num_states_ == game.num_states() &&
              num_actions_ == game.num_actions(),
          kOrigin, "policy dimensions do not match the game");
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < num_states_; ++s) {
      for (int i = 0; i < num_players(); ++i) {
        double sum = 0.0;
        for (double x : Probs(h, i, s)) {
          Require(x >= 0.0, kOrigin, "negative policy probability");
          sum += x;
        }
        Require(std::abs(sum - 1.0) <= 1e-12, kOrigin,
                "policy vector does not sum to 1");
      }
    }
  }
}

void RealizeRewards(const MarkovGame& game, int h, int s, std::int64_t joint,
                    RngStream& env, std::span<double> rewards) {
  for (int i = 0; i < game.num_players(); ++i) {
    const RewardSpec spec = game.Reward(h, s, joint, i);
    const double u = env.Uniform();
    rewards[i] = spec.kind == RewardKind::kBernoulli
                     ? (u < spec.mean ? 1.0 : 0.0)
                     : spec.mean;
  }
}

int SampleNextState(const MarkovGame& game, int h, int s, std::int64_t joint,
                    RngStream& env) {
  return env.Categorical(game.Transition(h, s, joint));
}

EpisodeTrace SampleEpisode(const MarkovGame& game, const Actor& actor,
                           RngStream& env) {
  EpisodeTrace trace;
  trace.reserve(game.horizon());
  int s = game.initial_state();
  for (int h = 0; h < game.horizon(); ++h) {
    StepRecord rec;
    rec.state = s;
    rec.actions.assign(game.num_players(), 0);
    actor(h, s, rec.actions);
    rec.joint = game.joint().Encode(rec.actions);
    rec.rewards.assign(game.num_players(), 0.0);
    RealizeRewards(game, h, s, rec.joint, env, rec.rewards);
    rec.next_state = SampleNextState(game, h, s, rec.joint, env);
    s = rec.next_state;
    trace.push_back(std::move(rec));
  }
  return trace;
}

Actor PolicyActor(const MarkovProductPolicy& policy, RngStream& rng) {
  return [&policy, &rng](int h, int s, std::span<int> actions) {
    for (int i = 0; i < policy.num_players(); ++i) {
      actions[i] = rng.Categorical(policy.Probs(h, i, s));
    }
  };
}

MonteCarloEstimate MonteCarloReturns(const MarkovGame& game, const Actor& actor,
                                     std::int64_t episodes, RngStream& env) {
  Require(episodes >= 1, kOrigin, "Monte Carlo needs at least one episode");
  const int m = game.num_players();
  // Welford accumulation keeps the variance stable for long runs.
  std::vector<double> mean(m, 0.0), m2(m, 0.0), ret(m);
  for (std::int64_t n = 1; n <= episodes; ++n) {
    const EpisodeTrace trace = SampleEpisode(game, actor, env);
    std::fill(ret.begin(), ret.end(), 0.0);
    for (const auto& rec : trace) {
      for (int i = 0; i < m; ++i) ret[i] += rec.rewards[i];
    }
    for (int i = 0; i < m; ++i) {
      const double d = ret[i] - mean[i];
      mean[i] += d / static_cast<double>(n);
      m2[i] += d * (ret[i] - mean[i]);
    }
  }
  MonteCarloEstimate est;
  est.episodes = episodes;
  est.mean = mean;
  est.se.assign(m, 0.0);
  if (episodes > 1) {
    const double n = static_cast<double>(episodes);
    for (int i = 0; i < m; ++i) {
      est.se[i] = std::sqrt(std::max(0.0, m2[i] / (n - 1.0)) / n);
    }
  }
  return est;
}

ValueTable EvaluatePolicy(const MarkovGame& game,
                          const MarkovProductPolicy& policy) {
  policy.ValidateFor(game);
  const int m = game.num_players();
  const int S = game.num_states();
  ValueTable v(game.horizon(), S, m);
  std::vector<double> joint_probs;
  std::vector<std::span<const double>> dists(m);
  for (int h = game.horizon() - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      for (int i = 0; i < m; ++i) dists[i] = policy.Probs(h, i, s);
      ProductProbabilities(game.joint(), dists, -1, joint_probs);
      for (std::int64_t a = 0; a < game.num_joint_actions(); ++a) {
        const double w = joint_probs[a];
        if (w == 0.0) continue;
        auto r = game.RewardMeans(h, s, a);
        auto p = game.Transition(h, s, a);
        for (int i = 0; i < m; ++i) {
          double cont = 0.0;
          for (int n = 0; n < S; ++n) cont += p[n] * v.at(h + 1, n, i);
          v.at(h, s, i) += w * (r[i] + cont);
        }
      }
    }
  }
  return v;
}

std::vector<double> ExactValue(const MarkovGame& game,
                               const MarkovProductPolicy& policy) {
  const ValueTable v = EvaluatePolicy(game, policy);
  std::vector<double> out(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    out[i] = v.at(0, game.initial_state(), i);
  }
  return out;
}

BestResponse BestResponseValue(const MarkovGame& game,
                               const MarkovProductPolicy& policy, int player) {
  policy.ValidateFor(game);
  Require(player >= 0 && player < game.num_players(), kOrigin,
          "player index out of range");
  const int m = game.num_players();
  const int S = game.num_states();
  const int H = game.horizon();
  const int A = game.num_actions(player);
  std::vector<double> next(S, 0.0), cur(S, 0.0);
  std::vector<double> q(A);
  std::vector<double> joint_probs;
  std::vector<std::span<const double>> dists(m);
  BestResponse br;
  br.actions.assign(static_cast<std::size_t>(H) * S, 0);
  for (int h = H - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      for (int i = 0; i < m; ++i) dists[i] = policy.Probs(h, i, s);
      ProductProbabilities(game.joint(), dists, player, joint_probs);
      std::fill(q.begin(), q.end(), 0.0);
      for (std::int64_t a = 0; a < game.num_joint_actions(); ++a) {
        const double w = joint_probs[a];
        if (w == 0.0) continue;
        auto p = game.Transition(h, s, a);
        double cont = 0.0;
        for (int n = 0; n < S; ++n) cont += p[n] * next[n];
        q[game.joint().ActionOf(a, player)] +=
            w * (game.RewardMean(h, s, a, player) + cont);
      }
      int best = 0;
      for (int b = 1; b < A; ++b) {
        if (q[b] > q[best]) best = b;
      }
      br.actions[static_cast<std::size_t>(h) * S + s] = best;
      cur[s] = q[best];
    }
    std::swap(cur, next);
  }
  br.value = next[game.initial_state()];
  br.policy = policy;
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      br.policy.SetPure(h, player, s,
                        br.actions[static_cast<std::size_t>(h) * S + s]);
    }
  }
  return br;
}

double NeGap(const MarkovGame& game, const MarkovProductPolicy& policy) {
  const std::vector<double> v = ExactValue(game, policy);
  double gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < game.num_players(); ++i) {
    gap = std::max(gap, BestResponseValue(game, policy, i).value - v[i]);
  }
  return gap;
}

MarkovGame EmbedOneStepGame(const std::vector<int>& num_actions,
                            std::span<const std::int64_t> good, int horizon,
                            double eps) {
  Require(horizon >= 2, kOrigin, "embedding needs H >= 2");
  const double shift = eps / (2.0 * (horizon - 1));
  Require(shift >= 0.0 && shift <= 0.5, kOrigin,
          "eps / (2 (H - 1)) must lie in [0, 1/2]");
  const int m = static_cast<int>(num_actions.size());
  GameTensors t = GameTensors::Zeros(m, horizon, 3, num_actions);
  const std::int64_t J = t.joint_size();
  std::vector<char> is_good(J, 0);
  for (std::int64_t a : good) {
    Require(a >= 0 && a < J, kOrigin, "good joint action out of range");
    is_good[a] = 1;
  }
  constexpr int kStart = 0, kPlus = 1, kMinus = 2;
  for (int h = 0; h < horizon; ++h) {
    for (std::int64_t a = 0; a < J; ++a) {
      // s1 is only reachable at the first step; later rows are never used
      // but must still be distributions.
      const double up = (h == 0 && is_good[a]) ? 0.5 + shift : 0.5;
      t.P(h, kStart, a, kPlus) = up;
      t.P(h, kStart, a, kMinus) = 1.0 - up;
      t.P(h, kPlus, a, kPlus) = 1.0;
      t.P(h, kMinus, a, kMinus) = 1.0;
      if (h > 0) {
        for (int i = 0; i < m; ++i) t.R(h, kPlus, a, i) = 1.0;
      }
    }
  }
  t.initial_state = kStart;
  return MarkovGame(std::move(t));
}

MarkovGame MakeOneStepGame(const std::vector<int>& num_actions,
                           std::span<const double> means, RewardKind kind) {
  const int m = static_cast<int>(num_actions.size());
  GameTensors t = GameTensors::Zeros(m, 1, 1, num_actions, kind);
  const std::int64_t J = t.joint_size();
  Require(static_cast<std::int64_t>(means.size()) == J * m, kOrigin,
          "mean table must have |A| * m entries");
  for (std::int64_t a = 0; a < J; ++a) {
    t.P(0, 0, a, 0) = 1.0;
    for (int i = 0; i < m; ++i) t.R(0, 0, a, i) = means[a * m + i];
  }
  return MarkovGame(std::move(t));
}

}  // namespace mglab
