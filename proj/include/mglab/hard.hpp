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

// Hard one-step instances: Hamming-distance 1-nets, the Bernoulli game family
// built on them, pure-NE enumeration and a KL-decomposition checker.
//
// Nets are sorted joint-action indices over JointActionSpace(m x A), so for
// binary nets the index is the bit string with player 0 as bit 0.

#ifndef MGLAB_HARD_HPP_
#define MGLAB_HARD_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mglab/game.hpp"

namespace mglab {

// Enumeration cap for brute-force loops over joint actions or trajectories.
inline constexpr std::int64_t kMaxEnumeration = std::int64_t{1} << 20;

// Hamming code on the largest 2^k - 1 <= m leading bits, extended by every
// suffix on the remaining bits. m in [1, 24].
std::vector<std::int64_t> HammingOneNet(int m);

// 1-net of [2k]^m: a translated binary net in every 2x...x2 block whose block
// coordinates sum to 0 mod k. k = 1 is HammingOneNet(m). (2k)^m <= 2^20.
std::vector<std::int64_t> BlockOneNet(int m, int k);

// Every joint action is within Hamming distance 1 of `net`.
bool IsOneNet(const JointActionSpace& space, std::span<const std::int64_t> net);

// Shared-reward one-step game with Bernoulli(1/2 + eps 1{a in D}) rewards.
struct OneStepHardGame {
  std::vector<int> num_actions;
  std::vector<std::int64_t> good;  // D, sorted
  double eps = 0.0;

  // Per (joint, player) means, as MakeOneStepGame expects.
  std::vector<double> Means() const;
  MarkovGame ToGame() const;
  // Three-state embedding with horizon H.
  MarkovGame ToMdp(int horizon) const;
};

// Requires eps in [0, 0.4] and a valid net over A^m. `warning` receives a
// message when m < 4, where half of the joint actions need not lie outside
// D and the lower-bound argument does not apply.
OneStepHardGame BuildHardGame(std::vector<int> num_actions,
                              std::vector<std::int64_t> good, double eps,
                              std::string* warning = nullptr);

// Relabels player i's action a as perms[i][a].
OneStepHardGame PermuteGame(const OneStepHardGame& game,
                            const std::vector<std::vector<int>>& perms);

// Pure NE of a one-step mean table ([joint][player]): no single player can
// strictly raise its own mean. Sorted joint indices.
std::vector<std::int64_t> PureNashSet(const std::vector<int>& num_actions,
                                      std::span<const double> means);

// p log(p/q) + (1-p) log((1-p)/(1-q)) for p, q in (0, 1).
double BernoulliKl(double p, double q);
// kl(1/2 || 1/2 + eps) = (1/2) log(1 / (1 - 4 eps^2)).
double BernoulliKlHalf(double eps);

// Action at round t (0-based) given the rewards of rounds 0..t-1. `seed`
// indexes the rule's internal randomness.
using KlRule =
    std::function<std::int64_t(std::span<const int> rewards, std::uint32_t seed)>;

struct KlCheck {
  double lhs = 0.0;  // KL of the trajectory laws
  double rhs = 0.0;  // sum_a E_P[N(a)] kl(P_a || Q_a)
  std::vector<double> expected_counts;  // E_P[N(a)]
};

// Exhaustive enumeration over reward sequences (and `num_seeds` uniformly
// weighted seeds). Requires num_seeds * 2^rounds <= 2^20, num_seeds <= 2^10.
KlCheck KlDecomposition(std::span<const double> p, std::span<const double> q,
                        const KlRule& rule, int rounds,
                        std::uint32_t num_seeds = 1);

// Plays `first` and moves to the next action (cyclically) after a 0 reward.
KlRule SwitchOnZeroRule(std::int64_t first, std::int64_t num_actions);
// Uniformly random lookup table from reward history to action.
KlRule RandomTableRule(int rounds, std::int64_t num_actions,
                       std::uint64_t seed);

}  // namespace mglab

#endif  // MGLAB_HARD_HPP_
