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

#include "mglab/hard.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mglab/error.hpp"
#include "mglab/rng.hpp"

namespace mglab {
namespace {

constexpr const char* kOrigin = "hard-instances";

std::int64_t CheckedProduct(const std::vector<int>& num_actions) {
  Require(!num_actions.empty(), kOrigin, "need at least one player");
  std::int64_t size = 1;
  for (int a : num_actions) {
    Require(a >= 1, kOrigin, "every player needs an action");
    size *= a;
    Require(size <= kMaxEnumeration, kOrigin,
            "joint action space exceeds 2^20");
  }
  return size;
}

}  // namespace

std::vector<std::int64_t> HammingOneNet(int m) {
  Require(m >= 1 && m <= 24, kOrigin, "hamming net needs 1 <= m <= 24");
  int k = 1;
  while ((1 << (k + 1)) - 1 <= m) ++k;
  const int n = (1 << k) - 1;

  // Data bits sit at positions whose 1-based index is not a power of two;
  // parity bit 2^b - 1 absorbs bit b of the syndrome.
  std::vector<int> data;
  for (int j = 0; j < n; ++j) {
    if (((j + 1) & j) != 0) data.push_back(j);
  }
  std::vector<std::int64_t> code;
  code.reserve(std::size_t{1} << data.size());
  for (std::uint64_t d = 0; d < (std::uint64_t{1} << data.size()); ++d) {
    std::int64_t word = 0;
    int syndrome = 0;
    for (std::size_t b = 0; b < data.size(); ++b) {
      if ((d >> b) & 1) {
        word |= std::int64_t{1} << data[b];
        syndrome ^= data[b] + 1;
      }
    }
    for (int b = 0; b < k; ++b) {
      if ((syndrome >> b) & 1) word |= std::int64_t{1} << ((1 << b) - 1);
    }
    code.push_back(word);
  }

  std::vector<std::int64_t> net;
  net.reserve(code.size() << (m - n));
  for (std::int64_t suffix = 0; suffix < (std::int64_t{1} << (m - n));
       ++suffix) {
    for (std::int64_t w : code) net.push_back(w | (suffix << n));
  }
  std::sort(net.begin(), net.end());
  return net;
}

std::vector<std::int64_t> BlockOneNet(int m, int k) {
  Require(m >= 1 && k >= 1, kOrigin, "block net needs m >= 1 and k >= 1");
  CheckedProduct(std::vector<int>(m, 2 * k));
  const std::vector<std::int64_t> base = HammingOneNet(m);
  if (k == 1) return base;

  JointActionSpace space(std::vector<int>(m, 2 * k));
  std::vector<int> blocks(m, 0), acts(m);
  std::vector<std::int64_t> net;
  // Odometer over [k]^m block coordinates.
  while (true) {
    const int sum = std::accumulate(blocks.begin(), blocks.end(), 0);
    if (sum % k == 0) {
      for (std::int64_t w : base) {
        for (int i = 0; i < m; ++i) acts[i] = 2 * blocks[i] + ((w >> i) & 1);
        net.push_back(space.Encode(acts));
      }
    }
    int i = 0;
    while (i < m && ++blocks[i] == k) blocks[i++] = 0;
    if (i == m) break;
  }
  std::sort(net.begin(), net.end());
  return net;
}

bool IsOneNet(const JointActionSpace& space,
              std::span<const std::int64_t> net) {
  CheckedProduct(space.num_actions());
  std::vector<char> covered(static_cast<std::size_t>(space.size()), 0);
  for (std::int64_t a : net) {
    Require(a >= 0 && a < space.size(), kOrigin, "net point out of range");
    for (int i = 0; i < space.num_players(); ++i) {
      for (int b = 0; b < space.num_actions(i); ++b) {
        covered[space.WithAction(a, i, b)] = 1;
      }
    }
  }
  return std::all_of(covered.begin(), covered.end(),
                     [](char c) { return c != 0; });
}

std::vector<double> OneStepHardGame::Means() const {
  const JointActionSpace space(num_actions);
  const int m = static_cast<int>(num_actions.size());
  std::vector<double> means(static_cast<std::size_t>(space.size()) * m, 0.5);
  for (std::int64_t a : good) {
    for (int i = 0; i < m; ++i) means[a * m + i] = 0.5 + eps;
  }
  return means;
}

MarkovGame OneStepHardGame::ToGame() const {
  return MakeOneStepGame(num_actions, Means(), RewardKind::kBernoulli);
}

MarkovGame OneStepHardGame::ToMdp(int horizon) const {
  return EmbedOneStepGame(num_actions, good, horizon, eps);
}

OneStepHardGame BuildHardGame(std::vector<int> num_actions,
                              std::vector<std::int64_t> good, double eps,
                              std::string* warning) {
  Require(eps >= 0.0 && eps <= 0.4, kOrigin, "eps must lie in [0, 0.4]");
  CheckedProduct(num_actions);
  std::sort(good.begin(), good.end());
  Require(std::adjacent_find(good.begin(), good.end()) == good.end(), kOrigin,
          "good set has duplicates");
  const JointActionSpace space(num_actions);
  Require(IsOneNet(space, good), kOrigin, "good set is not a 1-net");
  if (warning != nullptr) {
    warning->clear();
    if (num_actions.size() < 4) {
      *warning =
          "m < 4: |D| / |A| may exceed 1/2, lower-bound semantics do not "
          "apply";
    }
  }
  return {std::move(num_actions), std::move(good), eps};
}

OneStepHardGame PermuteGame(const OneStepHardGame& game,
                            const std::vector<std::vector<int>>& perms) {
  const int m = static_cast<int>(game.num_actions.size());
  Require(static_cast<int>(perms.size()) == m, kOrigin,
          "one permutation per player required");
  for (int i = 0; i < m; ++i) {
    std::vector<int> sorted = perms[i];
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> iota(game.num_actions[i]);
    std::iota(iota.begin(), iota.end(), 0);
    Require(sorted == iota, kOrigin,
            "perms[" + std::to_string(i) + "] is not a permutation");
  }
  const JointActionSpace space(game.num_actions);
  OneStepHardGame out = game;
  std::vector<int> acts(m);
  for (std::int64_t& a : out.good) {
    space.Decode(a, acts);
    for (int i = 0; i < m; ++i) acts[i] = perms[i][acts[i]];
    a = space.Encode(acts);
  }
  std::sort(out.good.begin(), out.good.end());
  return out;
}

std::vector<std::int64_t> PureNashSet(const std::vector<int>& num_actions,
                                      std::span<const double> means) {
  const std::int64_t n = CheckedProduct(num_actions);
  const int m = static_cast<int>(num_actions.size());
  Require(static_cast<std::int64_t>(means.size()) == n * m, kOrigin,
          "mean table must have |A| * m entries");
  const JointActionSpace space(num_actions);
  std::vector<std::int64_t> out;
  for (std::int64_t a = 0; a < n; ++a) {
    bool stable = true;
    for (int i = 0; i < m && stable; ++i) {
      const double own = means[a * m + i];
      for (int b = 0; b < num_actions[i]; ++b) {
        if (means[space.WithAction(a, i, b) * m + i] > own) {
          stable = false;
          break;
        }
      }
    }
    if (stable) out.push_back(a);
  }
  return out;
}

double BernoulliKl(double p, double q) {
  Require(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0, kOrigin,
          "Bernoulli KL needs p, q in (0, 1)");
  return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

double BernoulliKlHalf(double eps) {
  Require(eps >= 0.0 && eps < 0.5, kOrigin, "eps must lie in [0, 0.5)");
  return -0.5 * std::log1p(-4.0 * eps * eps);
}

namespace {

struct KlEnumerator {
  std::span<const double> p, q;
  const KlRule* rule = nullptr;
  int rounds = 0;
  double seed_weight = 1.0;
  std::uint32_t seed = 0;
  std::vector<int> rewards;
  std::vector<std::int64_t> actions;
  std::vector<double>* counts = nullptr;
  // Deterministic path: accumulate directly. Randomised: merge by trajectory.
  double lhs = 0.0;
  std::map<std::pair<std::vector<std::int64_t>, std::vector<int>>,
           std::pair<double, double>>* merged = nullptr;

  void Walk(double lp, double lq) {
    const int t = static_cast<int>(rewards.size());
    if (t == rounds) {
      if (merged != nullptr) {
        auto& cell = (*merged)[{actions, rewards}];
        cell.first += seed_weight * std::exp(lp);
        cell.second += seed_weight * std::exp(lq);
      } else {
        lhs += std::exp(lp) * (lp - lq);
      }
      return;
    }
    const std::int64_t a = (*rule)(rewards, seed);
    Require(a >= 0 && a < static_cast<std::int64_t>(p.size()), kOrigin,
            "rule returned an invalid action");
    (*counts)[a] += seed_weight * std::exp(lp);
    actions.push_back(a);
    for (int r : {0, 1}) {
      rewards.push_back(r);
      Walk(lp + std::log(r ? p[a] : 1.0 - p[a]),
           lq + std::log(r ? q[a] : 1.0 - q[a]));
      rewards.pop_back();
    }
    actions.pop_back();
  }
};

}  // namespace

KlCheck KlDecomposition(std::span<const double> p, std::span<const double> q,
                        const KlRule& rule, int rounds,
                        std::uint32_t num_seeds) {
  Require(!p.empty() && p.size() == q.size(), kOrigin,
          "P and Q need one mean per action");
  Require(rounds >= 1 && rounds <= 20, kOrigin, "rounds must lie in [1, 20]");
  Require(num_seeds >= 1 && num_seeds <= 1024, kOrigin,
          "seed space must lie in [1, 2^10]");
  Require((static_cast<std::int64_t>(num_seeds) << rounds) <= kMaxEnumeration,
          kOrigin, "trajectory enumeration exceeds 2^20");
  KlCheck out;
  out.expected_counts.assign(p.size(), 0.0);
  std::vector<double> kl(p.size());
  for (std::size_t a = 0; a < p.size(); ++a) kl[a] = BernoulliKl(p[a], q[a]);

  std::map<std::pair<std::vector<std::int64_t>, std::vector<int>>,
           std::pair<double, double>>
      merged;
  KlEnumerator walker;
  walker.p = p;
  walker.q = q;
  walker.rule = &rule;
  walker.rounds = rounds;
  walker.seed_weight = 1.0 / num_seeds;
  walker.counts = &out.expected_counts;
  if (num_seeds > 1) walker.merged = &merged;
  for (std::uint32_t s = 0; s < num_seeds; ++s) {
    walker.seed = s;
    walker.Walk(0.0, 0.0);
  }
  if (num_seeds > 1) {
    for (const auto& [key, pq] : merged) {
      if (pq.first > 0.0) out.lhs += pq.first * std::log(pq.first / pq.second);
    }
  } else {
    out.lhs = walker.lhs;
  }
  for (std::size_t a = 0; a < p.size(); ++a) {
    out.rhs += out.expected_counts[a] * kl[a];
  }
  return out;
}

KlRule SwitchOnZeroRule(std::int64_t first, std::int64_t num_actions) {
  Require(num_actions >= 1 && first >= 0 && first < num_actions, kOrigin,
          "invalid switch rule");
  return [first, num_actions](std::span<const int> rewards, std::uint32_t) {
    std::int64_t a = first;
    for (int r : rewards) {
      if (r == 0) a = (a + 1) % num_actions;
    }
    return a;
  };
}

KlRule RandomTableRule(int rounds, std::int64_t num_actions,
                       std::uint64_t seed) {
  Require(rounds >= 1 && rounds <= 20 && num_actions >= 1, kOrigin,
          "invalid table rule");
  // Node for a history of length t with bits r: (2^t - 1) + r.
  RngStream rng = RngStream::Derive(seed, "kl-rule");
  std::vector<std::int64_t> table((std::size_t{1} << rounds) - 1);
  for (auto& a : table) {
    a = static_cast<std::int64_t>(rng.Below(static_cast<std::uint64_t>(num_actions)));
  }
  return [table = std::move(table)](std::span<const int> rewards,
                                    std::uint32_t) {
    std::size_t node = 0;
    for (int r : rewards) node = (node << 1) | static_cast<std::size_t>(r);
    return table[((std::size_t{1} << rewards.size()) - 1) + node];
  };
}

}  // namespace mglab
