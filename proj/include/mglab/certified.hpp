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

// The certified correlated policy of a V-learning run, and exact evaluators
// for it.
//
// The policy keeps a latent episode index k. At step h in state s it looks up
// t = N_h^k(s); t = 0 switches to uniform play for the rest of the episode,
// otherwise it resamples l ~ alpha_t^l, moves to k_h^l(s) and plays the
// product of the distributions stored at that visit.
//
// Exact evaluation is a backward DP over augmented states (h, k, s). Since
// V_h(k, s) depends on k only through t = N_h^k(s), each (h, s) holds the
// running average W_t = (1 - alpha_t) W_{t-1} + alpha_t q_t over its visit
// list, where q_l is the one-step lookahead at visit l. Slot 0 holds the
// uniform-play continuation.

#ifndef MGLAB_CERTIFIED_HPP_
#define MGLAB_CERTIFIED_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "mglab/game.hpp"
#include "mglab/learners.hpp"
#include "mglab/rng.hpp"
#include "mglab/schedule.hpp"

namespace mglab {

// Largest K evaluated exactly.
inline constexpr std::int64_t kMaxExactEpisodes = 100000;

enum class DeviationMode { kBestResponse, kBestModification };

class CertifiedPolicySampler {
 public:
  CertifiedPolicySampler(const RunHistory& history, RngStream rng);

  // Draws k uniformly from [K] and rewinds to step 0.
  void BeginEpisode();
  // Joint action at the current step; steps must be visited in order.
  void Act(int h, int s, std::span<int> actions);

  std::int64_t context() const { return k_; }
  bool uniform_mode() const { return uniform_; }
  const RunHistory& history() const { return *history_; }

 private:
  const RunHistory* history_;
  RngStream rng_;
  AlphaSampler alpha_;
  std::int64_t k_ = 0;
  int next_step_ = 0;
  bool uniform_ = false;
};

// A deterministic Markov policy for one player: action per (h * S + s).
struct MarkovDeviation {
  int player = 0;
  std::vector<int> actions;
  double value = 0.0;  // exact value against the certified policy
  int passes = 0;      // improvement passes used by the search
};

// Actor running the certified policy, optionally with one player replaced by
// a Markov deviation. A call at h = 0 starts a new episode.
Actor CertifiedActor(CertifiedPolicySampler& sampler,
                     const MarkovDeviation* deviation = nullptr);

class CertifiedEvaluator {
 public:
  CertifiedEvaluator(const MarkovGame& game, const RunHistory& history);

  // (1/K) sum_k V_1^{pi^k}(s1) per player.
  std::vector<double> Value() const;
  // Deviation by a player that also observes the latent index k. Upper
  // bounds any deviation that only sees the history.
  double OmniscientDeviation(int player, DeviationMode mode) const;
  // Exact value for `player` when it follows `actions` and the others follow
  // the certified policy.
  double MarkovDeviationValue(int player, std::span<const int> actions) const;
  // Local search over deterministic Markov deviations: each pass fixes the
  // reach distribution of the current deviation and improves every step
  // backwards, which never lowers the value. Stops at a fixed point.
  MarkovDeviation BestMarkovDeviation(int player, int max_passes = 50) const;

  const MarkovGame& game() const { return *game_; }
  const RunHistory& history() const { return *history_; }

 private:
  enum class Kind { kValue, kBestResponse, kBestModification, kMarkov };

  std::size_t Cell(int h, int s) const {
    return static_cast<std::size_t>(h) * S_ + s;
  }
  std::int64_t Visits(int h, int s) const { return visits_[Cell(h, s)]; }
  // Context count at h + 1 for visit l (l = 0: uniform slot).
  std::int64_t NextSlot(int h, int s, std::int64_t l, int next) const {
    return next_slot_[Cell(h, s)][static_cast<std::size_t>(l) * S_ + next];
  }
  void Dists(int h, int s, std::int64_t l,
             std::vector<std::span<const double>>& out) const;
  // Per own action a_i: E_{a_-i}[r_i + sum_s' P(s') cont(s')] at visit l,
  // where cont reads `width`-strided slot tables of step h + 1.
  void OwnActionValues(int h, int s, std::int64_t l, int player,
                       const std::vector<std::vector<double>>& next_tables,
                       std::vector<double>& scratch,
                       std::vector<double>& out) const;
  // Mass of the initial contexts over slots of (0, s1).
  std::vector<double> InitialSlots() const;
  // Backward pass for one player (or all players in kValue mode) returning
  // per-(h, s) slot tables.
  std::vector<std::vector<double>> Backward(Kind kind, int player,
                                            std::span<const int> actions) const;
  double Top(const std::vector<std::vector<double>>& tables, int width,
             int index) const;

  const MarkovGame* game_;
  const RunHistory* history_;
  int m_, H_, S_;
  std::int64_t K_;
  std::vector<std::int64_t> visits_;
  std::vector<std::vector<std::int64_t>> next_slot_;
  std::vector<std::vector<double>> uniform_;  // per player uniform dist
};

inline std::vector<double> CertifiedExactValue(const MarkovGame& game,
                                               const RunHistory& history) {
  return CertifiedEvaluator(game, history).Value();
}
inline double CertifiedOmniscientDeviation(const MarkovGame& game,
                                           const RunHistory& history,
                                           int player, DeviationMode mode) {
  return CertifiedEvaluator(game, history).OmniscientDeviation(player, mode);
}

// Monte Carlo value of the certified policy (with an optional deviation).
// Sampler draws come from stream ("certified", 0) of `seed`, the environment
// from ("certified-env", 0).
MonteCarloEstimate CertifiedMonteCarlo(const MarkovGame& game,
                                       const RunHistory& history,
                                       std::int64_t episodes,
                                       std::uint64_t seed,
                                       const MarkovDeviation* deviation = nullptr);

struct CertifiedGapRow {
  int player = 0;
  double exact_value = 0.0;
  double omniscient_br = 0.0;
  double omniscient_mod = 0.0;
  double confidence_gap = 0.0;
};

std::vector<CertifiedGapRow> CertifiedGapReport(const MarkovGame& game,
                                                const RunHistory& history);

// Header plus one row per player, %.17g floats.
std::string CertifiedGapCsv(const std::vector<CertifiedGapRow>& rows);

}  // namespace mglab

#endif  // MGLAB_CERTIFIED_HPP_
