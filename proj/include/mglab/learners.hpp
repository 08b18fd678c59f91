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

// Decentralized V-learning. Every player runs its own learner that only sees
// (step, state, own action, own reward, next state); the driver plays all m
// learners in lockstep on one simulator and records a RunHistory.

#ifndef MGLAB_LEARNERS_HPP_
#define MGLAB_LEARNERS_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mglab/bandit.hpp"
#include "mglab/game.hpp"
#include "mglab/rng.hpp"

namespace mglab {

enum class Algorithm { kCce, kCe };

std::string AlgorithmName(Algorithm a);

struct LearnerParams {
  std::int64_t episodes = 1;
  double bonus_c = 0.5;
  // <= 0 selects log(m * max A * H * S * K / (p * eps)).
  double iota = 0.0;
  double p = 0.05;
  double eps = 0.05;

  double ResolvedIota(const MarkovGame& game) const;
};

// eta_t and beta_t for each algorithm; t >= 1.
double CceStepSize(std::int64_t t, int horizon, int num_actions, double iota);
double CceBonus(std::int64_t t, int horizon, int num_actions, double iota,
                double c);
double CeStepSize(std::int64_t t, int num_actions, double iota);
double CeBonus(std::int64_t t, int horizon, int num_actions, double iota,
               double c);

// Per-player learner interface. Steps are 0-based; `next_state` is ignored
// at the last step.
class VLearner {
 public:
  VLearner(int horizon, int num_states, int num_actions, double iota,
           double bonus_c);
  virtual ~VLearner() = default;

  // Computes the action distribution in force at (h, s), samples an action
  // and remembers both until Observe(h, ...).
  virtual int Act(int h, int s, RngStream& rng) = 0;
  // Distribution used by the last Act(h, ...).
  std::span<const double> LastDistribution(int h) const {
    return last_dist_[h];
  }
  virtual void Observe(int h, int s, int action, double reward,
                       int next_state) = 0;

  double Upper(int h, int s) const { return upper_[Cell(h, s)]; }
  double Lower(int h, int s) const { return lower_[Cell(h, s)]; }
  std::int64_t Visits(int h, int s) const { return visits_[Cell(h, s)]; }
  // Distribution the learner would play at (h, s) now (no state change).
  virtual std::vector<double> CurrentDistribution(int h, int s) const = 0;

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  double iota() const { return iota_; }
  double bonus_c() const { return bonus_c_; }

 protected:
  std::size_t Cell(int h, int s) const {
    return static_cast<std::size_t>(h) * num_states_ + s;
  }
  // V_{h+1}(next) with V_{H} = 0.
  double UpperNext(int h, int next_state) const {
    return h + 1 < horizon_ ? upper_[Cell(h + 1, next_state)] : 0.0;
  }
  double LowerNext(int h, int next_state) const {
    return h + 1 < horizon_ ? lower_[Cell(h + 1, next_state)] : 0.0;
  }
  // Normalised loss [H - h - (r + min{V_{h+1}(s'), H - h - 1})] / H for
  // 0-based h.
  double BanditLoss(int h, double reward, int next_state) const;
  // Shared optimistic / pessimistic value updates with step alpha_t and
  // bonus beta; the lower estimate is clipped at 0.
  void UpdateValues(int h, int s, std::int64_t t, double reward,
                    int next_state, double beta);

  int horizon_;
  int num_states_;
  int num_actions_;
  double iota_;
  double bonus_c_;
  std::vector<double> upper_;
  std::vector<double> lower_;
  std::vector<std::int64_t> visits_;
  std::vector<std::vector<double>> last_dist_;
};

// Exponential weights on the alpha-averaged loss, with step eta_t / alpha_t.
class CceVLearner final : public VLearner {
 public:
  CceVLearner(int horizon, int num_states, int num_actions, double iota,
              double bonus_c);

  int Act(int h, int s, RngStream& rng) override;
  void Observe(int h, int s, int action, double reward,
               int next_state) override;
  std::vector<double> CurrentDistribution(int h, int s) const override;
  std::span<const double> AveragedLoss(int h, int s) const {
    return {avg_loss_.data() + Cell(h, s) * num_actions_,
            static_cast<std::size_t>(num_actions_)};
  }

 private:
  std::vector<double> policy_;    // mu_h(.|s), [cell][a]
  std::vector<double> avg_loss_;  // L_h(s, .), [cell][a]
};

// Mixed-expert FTRL at every (h, s).
class CeVLearner final : public VLearner {
 public:
  CeVLearner(int horizon, int num_states, int num_actions, double iota,
             double bonus_c);

  int Act(int h, int s, RngStream& rng) override;
  void Observe(int h, int s, int action, double reward,
               int next_state) override;
  std::vector<double> CurrentDistribution(int h, int s) const override;

  const MixedExpert& Bandit(int h, int s) const { return bandits_[Cell(h, s)]; }
  // Largest fixed-point residual seen so far.
  double max_residual() const { return max_residual_; }

 private:
  struct Pending {
    MixedExpertProposal proposal;
    int expert = 0;
    int action = 0;
  };
  std::vector<MixedExpert> bandits_;
  std::vector<Pending> pending_;  // one per step
  double max_residual_ = 0.0;
};

struct RunTelemetry {
  double max_fixed_point_residual = 0.0;
  // Episodes in which some (player, visited state) did not advance exactly
  // one sub-expert counter.
  std::int64_t subexpert_violations = 0;
  // Times some learner had Lower > Upper or Lower outside [0, H].
  std::int64_t bound_violations = 0;

  bool operator==(const RunTelemetry&) const = default;
};

// Chronological archive of visits. Visit indices l are 1-based, episodes k
// are 1-based.
class RunHistory {
 public:
  RunHistory() = default;
  RunHistory(Algorithm algorithm, int horizon, int num_states,
             std::vector<int> num_actions, int initial_state);

  Algorithm algorithm() const { return algorithm_; }
  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_players() const { return static_cast<int>(num_actions_.size()); }
  const std::vector<int>& num_actions() const { return num_actions_; }
  int initial_state() const { return initial_state_; }
  std::int64_t episodes() const { return episodes_; }

  // N_h^k(s): visits to (h, s) in episodes before k.
  std::int64_t VisitsBefore(int h, int s, std::int64_t k) const;
  std::int64_t TotalVisits(int h, int s) const {
    return static_cast<std::int64_t>(cells_[Cell(h, s)].episodes.size());
  }
  // k_h^l(s).
  std::int64_t EpisodeOfVisit(int h, int s, std::int64_t l) const {
    return cells_[Cell(h, s)].episodes[l - 1];
  }
  // mu_{h,i}^{k_h^l(s)}(. | s).
  std::span<const double> VisitDistribution(int h, int s, std::int64_t l,
                                            int player) const;
  std::span<const std::int64_t> VisitEpisodes(int h, int s) const {
    return cells_[Cell(h, s)].episodes;
  }

  // Snapshots of (upper, lower) value at (step 0, s1) at the start of
  // episode k, per player.
  double UpperSnapshot(std::int64_t k, int player) const {
    return upper_s1_[(k - 1) * num_players() + player];
  }
  double LowerSnapshot(std::int64_t k, int player) const {
    return lower_s1_[(k - 1) * num_players() + player];
  }
  bool has_snapshots() const {
    return static_cast<std::int64_t>(upper_s1_.size()) ==
           episodes_ * num_players();
  }

  std::span<const double> FinalDistribution(int h, int s, int player) const;
  bool has_final_distributions() const { return !final_.empty(); }

  const RunTelemetry& telemetry() const { return telemetry_; }
  RunTelemetry& mutable_telemetry() { return telemetry_; }

  // Builders used by the drivers and the deserialiser.
  void BeginEpisode(std::span<const double> upper,
                    std::span<const double> lower);
  void AddVisit(int h, int s, std::int64_t k,
                std::span<const std::span<const double>> dists);
  void SetFinalDistribution(int h, int s, int player,
                            std::span<const double> dist);
  void SetEpisodes(std::int64_t k) { episodes_ = k; }

  // First k episodes only; visits and snapshots after k are dropped.
  RunHistory Truncated(std::int64_t k) const;

  // Throws unless visits are strictly increasing, sum to K per step, and
  // every stored distribution sums to 1.
  void Validate() const;

  bool operator==(const RunHistory&) const = default;

 private:
  std::size_t Cell(int h, int s) const {
    return static_cast<std::size_t>(h) * num_states_ + s;
  }
  struct CellData {
    std::vector<std::int64_t> episodes;
    std::vector<double> dists;  // [visit][sum of actions]
    bool operator==(const CellData&) const = default;
  };

  Algorithm algorithm_ = Algorithm::kCce;
  int horizon_ = 0;
  int num_states_ = 0;
  std::vector<int> num_actions_;
  std::vector<int> prefix_;
  int sum_actions_ = 0;
  int initial_state_ = 0;
  std::int64_t episodes_ = 0;
  std::vector<CellData> cells_;
  std::vector<double> upper_s1_;
  std::vector<double> lower_s1_;
  std::vector<double> final_;  // [cell][sum of actions]
  RunTelemetry telemetry_;
};

// Hooks for tests and instrumentation; both optional.
struct RunObserver {
  std::function<void(std::int64_t k, std::span<const VLearner* const>)>
      on_episode_start;
  std::function<void(std::int64_t k, const EpisodeTrace&,
                     std::span<const VLearner* const>)>
      on_episode_end;
};

// Runs the algorithm for params.episodes episodes from master seed `seed`.
// Randomness: environment draws come from stream "env"; player i's action
// draws at (h, s) from stream ("learner", i, h, s).
RunHistory RunVLearning(Algorithm algorithm, const MarkovGame& game,
                        const LearnerParams& params, std::uint64_t seed,
                        const RunObserver& observer = {});

inline RunHistory CceVLearning(const MarkovGame& game,
                               const LearnerParams& params, std::uint64_t seed,
                               const RunObserver& observer = {}) {
  return RunVLearning(Algorithm::kCce, game, params, seed, observer);
}
inline RunHistory CeVLearning(const MarkovGame& game,
                              const LearnerParams& params, std::uint64_t seed,
                              const RunObserver& observer = {}) {
  return RunVLearning(Algorithm::kCe, game, params, seed, observer);
}

// (1/K) sum_k (upper^k - lower^k)(s1) per player.
std::vector<double> GapBoundFromConfidence(const RunHistory& history);

}  // namespace mglab

#endif  // MGLAB_LEARNERS_HPP_
