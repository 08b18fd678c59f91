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

// Adversarial bandits with low weighted swap regret: FTRL sub-experts with
// predictable weights, mixed through the stationary distribution of the
// sub-expert matrix.

#ifndef MGLAB_BANDIT_HPP_
#define MGLAB_BANDIT_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mglab/rng.hpp"

namespace mglab {

// sqrt(iota / (A t)); zero at t = 0.
double FtrlStepSize(std::int64_t t, int num_actions, double iota);

// 4 log(8 H A T / p).
double DefaultBanditIota(int horizon, int num_actions, std::int64_t rounds,
                         double p = 0.05);

struct FtrlExpertState {
  int num_actions = 0;
  std::int64_t visits = 0;
  // sum_tau w_tau * lossest_tau(a); nonnegative.
  std::vector<double> cum_weighted;
  double iota = 1.0;

  FtrlExpertState() = default;
  FtrlExpertState(int num_actions, double iota)
      : num_actions(num_actions),
        cum_weighted(static_cast<std::size_t>(num_actions), 0.0),
        iota(iota) {}
};

// q(a) proportional to exp(-(eta_{visits} / u) * cum_weighted(a)), u >= 1.
std::vector<double> FtrlDistribution(const FtrlExpertState& expert, double u);

// Importance-weighted estimate: realized / (q(played) + gamma) at `played`,
// zero elsewhere.
std::vector<double> LossEstimate(std::span<const double> q, double gamma,
                                 int played, double realized);

struct FixedPointResult {
  std::vector<double> p;
  double residual = 0.0;  // || p - p Q ||_inf
};

inline constexpr double kFixedPointTolerance = 1e-9;

// Stationary distribution of the row-stochastic matrix whose row b is
// rows[b]. Throws Error(kNumerical) when the residual exceeds 1e-9.
FixedPointResult SolveExpertFixedPoint(
    std::span<const std::vector<double>> rows);

// One round of the mixed-expert learner, before the loss is observed.
struct MixedExpertProposal {
  std::int64_t round = 0;  // t, 1-based
  double log_u = 0.0;      // log(alpha_t^t / alpha_t^1)
  std::vector<std::vector<double>> q;  // q[b] for every sub-expert
  FixedPointResult mix;
};

class MixedExpert {
 public:
  MixedExpert() = default;
  MixedExpert(int num_actions, int horizon, double iota);

  int num_actions() const { return num_actions_; }
  std::int64_t rounds() const { return rounds_; }
  int horizon() const { return horizon_; }
  double iota() const { return iota_; }
  const std::vector<FtrlExpertState>& experts() const { return experts_; }

  // Weight u_t, every q^{b'} and the mixing distribution for round t + 1.
  MixedExpertProposal Propose() const;
  // Feeds the observed loss to sub-expert b and closes the round.
  void Commit(const MixedExpertProposal& proposal, int expert, int action,
              double realized_loss);

  struct Step {
    int expert = 0;
    int action = 0;
    double loss = 0.0;
    std::vector<double> played;  // distribution the action was drawn from
    double residual = 0.0;
  };
  // Full loop body: propose, sample b ~ p then a ~ q^b, observe, commit.
  Step Play(const std::function<double(int)>& loss_of_action, RngStream& rng);

 private:
  int num_actions_ = 0;
  int horizon_ = 1;
  double iota_ = 1.0;
  std::int64_t rounds_ = 0;
  std::vector<FtrlExpertState> experts_;
};

enum class SwapMode { kVsAction, kVsDistribution };

struct SwapRegretResult {
  double regret = 0.0;
  std::vector<int> modification;  // F(b) for every source action b
};

// Exact weighted swap regret. `mean_losses[i]` is the expected loss vector of
// round i; in kVsDistribution mode `played` holds the distributions p^i.
SwapRegretResult SwapRegret(std::span<const double> weights,
                            std::span<const std::vector<double>> mean_losses,
                            std::span<const int> actions, SwapMode mode,
                            std::span<const std::vector<double>> played = {});

// sum_i w_i (l_i(a^i) - l_i(best fixed action)); may be negative.
double WeightedExternalRegret(std::span<const double> weights,
                              std::span<const std::vector<double>> mean_losses,
                              std::span<const int> actions);

// Online tracker of R_swap(t), the distribution variant and the external
// regret under the weights alpha_t^i, using
// alpha_t^i = (1 - alpha_t) alpha_{t-1}^i for i < t.
class SwapRegretTracker {
 public:
  SwapRegretTracker(int num_actions, int horizon);

  void Push(std::span<const double> mean_loss, int action,
            std::span<const double> played);

  std::int64_t rounds() const { return rounds_; }
  double SwapVsAction() const;
  double SwapVsDistribution() const;
  double External() const;

 private:
  int num_actions_;
  int horizon_;
  std::int64_t rounds_ = 0;
  double played_cost_ = 0.0;
  // [source][target] weighted loss mass routed from source.
  std::vector<double> by_action_;
  std::vector<double> by_dist_;
  std::vector<double> fixed_;  // weighted loss of each fixed action
};

}  // namespace mglab

#endif  // MGLAB_BANDIT_HPP_
