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

#include "mglab/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mglab/error.hpp"
#include "mglab/schedule.hpp"

namespace mglab {

namespace {

constexpr const char* kOrigin = "bandit-core";

double Residual(std::span<const std::vector<double>> rows,
                std::span<const double> p) {
  const std::size_t A = rows.size();
  double worst = 0.0;
  for (std::size_t a = 0; a < A; ++a) {
    double mixed = 0.0;
    for (std::size_t b = 0; b < A; ++b) mixed += p[b] * rows[b][a];
    worst = std::max(worst, std::abs(p[a] - mixed));
  }
  return worst;
}

// Solves (I - Q^T) p = 0 with sum(p) = 1 by Gaussian elimination with
// partial pivoting; the last equation is replaced by the normalisation.
std::vector<double> DirectStationary(std::span<const std::vector<double>> rows) {
  const std::size_t A = rows.size();
  std::vector<double> m(A * A), rhs(A, 0.0);
  for (std::size_t r = 0; r < A; ++r) {
    for (std::size_t c = 0; c < A; ++c) {
      m[r * A + c] = (r == c ? 1.0 : 0.0) - rows[c][r];
    }
  }
  for (std::size_t c = 0; c < A; ++c) m[(A - 1) * A + c] = 1.0;
  rhs[A - 1] = 1.0;
  for (std::size_t col = 0; col < A; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < A; ++r) {
      if (std::abs(m[r * A + col]) > std::abs(m[piv * A + col])) piv = r;
    }
    if (m[piv * A + col] == 0.0) continue;
    if (piv != col) {
      for (std::size_t c = 0; c < A; ++c) std::swap(m[col * A + c], m[piv * A + c]);
      std::swap(rhs[col], rhs[piv]);
    }
    for (std::size_t r = col + 1; r < A; ++r) {
      const double f = m[r * A + col] / m[col * A + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < A; ++c) m[r * A + c] -= f * m[col * A + c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> p(A, 0.0);
  for (std::size_t r = A; r-- > 0;) {
    double acc = rhs[r];
    for (std::size_t c = r + 1; c < A; ++c) acc -= m[r * A + c] * p[c];
    p[r] = m[r * A + r] != 0.0 ? acc / m[r * A + r] : 0.0;
  }
  double total = 0.0;
  for (double& x : p) {
    x = std::max(x, 0.0);
    total += x;
  }
  if (!(total > 0.0)) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(A));
  } else {
    for (double& x : p) x /= total;
  }
  return p;
}

}  // namespace

double FtrlStepSize(std::int64_t t, int num_actions, double iota) {
  if (t <= 0) return 0.0;
  return std::sqrt(iota / (static_cast<double>(num_actions) *
                           static_cast<double>(t)));
}

double DefaultBanditIota(int horizon, int num_actions, std::int64_t rounds,
                         double p) {
  return 4.0 * std::log(8.0 * horizon * num_actions *
                        static_cast<double>(rounds) / p);
}

std::vector<double> FtrlDistribution(const FtrlExpertState& expert, double u) {
  const int A = expert.num_actions;
  std::vector<double> q(A, 1.0 / A);
  if (expert.visits == 0) return q;
  const double scale = FtrlStepSize(expert.visits, A, expert.iota) / u;
  const double lo =
      *std::min_element(expert.cum_weighted.begin(), expert.cum_weighted.end());
  double total = 0.0;
  for (int a = 0; a < A; ++a) {
    q[a] = std::exp(-scale * (expert.cum_weighted[a] - lo));
    total += q[a];
  }
  for (double& x : q) x /= total;
  return q;
}

std::vector<double> LossEstimate(std::span<const double> q, double gamma,
                                 int played, double realized) {
  std::vector<double> est(q.size(), 0.0);
  est[played] = realized / (q[played] + gamma);
  return est;
}

FixedPointResult SolveExpertFixedPoint(
    std::span<const std::vector<double>> rows) {
  const std::size_t A = rows.size();
  Require(A >= 1, kOrigin, "fixed point needs at least one sub-expert");
  FixedPointResult out;
  out.p = DirectStationary(rows);
  out.residual = Residual(rows, out.p);
  if (out.residual <= kFixedPointTolerance) return out;
  // Ill-conditioned elimination: refine by power iteration.
  std::vector<double> next(A);
  for (int it = 0; it < 100000 && out.residual > kFixedPointTolerance; ++it) {
    for (std::size_t a = 0; a < A; ++a) {
      double mixed = 0.0;
      for (std::size_t b = 0; b < A; ++b) mixed += out.p[b] * rows[b][a];
      next[a] = mixed;
    }
    double total = 0.0;
    for (double x : next) total += x;
    for (std::size_t a = 0; a < A; ++a) out.p[a] = next[a] / total;
    out.residual = Residual(rows, out.p);
  }
  if (out.residual > kFixedPointTolerance) {
    throw Error(ErrorKind::kNumerical, kOrigin,
                "mixed-expert fixed point residual " +
                    std::to_string(out.residual) + " exceeds 1e-9");
  }
  return out;
}

MixedExpert::MixedExpert(int num_actions, int horizon, double iota)
    : num_actions_(num_actions), horizon_(horizon), iota_(iota) {
  Require(num_actions >= 1, kOrigin, "need at least one action");
  Require(horizon >= 1, kOrigin, "weight horizon must be >= 1");
  experts_.assign(num_actions, FtrlExpertState(num_actions, iota));
}

MixedExpertProposal MixedExpert::Propose() const {
  MixedExpertProposal prop;
  prop.round = rounds_ + 1;
  prop.log_u = LogWeightRatio(prop.round, horizon_);
  const double u = std::exp(prop.log_u);
  prop.q.reserve(num_actions_);
  for (const auto& e : experts_) prop.q.push_back(FtrlDistribution(e, u));
  prop.mix = SolveExpertFixedPoint(prop.q);
  return prop;
}

void MixedExpert::Commit(const MixedExpertProposal& proposal, int expert,
                         int action, double realized_loss) {
  Require(proposal.round == rounds_ + 1, kOrigin,
          "proposal does not belong to the current round");
  FtrlExpertState& e = experts_[expert];
  e.visits += 1;
  const double gamma = FtrlStepSize(e.visits, num_actions_, iota_);
  const double est =
      realized_loss / (proposal.q[expert][action] + gamma);
  e.cum_weighted[action] += std::exp(proposal.log_u) * est;
  rounds_ += 1;
}

MixedExpert::Step MixedExpert::Play(
    const std::function<double(int)>& loss_of_action, RngStream& rng) {
  const MixedExpertProposal prop = Propose();
  Step step;
  step.expert = rng.Categorical(prop.mix.p);
  step.action = rng.Categorical(prop.q[step.expert]);
  step.loss = loss_of_action(step.action);
  step.played = prop.mix.p;
  step.residual = prop.mix.residual;
  Commit(prop, step.expert, step.action, step.loss);
  return step;
}

SwapRegretResult SwapRegret(std::span<const double> weights,
                            std::span<const std::vector<double>> mean_losses,
                            std::span<const int> actions, SwapMode mode,
                            std::span<const std::vector<double>> played) {
  const std::size_t T = actions.size();
  Require(weights.size() == T && mean_losses.size() == T, kOrigin,
          "swap regret inputs have inconsistent lengths");
  Require(mode == SwapMode::kVsAction || played.size() == T, kOrigin,
          "distribution mode needs one played distribution per round");
  const int A = T == 0 ? 0 : static_cast<int>(mean_losses[0].size());
  SwapRegretResult out;
  out.modification.resize(A);
  for (int b = 0; b < A; ++b) out.modification[b] = b;
  if (T == 0) return out;
  std::vector<double> mass(static_cast<std::size_t>(A) * A, 0.0);
  double played_cost = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    played_cost += weights[i] * mean_losses[i][actions[i]];
    for (int b = 0; b < A; ++b) {
      const double route = mode == SwapMode::kVsAction
                               ? (actions[i] == b ? 1.0 : 0.0)
                               : played[i][b];
      if (route == 0.0) continue;
      for (int c = 0; c < A; ++c) {
        mass[b * A + c] += weights[i] * route * mean_losses[i][c];
      }
    }
  }
  double routed = 0.0;
  for (int b = 0; b < A; ++b) {
    int best = b;
    for (int c = 0; c < A; ++c) {
      if (mass[b * A + c] < mass[b * A + best]) best = c;
    }
    out.modification[b] = best;
    routed += mass[b * A + best];
  }
  out.regret = played_cost - routed;
  return out;
}

double WeightedExternalRegret(std::span<const double> weights,
                              std::span<const std::vector<double>> mean_losses,
                              std::span<const int> actions) {
  const std::size_t T = actions.size();
  Require(weights.size() == T && mean_losses.size() == T, kOrigin,
          "external regret inputs have inconsistent lengths");
  if (T == 0) return 0.0;
  const std::size_t A = mean_losses[0].size();
  std::vector<double> fixed(A, 0.0);
  double played_cost = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    played_cost += weights[i] * mean_losses[i][actions[i]];
    for (std::size_t c = 0; c < A; ++c) {
      fixed[c] += weights[i] * mean_losses[i][c];
    }
  }
  return played_cost - *std::min_element(fixed.begin(), fixed.end());
}

SwapRegretTracker::SwapRegretTracker(int num_actions, int horizon)
    : num_actions_(num_actions),
      horizon_(horizon),
      by_action_(static_cast<std::size_t>(num_actions) * num_actions, 0.0),
      by_dist_(static_cast<std::size_t>(num_actions) * num_actions, 0.0),
      fixed_(num_actions, 0.0) {}

void SwapRegretTracker::Push(std::span<const double> mean_loss, int action,
                             std::span<const double> played) {
  rounds_ += 1;
  const double a = Alpha(rounds_, horizon_);
  const double keep = 1.0 - a;
  const int A = num_actions_;
  played_cost_ = keep * played_cost_ + a * mean_loss[action];
  for (int b = 0; b < A; ++b) {
    for (int c = 0; c < A; ++c) {
      double& x = by_action_[b * A + c];
      x = keep * x + (b == action ? a * mean_loss[c] : 0.0);
      double& y = by_dist_[b * A + c];
      y = keep * y + a * played[b] * mean_loss[c];
    }
  }
  for (int c = 0; c < A; ++c) fixed_[c] = keep * fixed_[c] + a * mean_loss[c];
}

double SwapRegretTracker::SwapVsAction() const {
  const int A = num_actions_;
  double routed = 0.0;
  for (int b = 0; b < A; ++b) {
    routed += *std::min_element(by_action_.begin() + b * A,
                                by_action_.begin() + (b + 1) * A);
  }
  return played_cost_ - routed;
}

double SwapRegretTracker::SwapVsDistribution() const {
  const int A = num_actions_;
  double routed = 0.0;
  for (int b = 0; b < A; ++b) {
    routed += *std::min_element(by_dist_.begin() + b * A,
                                by_dist_.begin() + (b + 1) * A);
  }
  return played_cost_ - routed;
}

double SwapRegretTracker::External() const {
  return played_cost_ - *std::min_element(fixed_.begin(), fixed_.end());
}

}  // namespace mglab
