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

#include "mglab/learners.hpp"

#include <algorithm>
#include <cmath>

#include "mglab/error.hpp"
#include "mglab/schedule.hpp"

namespace mglab {

namespace {

constexpr const char* kOrigin = "learners";
constexpr double kSumTolerance = 1e-9;

}  // namespace

std::string AlgorithmName(Algorithm a) {
  return a == Algorithm::kCce ? "cce" : "ce";
}

double LearnerParams::ResolvedIota(const MarkovGame& game) const {
  if (iota > 0.0) return iota;
  Require(p > 0.0 && eps > 0.0, kOrigin, "p and eps must be positive");
  return std::log(static_cast<double>(game.num_players()) *
                  game.max_actions() * game.horizon() * game.num_states() *
                  static_cast<double>(episodes) / (p * eps));
}

double CceStepSize(std::int64_t t, int horizon, int num_actions, double iota) {
  return std::sqrt(horizon * iota /
                   (static_cast<double>(num_actions) * static_cast<double>(t)));
}

double CceBonus(std::int64_t t, int horizon, int num_actions, double iota,
                double c) {
  const double H = horizon;
  const double n = static_cast<double>(t);
  return c * std::sqrt(H * H * H * num_actions * iota / n) +
         2.0 * c * H * H * iota / n;
}

double CeStepSize(std::int64_t t, int num_actions, double iota) {
  return FtrlStepSize(t, num_actions, iota);
}

double CeBonus(std::int64_t t, int horizon, int num_actions, double iota,
               double c) {
  const double H = horizon;
  const double n = static_cast<double>(t);
  return c * H * H * num_actions * std::sqrt(iota / n) +
         2.0 * c * H * H * iota / n;
}

VLearner::VLearner(int horizon, int num_states, int num_actions, double iota,
                   double bonus_c)
    : horizon_(horizon),
      num_states_(num_states),
      num_actions_(num_actions),
      iota_(iota),
      bonus_c_(bonus_c) {
  Require(horizon >= 1 && num_states >= 1 && num_actions >= 1, kOrigin,
          "learner dimensions must be positive");
  Require(iota > 0.0, kOrigin, "iota must be positive");
  Require(bonus_c >= 0.0, kOrigin, "bonus constant must be nonnegative");
  const std::size_t cells = static_cast<std::size_t>(horizon) * num_states;
  upper_.assign(cells, 0.0);
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) upper_[Cell(h, s)] = horizon;
  }
  lower_.assign(cells, 0.0);
  visits_.assign(cells, 0);
  last_dist_.assign(horizon, std::vector<double>(num_actions, 0.0));
}

double VLearner::BanditLoss(int h, double reward, int next_state) const {
  const double H = horizon_;
  const double cap = H - h - 1;
  const double next = std::min(UpperNext(h, next_state), cap);
  return (H - h - (reward + next)) / H;
}

void VLearner::UpdateValues(int h, int s, std::int64_t t, double reward,
                            int next_state, double beta) {
  const double a = Alpha(t, horizon_);
  double& up = upper_[Cell(h, s)];
  double& lo = lower_[Cell(h, s)];
  const double up_next = UpperNext(h, next_state);
  const double lo_next = LowerNext(h, next_state);
  up = (1.0 - a) * up + a * (reward + up_next + beta);
  lo = std::max(0.0, (1.0 - a) * lo + a * (reward + lo_next - beta));
}

CceVLearner::CceVLearner(int horizon, int num_states, int num_actions,
                         double iota, double bonus_c)
    : VLearner(horizon, num_states, num_actions, iota, bonus_c) {
  const std::size_t n =
      static_cast<std::size_t>(horizon) * num_states * num_actions;
  policy_.assign(n, 1.0 / num_actions);
  avg_loss_.assign(n, 0.0);
}

int CceVLearner::Act(int h, int s, RngStream& rng) {
  const double* mu = policy_.data() + Cell(h, s) * num_actions_;
  std::copy(mu, mu + num_actions_, last_dist_[h].begin());
  return rng.Categorical(last_dist_[h]);
}

void CceVLearner::Observe(int h, int s, int action, double reward,
                          int next_state) {
  const std::size_t cell = Cell(h, s);
  const std::int64_t t = ++visits_[cell];
  const double a = Alpha(t, horizon_);
  const double eta = CceStepSize(t, horizon_, num_actions_, iota_);
  double* mu = policy_.data() + cell * num_actions_;
  double* L = avg_loss_.data() + cell * num_actions_;
  // The loss reads V_{h+1} before this step's value update, which only
  // touches (h, s) anyway.
  const double est = BanditLoss(h, reward, next_state) / (mu[action] + eta);
  UpdateValues(h, s, t, reward, next_state,
               CceBonus(t, horizon_, num_actions_, iota_, bonus_c_));
  for (int b = 0; b < num_actions_; ++b) {
    L[b] = (1.0 - a) * L[b] + (b == action ? a * est : 0.0);
  }
  const double scale = eta / a;
  const double lo = *std::min_element(L, L + num_actions_);
  double total = 0.0;
  for (int b = 0; b < num_actions_; ++b) {
    mu[b] = std::exp(-scale * (L[b] - lo));
    total += mu[b];
  }
  for (int b = 0; b < num_actions_; ++b) mu[b] /= total;
}

std::vector<double> CceVLearner::CurrentDistribution(int h, int s) const {
  const double* mu = policy_.data() + Cell(h, s) * num_actions_;
  return {mu, mu + num_actions_};
}

CeVLearner::CeVLearner(int horizon, int num_states, int num_actions,
                       double iota, double bonus_c)
    : VLearner(horizon, num_states, num_actions, iota, bonus_c),
      bandits_(static_cast<std::size_t>(horizon) * num_states,
               MixedExpert(num_actions, horizon, iota)),
      pending_(horizon) {}

int CeVLearner::Act(int h, int s, RngStream& rng) {
  Pending& pend = pending_[h];
  pend.proposal = bandits_[Cell(h, s)].Propose();
  max_residual_ = std::max(max_residual_, pend.proposal.mix.residual);
  pend.expert = rng.Categorical(pend.proposal.mix.p);
  pend.action = rng.Categorical(pend.proposal.q[pend.expert]);
  std::copy(pend.proposal.mix.p.begin(), pend.proposal.mix.p.end(),
            last_dist_[h].begin());
  return pend.action;
}

void CeVLearner::Observe(int h, int s, int action, double reward,
                         int next_state) {
  Pending& pend = pending_[h];
  Require(action == pend.action, kOrigin,
          "observed action differs from the one sampled");
  const std::size_t cell = Cell(h, s);
  const std::int64_t t = ++visits_[cell];
  const double loss = BanditLoss(h, reward, next_state);
  bandits_[cell].Commit(pend.proposal, pend.expert, action, loss);
  UpdateValues(h, s, t, reward, next_state,
               CeBonus(t, horizon_, num_actions_, iota_, bonus_c_));
}

std::vector<double> CeVLearner::CurrentDistribution(int h, int s) const {
  return bandits_[Cell(h, s)].Propose().mix.p;
}

RunHistory::RunHistory(Algorithm algorithm, int horizon, int num_states,
                       std::vector<int> num_actions, int initial_state)
    : algorithm_(algorithm),
      horizon_(horizon),
      num_states_(num_states),
      num_actions_(std::move(num_actions)),
      initial_state_(initial_state) {
  Require(horizon >= 1 && num_states >= 1 && !num_actions_.empty(), kOrigin,
          "history dimensions must be positive");
  Require(initial_state >= 0 && initial_state < num_states, kOrigin,
          "initial state out of range");
  prefix_.reserve(num_actions_.size());
  for (int a : num_actions_) {
    Require(a >= 1, kOrigin, "action counts must be positive");
    prefix_.push_back(sum_actions_);
    sum_actions_ += a;
  }
  cells_.resize(static_cast<std::size_t>(horizon) * num_states);
}

std::int64_t RunHistory::VisitsBefore(int h, int s, std::int64_t k) const {
  const auto& ep = cells_[Cell(h, s)].episodes;
  return std::lower_bound(ep.begin(), ep.end(), k) - ep.begin();
}

std::span<const double> RunHistory::VisitDistribution(int h, int s,
                                                      std::int64_t l,
                                                      int player) const {
  const auto& cell = cells_[Cell(h, s)];
  const std::size_t off =
      static_cast<std::size_t>(l - 1) * sum_actions_ + prefix_[player];
  return {cell.dists.data() + off,
          static_cast<std::size_t>(num_actions_[player])};
}

std::span<const double> RunHistory::FinalDistribution(int h, int s,
                                                      int player) const {
  Require(!final_.empty(), kOrigin, "history has no final distributions");
  const std::size_t off = Cell(h, s) * sum_actions_ + prefix_[player];
  return {final_.data() + off, static_cast<std::size_t>(num_actions_[player])};
}

void RunHistory::BeginEpisode(std::span<const double> upper,
                              std::span<const double> lower) {
  Require(static_cast<int>(upper.size()) == num_players() &&
              static_cast<int>(lower.size()) == num_players(),
          kOrigin, "snapshot needs one value per player");
  upper_s1_.insert(upper_s1_.end(), upper.begin(), upper.end());
  lower_s1_.insert(lower_s1_.end(), lower.begin(), lower.end());
}

void RunHistory::AddVisit(int h, int s, std::int64_t k,
                          std::span<const std::span<const double>> dists) {
  Require(h >= 0 && h < horizon_ && s >= 0 && s < num_states_, kOrigin,
          "visit outside the state space");
  Require(static_cast<int>(dists.size()) == num_players(), kOrigin,
          "visit needs one distribution per player");
  auto& cell = cells_[Cell(h, s)];
  Require(cell.episodes.empty() || cell.episodes.back() < k, kOrigin,
          "visits must be strictly increasing in the episode index");
  cell.episodes.push_back(k);
  for (int i = 0; i < num_players(); ++i) {
    Require(static_cast<int>(dists[i].size()) == num_actions_[i], kOrigin,
            "distribution length does not match the action count");
    cell.dists.insert(cell.dists.end(), dists[i].begin(), dists[i].end());
  }
  episodes_ = std::max(episodes_, k);
}

void RunHistory::SetFinalDistribution(int h, int s, int player,
                                      std::span<const double> dist) {
  if (final_.empty()) final_.assign(cells_.size() * sum_actions_, 0.0);
  Require(static_cast<int>(dist.size()) == num_actions_[player], kOrigin,
          "distribution length does not match the action count");
  std::copy(dist.begin(), dist.end(),
            final_.begin() + Cell(h, s) * sum_actions_ + prefix_[player]);
}

RunHistory RunHistory::Truncated(std::int64_t k) const {
  Require(k >= 0 && k <= episodes_, kOrigin, "truncation beyond the history");
  RunHistory out = *this;
  out.episodes_ = k;
  for (auto& cell : out.cells_) {
    const std::size_t keep =
        std::lower_bound(cell.episodes.begin(), cell.episodes.end(), k + 1) -
        cell.episodes.begin();
    cell.episodes.resize(keep);
    cell.dists.resize(keep * sum_actions_);
  }
  const std::size_t snaps = static_cast<std::size_t>(k) * num_players();
  if (out.upper_s1_.size() > snaps) out.upper_s1_.resize(snaps);
  if (out.lower_s1_.size() > snaps) out.lower_s1_.resize(snaps);
  if (k != episodes_) out.final_.clear();
  return out;
}

void RunHistory::Validate() const {
  for (int h = 0; h < horizon_; ++h) {
    std::int64_t total = 0;
    for (int s = 0; s < num_states_; ++s) {
      const auto& cell = cells_[Cell(h, s)];
      Require(cell.dists.size() == cell.episodes.size() * sum_actions_,
              kOrigin, "visit and distribution counts disagree");
      for (std::size_t l = 0; l < cell.episodes.size(); ++l) {
        Require(cell.episodes[l] >= 1 && cell.episodes[l] <= episodes_,
                kOrigin, "visit episode out of range");
        Require(l == 0 || cell.episodes[l - 1] < cell.episodes[l], kOrigin,
                "visit list not strictly increasing");
        for (int i = 0; i < num_players(); ++i) {
          double sum = 0.0;
          for (int a = 0; a < num_actions_[i]; ++a) {
            const double x = cell.dists[l * sum_actions_ + prefix_[i] + a];
            Require(x >= 0.0, kOrigin, "negative probability in history");
            sum += x;
          }
          Require(std::abs(sum - 1.0) <= kSumTolerance, kOrigin,
                  "stored distribution does not sum to 1");
        }
      }
      total += static_cast<std::int64_t>(cell.episodes.size());
    }
    Require(total == episodes_, kOrigin,
            "visits at step " + std::to_string(h) + " do not sum to K");
  }
  Require(upper_s1_.size() == lower_s1_.size(), kOrigin,
          "snapshot arrays differ in length");
}

RunHistory RunVLearning(Algorithm algorithm, const MarkovGame& game,
                        const LearnerParams& params, std::uint64_t seed,
                        const RunObserver& observer) {
  Require(params.episodes >= 1, kOrigin, "need at least one episode");
  const int m = game.num_players();
  const int H = game.horizon();
  const int S = game.num_states();
  const double iota = params.ResolvedIota(game);

  std::vector<std::unique_ptr<VLearner>> owned;
  std::vector<const VLearner*> view;
  for (int i = 0; i < m; ++i) {
    if (algorithm == Algorithm::kCce) {
      owned.push_back(std::make_unique<CceVLearner>(
          H, S, game.num_actions(i), iota, params.bonus_c));
    } else {
      owned.push_back(std::make_unique<CeVLearner>(
          H, S, game.num_actions(i), iota, params.bonus_c));
    }
    view.push_back(owned.back().get());
  }

  RngStream env = RngStream::Derive(seed, "env");
  std::vector<RngStream> act_rng;
  act_rng.reserve(static_cast<std::size_t>(m) * H * S);
  for (int i = 0; i < m; ++i) {
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        act_rng.push_back(RngStream::Derive(seed, "learner", i, h, s));
      }
    }
  }
  auto rng_of = [&](int i, int h, int s) -> RngStream& {
    return act_rng[(static_cast<std::size_t>(i) * H + h) * S + s];
  };
  auto subexpert_total = [&](int i, int h, int s) {
    const auto& ce = static_cast<const CeVLearner&>(*owned[i]);
    std::int64_t total = 0;
    for (const auto& e : ce.Bandit(h, s).experts()) total += e.visits;
    return total;
  };

  RunHistory history(algorithm, H, S, game.num_actions(),
                     game.initial_state());
  RunTelemetry& tel = history.mutable_telemetry();
  const int s1 = game.initial_state();
  std::vector<double> up(m), lo(m), rewards(m);
  std::vector<int> actions(m);
  std::vector<std::span<const double>> dists(m);
  std::vector<std::int64_t> before(m);
  EpisodeTrace trace(H);

  for (std::int64_t k = 1; k <= params.episodes; ++k) {
    for (int i = 0; i < m; ++i) {
      up[i] = owned[i]->Upper(0, s1);
      lo[i] = owned[i]->Lower(0, s1);
    }
    history.BeginEpisode(up, lo);
    if (observer.on_episode_start) observer.on_episode_start(k, view);

    bool subexpert_ok = true;
    int s = s1;
    for (int h = 0; h < H; ++h) {
      for (int i = 0; i < m; ++i) {
        if (algorithm == Algorithm::kCe) before[i] = subexpert_total(i, h, s);
        actions[i] = owned[i]->Act(h, s, rng_of(i, h, s));
        dists[i] = owned[i]->LastDistribution(h);
      }
      history.AddVisit(h, s, k, dists);
      const std::int64_t joint = game.joint().Encode(actions);
      RealizeRewards(game, h, s, joint, env, rewards);
      const int next = SampleNextState(game, h, s, joint, env);
      for (int i = 0; i < m; ++i) {
        owned[i]->Observe(h, s, actions[i], rewards[i], next);
        const double u = owned[i]->Upper(h, s);
        const double l = owned[i]->Lower(h, s);
        if (l > u || l < 0.0 || l > H) tel.bound_violations += 1;
        if (algorithm == Algorithm::kCe &&
            subexpert_total(i, h, s) != before[i] + 1) {
          subexpert_ok = false;
        }
      }
      StepRecord& rec = trace[h];
      rec.state = s;
      rec.actions = actions;
      rec.joint = joint;
      rec.rewards = rewards;
      rec.next_state = next;
      s = next;
    }
    if (!subexpert_ok) tel.subexpert_violations += 1;
    if (observer.on_episode_end) observer.on_episode_end(k, trace, view);
  }
  history.SetEpisodes(params.episodes);

  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int i = 0; i < m; ++i) {
        history.SetFinalDistribution(h, s, i,
                                     owned[i]->CurrentDistribution(h, s));
      }
    }
  }
  if (algorithm == Algorithm::kCe) {
    for (int i = 0; i < m; ++i) {
      tel.max_fixed_point_residual = std::max(
          tel.max_fixed_point_residual,
          static_cast<const CeVLearner&>(*owned[i]).max_residual());
    }
  }
  return history;
}

std::vector<double> GapBoundFromConfidence(const RunHistory& history) {
  Require(history.has_snapshots() && history.episodes() >= 1, kOrigin,
          "history has no value snapshots");
  const int m = history.num_players();
  std::vector<double> out(m, 0.0);
  for (std::int64_t k = 1; k <= history.episodes(); ++k) {
    for (int i = 0; i < m; ++i) {
      out[i] += history.UpperSnapshot(k, i) - history.LowerSnapshot(k, i);
    }
  }
  for (double& x : out) x /= static_cast<double>(history.episodes());
  return out;
}

}  // namespace mglab
