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

#include "mglab/mpg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mglab/error.hpp"

namespace mglab {
namespace {

constexpr const char* kOrigin = "mpg";

void CheckPlayer(const MarkovGame& game, const MarkovProductPolicy& policy,
                 int player) {
  Require(player >= 0 && player < game.num_players(), kOrigin,
          "player index out of range");
  Require(policy.horizon() == game.horizon() &&
              policy.num_states() == game.num_states() &&
              policy.num_actions() == game.num_actions(),
          kOrigin, "policy shape does not match the game");
}

}  // namespace

MarkovGame ExactMdpView(const MarkovGame& game,
                        const MarkovProductPolicy& policy, int player) {
  CheckPlayer(game, policy, player);
  policy.ValidateFor(game);
  const int H = game.horizon(), S = game.num_states(), m = game.num_players();
  const int A = game.num_actions(player);
  GameTensors t = GameTensors::Zeros(1, H, S, {A});
  t.initial_state = game.initial_state();
  std::vector<int> acts(m);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (std::int64_t a = 0; a < game.num_joint_actions(); ++a) {
        game.joint().Decode(a, acts);
        double w = 1.0;
        for (int j = 0; j < m; ++j) {
          if (j != player) w *= policy.Probs(h, j, s)[acts[j]];
        }
        if (w == 0.0) continue;
        const int b = acts[player];
        t.R(h, s, b, 0) += w * game.RewardMean(h, s, a, player);
        const auto p = game.Transition(h, s, a);
        for (int ns = 0; ns < S; ++ns) t.P(h, s, b, ns) += w * p[ns];
      }
      for (int b = 0; b < A; ++b) {
        t.R(h, s, b, 0) = std::clamp(t.R(h, s, b, 0), 0.0, 1.0);
      }
    }
  }
  return MarkovGame(std::move(t));
}

SamplingMdpView::SamplingMdpView(const MarkovGame& game,
                                 const MarkovProductPolicy& policy, int player,
                                 RngStream opponents, RngStream env)
    : game_(&game),
      policy_(&policy),
      player_(player),
      opponents_(opponents),
      env_(env),
      actions_(game.num_players()),
      rewards_(game.num_players()) {
  CheckPlayer(game, policy, player);
  policy.ValidateFor(game);
}

SamplingMdpView::Outcome SamplingMdpView::Step(int h, int s, int action) {
  Require(action >= 0 && action < num_actions(), kOrigin,
          "action out of range");
  for (int j = 0; j < game_->num_players(); ++j) {
    actions_[j] = j == player_ ? action
                               : opponents_.Categorical(policy_->Probs(h, j, s));
  }
  const std::int64_t joint = game_->joint().Encode(actions_);
  RealizeRewards(*game_, h, s, joint, env_, rewards_);
  const int next = SampleNextState(*game_, h, s, joint, env_);
  ++steps_;
  return {rewards_[player_], next};
}

double BernsteinBonus(std::int64_t t, double variance, double c, int horizon,
                      int num_states, double iota) {
  Require(t >= 1, kOrigin, "bonus needs t >= 1");
  Require(variance >= 0.0, kOrigin, "bonus needs a nonnegative variance");
  const double td = static_cast<double>(t);
  return c * (std::sqrt(variance * iota / td) +
              static_cast<double>(horizon) * horizon * num_states * iota / td);
}

double UcbviParams::ResolvedIota(int num_states, int num_actions,
                                 int horizon) const {
  if (iota > 0.0) return iota;
  return std::log(static_cast<double>(num_states) * num_actions * horizon *
                  static_cast<double>(episodes) / p);
}

UcbviResult UcbviUplow(SamplingMdpView& mdp, const UcbviParams& params) {
  Require(params.episodes >= 1, kOrigin, "UCBVI needs K >= 1");
  Require(params.c > 0.0, kOrigin, "bonus constant must be positive");
  Require(params.iota > 0.0 || (params.p > 0.0 && params.p < 1.0), kOrigin,
          "need iota > 0 or p in (0, 1)");
  const int H = mdp.horizon(), S = mdp.num_states(), A = mdp.num_actions();
  const double Hd = H;
  const double iota = params.ResolvedIota(S, A, H);

  auto sa = [&](int h, int s, int a) {
    return (static_cast<std::size_t>(h) * S + s) * A + a;
  };
  const std::size_t cells = static_cast<std::size_t>(H) * S * A;
  std::vector<double> q_up(cells, Hd), q_low(cells, 0.0);
  std::vector<double> reward_sum(cells, 0.0);
  std::vector<std::int64_t> n_sa(cells, 0);
  std::vector<std::int64_t> n_sas(cells * S, 0);
  // V[h][s] for h = 0..H, V[H] = 0.
  std::vector<double> v_up(static_cast<std::size_t>(H + 1) * S, 0.0);
  std::vector<double> v_low(v_up.size(), 0.0);
  std::vector<int> pi(static_cast<std::size_t>(H) * S, 0);

  UcbviResult out;
  out.upper.reserve(params.episodes);
  out.lower.reserve(params.episodes);
  const int s1 = mdp.initial_state();

  for (std::int64_t k = 1; k <= params.episodes; ++k) {
    for (int h = H - 1; h >= 0; --h) {
      const double* up_next = v_up.data() + static_cast<std::size_t>(h + 1) * S;
      const double* low_next = v_low.data() + static_cast<std::size_t>(h + 1) * S;
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
          const std::size_t c = sa(h, s, a);
          const std::int64_t t = n_sa[c];
          if (t == 0) continue;
          const double td = static_cast<double>(t);
          double pu = 0.0, pl = 0.0, pm = 0.0, pm2 = 0.0;
          for (int ns = 0; ns < S; ++ns) {
            const std::int64_t cnt = n_sas[c * S + ns];
            if (cnt == 0) continue;
            const double p = static_cast<double>(cnt) / td;
            const double mid = 0.5 * (up_next[ns] + low_next[ns]);
            pu += p * up_next[ns];
            pl += p * low_next[ns];
            pm += p * mid;
            pm2 += p * mid * mid;
          }
          const double var = std::max(0.0, pm2 - pm * pm);
          const double beta = BernsteinBonus(t, var, params.c, H, S, iota);
          const double gamma = (params.c / Hd) * (pu - pl);
          const double r = reward_sum[c] / td;
          q_up[c] = std::min(r + pu + gamma + beta, Hd);
          q_low[c] = std::max(r + pl - gamma - beta, 0.0);
        }
        int best = 0;
        for (int a = 1; a < A; ++a) {
          if (q_up[sa(h, s, a)] > q_up[sa(h, s, best)]) best = a;
        }
        pi[static_cast<std::size_t>(h) * S + s] = best;
        v_up[static_cast<std::size_t>(h) * S + s] = q_up[sa(h, s, best)];
        v_low[static_cast<std::size_t>(h) * S + s] = q_low[sa(h, s, best)];
      }
    }
    const double up = v_up[s1], low = v_low[s1];
    if (!(up >= low)) {
      throw Error(ErrorKind::kNumerical, kOrigin,
                  "upper bound fell below lower bound");
    }
    out.upper.push_back(up);
    out.lower.push_back(low);
    if (k == 1 || up - low < out.best_upper - out.best_lower) {
      out.best_episode = k;
      out.best_upper = up;
      out.best_lower = low;
      out.policy = pi;
    }

    int s = s1;
    for (int h = 0; h < H; ++h) {
      const int a = pi[static_cast<std::size_t>(h) * S + s];
      const auto o = mdp.Step(h, s, a);
      const std::size_t c = sa(h, s, a);
      ++n_sa[c];
      ++n_sas[c * S + o.next_state];
      reward_sum[c] += o.reward;
      s = o.next_state;
    }
  }
  return out;
}

MonteCarloEstimate MonteCarloValue(const MarkovGame& game,
                                   const MarkovProductPolicy& policy,
                                   std::int64_t episodes,
                                   const RngStream& rng) {
  policy.ValidateFor(game);
  RngStream act = rng.Split(0);
  RngStream env = rng.Split(1);
  return MonteCarloReturns(game, PolicyActor(policy, act), episodes, env);
}

void NashCaConfig::Validate() const {
  Require(eps > 0.0, kOrigin, "eps must be positive");
  Require(iota > 0.0 || (p > 0.0 && p < 1.0), kOrigin,
          "need iota > 0 or p in (0, 1)");
  Require(n_scale > 0.0 && k_scale > 0.0, kOrigin,
          "episode multipliers must be positive");
  Require(mc_episodes >= 0 && learner_episodes >= 0, kOrigin,
          "episode overrides must be nonnegative");
  Require(phi_max >= 0.0, kOrigin, "phi_max must be nonnegative");
  Require(ucbvi_c > 0.0, kOrigin, "bonus constant must be positive");
}

double NashCaConfig::ResolvedIota(const MarkovGame& game) const {
  if (iota > 0.0) return iota;
  return std::log(static_cast<double>(game.num_players()) * game.horizon() *
                  game.num_states() * game.max_actions() / (p * eps));
}

std::int64_t NashCaConfig::ResolvedN(const MarkovGame& game) const {
  if (mc_episodes > 0) return mc_episodes;
  const double H = game.horizon();
  return static_cast<std::int64_t>(
      std::ceil(n_scale * H * H * ResolvedIota(game) / (eps * eps)));
}

std::int64_t NashCaConfig::ResolvedK(const MarkovGame& game,
                                     int player) const {
  if (learner_episodes > 0) return learner_episodes;
  const double H = game.horizon();
  return static_cast<std::int64_t>(
      std::ceil(k_scale * H * H * H * game.num_states() *
                game.num_actions(player) * ResolvedIota(game) / (eps * eps)));
}

std::int64_t NashCaConfig::LoopCap(const MarkovGame& game) const {
  const double phi = phi_max > 0.0
                         ? phi_max
                         : static_cast<double>(game.num_players()) *
                               game.horizon();
  return static_cast<std::int64_t>(std::ceil(4.0 * phi / eps));
}

NashCaResult NashCa(const MarkovGame& game, const NashCaConfig& config,
                    std::uint64_t seed) {
  config.Validate();
  const int m = game.num_players();
  const int H = game.horizon(), S = game.num_states();
  const std::int64_t N = config.ResolvedN(game);
  const std::int64_t cap = config.LoopCap(game);

  NashCaResult res;
  res.policy = MarkovProductPolicy::FirstAction(game);
  res.path.push_back(res.policy);

  for (std::int64_t it = 0; it < cap; ++it) {
    res.iterations = it + 1;
    const auto base = MonteCarloValue(
        game, res.policy, N, RngStream::Derive(seed, "nash-ca-mc", it, 0));
    res.total_episodes += N;

    std::vector<MarkovProductPolicy> candidates;
    std::vector<double> delta(m);
    const std::size_t first_row = res.audit.size();
    for (int i = 0; i < m; ++i) {
      SamplingMdpView view(game, res.policy, i,
                           RngStream::Derive(seed, "nash-ca-ucbvi", it, i),
                           RngStream::Derive(seed, "nash-ca-env", it, i));
      UcbviParams up;
      up.episodes = config.ResolvedK(game, i);
      up.c = config.ucbvi_c;
      up.iota = config.ResolvedIota(game);
      const UcbviResult learned = UcbviUplow(view, up);

      MarkovProductPolicy cand = res.policy;
      for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
          cand.SetPure(h, i, s, learned.policy[static_cast<std::size_t>(h) * S + s]);
        }
      }
      const auto after = MonteCarloValue(
          game, cand, N, RngStream::Derive(seed, "nash-ca-mc", it, i + 1));
      delta[i] = after.mean[i] - base.mean[i];
      res.total_episodes += up.episodes + N;
      res.audit.push_back({.iteration = it,
                           .player = i,
                           .delta = delta[i],
                           .value_before = base.mean[i],
                           .value_after = after.mean[i],
                           .episodes = up.episodes + N + (i == 0 ? N : 0),
                           .accepted = false});
      candidates.push_back(std::move(cand));
    }
    // Lowest index wins ties.
    int j = 0;
    for (int i = 1; i < m; ++i) {
      if (delta[i] > delta[j]) j = i;
    }
    if (delta[j] > config.eps / 2.0) {
      res.policy = std::move(candidates[j]);
      res.audit[first_row + j].accepted = true;
      res.path.push_back(res.policy);
    } else {
      res.certified = true;
      return res;
    }
  }
  return res;
}

std::string NashCaAuditCsv(const NashCaResult& result) {
  std::string out =
      "iteration,player,delta,value_before,value_after,episodes,accepted\n";
  char buf[256];
  for (const auto& r : result.audit) {
    std::snprintf(buf, sizeof(buf), "%lld,%d,%.17g,%.17g,%.17g,%lld,%d\n",
                  static_cast<long long>(r.iteration), r.player, r.delta,
                  r.value_before, r.value_after,
                  static_cast<long long>(r.episodes), r.accepted ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace mglab
