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

#include "mglab/certified.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mglab/error.hpp"
#include "mglab/joint.hpp"

namespace mglab {

namespace {

constexpr const char* kOrigin = "certified-policy";

}  // namespace

CertifiedPolicySampler::CertifiedPolicySampler(const RunHistory& history,
                                               RngStream rng)
    : history_(&history), rng_(rng), alpha_(history.horizon()) {
  Require(history.episodes() >= 1, kOrigin, "history has no episodes");
}

void CertifiedPolicySampler::BeginEpisode() {
  k_ = 1 + static_cast<std::int64_t>(
               rng_.Below(static_cast<std::uint64_t>(history_->episodes())));
  next_step_ = 0;
  uniform_ = false;
}

void CertifiedPolicySampler::Act(int h, int s, std::span<int> actions) {
  Require(k_ >= 1, kOrigin, "BeginEpisode must be called first");
  Require(h == next_step_ && h < history_->horizon(), kOrigin,
          "certified policy called out of step order or past the horizon");
  next_step_ += 1;
  const int m = history_->num_players();
  if (!uniform_) {
    const std::int64_t t = history_->VisitsBefore(h, s, k_);
    if (t == 0) {
      uniform_ = true;
    } else {
      const std::int64_t l = alpha_.Sample(t, rng_);
      k_ = history_->EpisodeOfVisit(h, s, l);
      for (int i = 0; i < m; ++i) {
        actions[i] = rng_.Categorical(history_->VisitDistribution(h, s, l, i));
      }
      return;
    }
  }
  for (int i = 0; i < m; ++i) {
    actions[i] = static_cast<int>(rng_.Below(history_->num_actions()[i]));
  }
}

Actor CertifiedActor(CertifiedPolicySampler& sampler,
                     const MarkovDeviation* deviation) {
  const int S = sampler.history().num_states();
  return [&sampler, deviation, S](int h, int s, std::span<int> actions) {
    if (h == 0) sampler.BeginEpisode();
    sampler.Act(h, s, actions);
    if (deviation != nullptr) {
      actions[deviation->player] =
          deviation->actions[static_cast<std::size_t>(h) * S + s];
    }
  };
}

CertifiedEvaluator::CertifiedEvaluator(const MarkovGame& game,
                                       const RunHistory& history)
    : game_(&game),
      history_(&history),
      m_(game.num_players()),
      H_(game.horizon()),
      S_(game.num_states()),
      K_(history.episodes()) {
  Require(history.horizon() == H_ && history.num_states() == S_ &&
              history.num_actions() == game.num_actions() &&
              history.initial_state() == game.initial_state(),
          kOrigin, "history dimensions do not match the game");
  Require(K_ >= 1, kOrigin, "history has no episodes");
  Require(K_ <= kMaxExactEpisodes, kOrigin,
          "exact evaluation is capped at 1e5 episodes");
  visits_.resize(static_cast<std::size_t>(H_) * S_);
  next_slot_.resize(visits_.size());
  for (int h = 0; h < H_; ++h) {
    for (int s = 0; s < S_; ++s) {
      visits_[Cell(h, s)] = history.TotalVisits(h, s);
    }
  }
  for (int h = 0; h + 1 < H_; ++h) {
    for (int s = 0; s < S_; ++s) {
      const std::int64_t n = Visits(h, s);
      auto& rows = next_slot_[Cell(h, s)];
      rows.assign(static_cast<std::size_t>(n + 1) * S_, 0);
      // Visit episodes increase with l, so one forward pointer per next
      // state yields N_{h+1}^{k_l}(s') for every l.
      std::vector<std::int64_t> ptr(S_, 0);
      const auto eps = history.VisitEpisodes(h, s);
      for (std::int64_t l = 1; l <= n; ++l) {
        const std::int64_t k = eps[l - 1];
        for (int ns = 0; ns < S_; ++ns) {
          const auto next_eps = history.VisitEpisodes(h + 1, ns);
          while (ptr[ns] < static_cast<std::int64_t>(next_eps.size()) &&
                 next_eps[ptr[ns]] < k) {
            ptr[ns] += 1;
          }
          rows[static_cast<std::size_t>(l) * S_ + ns] = ptr[ns];
        }
      }
    }
  }
  for (int i = 0; i < m_; ++i) {
    uniform_.emplace_back(game.num_actions(i), 1.0 / game.num_actions(i));
  }
}

void CertifiedEvaluator::Dists(int h, int s, std::int64_t l,
                               std::vector<std::span<const double>>& out) const {
  out.resize(m_);
  for (int i = 0; i < m_; ++i) {
    out[i] = l == 0 ? std::span<const double>(uniform_[i])
                    : history_->VisitDistribution(h, s, l, i);
  }
}

void CertifiedEvaluator::OwnActionValues(
    int h, int s, std::int64_t l, int player,
    const std::vector<std::vector<double>>& next_tables,
    std::vector<double>& scratch, std::vector<double>& out) const {
  std::vector<std::span<const double>> dists;
  Dists(h, s, l, dists);
  ProductProbabilities(game_->joint(), dists, player, scratch);
  out.assign(game_->num_actions(player), 0.0);
  const bool last = h + 1 == H_;
  for (std::int64_t a = 0; a < game_->num_joint_actions(); ++a) {
    const double w = scratch[a];
    if (w == 0.0) continue;
    double cont = 0.0;
    if (!last) {
      const auto p = game_->Transition(h, s, a);
      for (int ns = 0; ns < S_; ++ns) {
        if (p[ns] == 0.0) continue;
        cont += p[ns] * next_tables[Cell(h + 1, ns)][NextSlot(h, s, l, ns)];
      }
    }
    out[game_->joint().ActionOf(a, player)] +=
        w * (game_->RewardMean(h, s, a, player) + cont);
  }
}

std::vector<double> CertifiedEvaluator::InitialSlots() const {
  const int s1 = game_->initial_state();
  std::vector<double> mass(static_cast<std::size_t>(Visits(0, s1)) + 1, 0.0);
  const double w = 1.0 / static_cast<double>(K_);
  for (std::int64_t k = 1; k <= K_; ++k) {
    mass[history_->VisitsBefore(0, s1, k)] += w;
  }
  return mass;
}

double CertifiedEvaluator::Top(const std::vector<std::vector<double>>& tables,
                               int width, int index) const {
  const auto mass = InitialSlots();
  const auto& top = tables[Cell(0, game_->initial_state())];
  double v = 0.0;
  for (std::size_t t = 0; t < mass.size(); ++t) {
    if (mass[t] != 0.0) v += mass[t] * top[t * width + index];
  }
  return v;
}

std::vector<std::vector<double>> CertifiedEvaluator::Backward(
    Kind kind, int player, std::span<const int> actions) const {
  const int width = kind == Kind::kValue ? m_ : 1;
  std::vector<std::vector<double>> tables(visits_.size());
  std::vector<double> scratch, own, q(width);
  std::vector<std::span<const double>> dists;
  for (int h = H_ - 1; h >= 0; --h) {
    const bool last = h + 1 == H_;
    for (int s = 0; s < S_; ++s) {
      const std::int64_t n = Visits(h, s);
      auto& w = tables[Cell(h, s)];
      w.assign(static_cast<std::size_t>(n + 1) * width, 0.0);
      for (std::int64_t l = 0; l <= n; ++l) {
        std::fill(q.begin(), q.end(), 0.0);
        if (kind == Kind::kValue) {
          Dists(h, s, l, dists);
          ProductProbabilities(game_->joint(), dists, -1, scratch);
          for (std::int64_t a = 0; a < game_->num_joint_actions(); ++a) {
            const double pa = scratch[a];
            if (pa == 0.0) continue;
            const auto r = game_->RewardMeans(h, s, a);
            const auto p = last ? std::span<const double>{}
                                : game_->Transition(h, s, a);
            for (int j = 0; j < m_; ++j) {
              double cont = 0.0;
              for (std::size_t ns = 0; ns < p.size(); ++ns) {
                if (p[ns] == 0.0) continue;
                cont += p[ns] * tables[Cell(h + 1, static_cast<int>(ns))]
                                      [NextSlot(h, s, l, static_cast<int>(ns)) *
                                           width +
                                       j];
              }
              q[j] += pa * (r[j] + cont);
            }
          }
        } else {
          OwnActionValues(h, s, l, player, tables, scratch, own);
          const double best = *std::max_element(own.begin(), own.end());
          if (kind == Kind::kBestResponse) {
            q[0] = best;
          } else if (kind == Kind::kBestModification) {
            // sum_{a_i} mu_i(a_i) max_{a'} E[...]; the opponents' law does
            // not depend on the recommended a_i given k.
            const auto mu = l == 0 ? std::span<const double>(uniform_[player])
                                   : history_->VisitDistribution(h, s, l,
                                                                 player);
            for (std::size_t a = 0; a < mu.size(); ++a) q[0] += mu[a] * best;
          } else {
            q[0] = own[actions[Cell(h, s)]];
          }
        }
        if (l == 0) {
          std::copy(q.begin(), q.end(), w.begin());
          continue;
        }
        const double alpha = Alpha(l, H_);
        for (int j = 0; j < width; ++j) {
          w[l * width + j] = (1.0 - alpha) * w[(l - 1) * width + j] + alpha * q[j];
        }
      }
    }
  }
  return tables;
}

std::vector<double> CertifiedEvaluator::Value() const {
  const auto tables = Backward(Kind::kValue, -1, {});
  std::vector<double> out(m_);
  for (int i = 0; i < m_; ++i) out[i] = Top(tables, m_, i);
  return out;
}

double CertifiedEvaluator::OmniscientDeviation(int player,
                                               DeviationMode mode) const {
  Require(player >= 0 && player < m_, kOrigin, "player index out of range");
  const auto tables = Backward(mode == DeviationMode::kBestResponse
                                   ? Kind::kBestResponse
                                   : Kind::kBestModification,
                               player, {});
  return Top(tables, 1, 0);
}

double CertifiedEvaluator::MarkovDeviationValue(
    int player, std::span<const int> actions) const {
  Require(player >= 0 && player < m_, kOrigin, "player index out of range");
  Require(static_cast<int>(actions.size()) == H_ * S_, kOrigin,
          "deviation needs one action per (h, s)");
  for (int a : actions) {
    Require(a >= 0 && a < game_->num_actions(player), kOrigin,
            "deviation action out of range");
  }
  return Top(Backward(Kind::kMarkov, player, actions), 1, 0);
}

MarkovDeviation CertifiedEvaluator::BestMarkovDeviation(int player,
                                                        int max_passes) const {
  Require(player >= 0 && player < m_, kOrigin, "player index out of range");
  const int A = game_->num_actions(player);
  MarkovDeviation dev;
  dev.player = player;
  dev.actions.assign(static_cast<std::size_t>(H_) * S_, 0);
  const std::size_t cells = visits_.size();
  std::vector<std::vector<double>> reach(cells), mass(cells), tables(cells);
  std::vector<double> scratch, own, scores(A);

  for (dev.passes = 1; dev.passes <= max_passes; ++dev.passes) {
    // Forward: slot masses R_t, then per-visit masses
    // M_l = alpha_l B_l with B_l = R_l + (1 - alpha_{l+1}) B_{l+1}.
    for (std::size_t c = 0; c < cells; ++c) {
      reach[c].assign(static_cast<std::size_t>(visits_[c]) + 1, 0.0);
    }
    reach[Cell(0, game_->initial_state())] = InitialSlots();
    for (int h = 0; h < H_; ++h) {
      for (int s = 0; s < S_; ++s) {
        const std::int64_t n = Visits(h, s);
        const auto& R = reach[Cell(h, s)];
        auto& M = mass[Cell(h, s)];
        M.assign(static_cast<std::size_t>(n) + 1, 0.0);
        double B = 0.0;
        for (std::int64_t l = n; l >= 1; --l) {
          const double keep = l < n ? 1.0 - Alpha(l + 1, H_) : 0.0;
          B = R[l] + keep * B;
          M[l] = Alpha(l, H_) * B;
        }
        M[0] = R[0];
        if (h + 1 == H_) continue;
        const int own_action = dev.actions[Cell(h, s)];
        std::vector<std::span<const double>> dists;
        for (std::int64_t l = 0; l <= n; ++l) {
          if (M[l] == 0.0) continue;
          Dists(h, s, l, dists);
          ProductProbabilities(game_->joint(), dists, player, scratch);
          for (std::int64_t a = 0; a < game_->num_joint_actions(); ++a) {
            if (scratch[a] == 0.0 ||
                game_->joint().ActionOf(a, player) != own_action) {
              continue;
            }
            const auto p = game_->Transition(h, s, a);
            for (int ns = 0; ns < S_; ++ns) {
              if (p[ns] == 0.0) continue;
              reach[Cell(h + 1, ns)][NextSlot(h, s, l, ns)] +=
                  M[l] * scratch[a] * p[ns];
            }
          }
        }
      }
    }
    // Backward: greedy improvement under the fixed reach masses.
    bool changed = false;
    std::vector<std::vector<double>> own_by_visit;
    for (int h = H_ - 1; h >= 0; --h) {
      for (int s = 0; s < S_; ++s) {
        const std::int64_t n = Visits(h, s);
        const auto& M = mass[Cell(h, s)];
        own_by_visit.assign(static_cast<std::size_t>(n) + 1, {});
        std::fill(scores.begin(), scores.end(), 0.0);
        for (std::int64_t l = 0; l <= n; ++l) {
          OwnActionValues(h, s, l, player, tables, scratch, own);
          for (int a = 0; a < A; ++a) scores[a] += M[l] * own[a];
          own_by_visit[l] = own;
        }
        int& choice = dev.actions[Cell(h, s)];
        int best = choice;
        for (int a = 0; a < A; ++a) {
          const double tol = 1e-12 * (1.0 + std::abs(scores[best]));
          if (scores[a] > scores[best] + tol) best = a;
        }
        if (best != choice) {
          changed = true;
          choice = best;
        }
        auto& w = tables[Cell(h, s)];
        w.assign(static_cast<std::size_t>(n) + 1, 0.0);
        w[0] = own_by_visit[0][choice];
        for (std::int64_t l = 1; l <= n; ++l) {
          const double alpha = Alpha(l, H_);
          w[l] = (1.0 - alpha) * w[l - 1] + alpha * own_by_visit[l][choice];
        }
      }
    }
    dev.value = Top(tables, 1, 0);
    if (!changed) break;
  }
  dev.passes = std::min(dev.passes, max_passes);
  return dev;
}

MonteCarloEstimate CertifiedMonteCarlo(const MarkovGame& game,
                                       const RunHistory& history,
                                       std::int64_t episodes,
                                       std::uint64_t seed,
                                       const MarkovDeviation* deviation) {
  CertifiedPolicySampler sampler(history,
                                 RngStream::Derive(seed, "certified", 0));
  RngStream env = RngStream::Derive(seed, "certified-env", 0);
  return MonteCarloReturns(game, CertifiedActor(sampler, deviation), episodes,
                           env);
}

std::vector<CertifiedGapRow> CertifiedGapReport(const MarkovGame& game,
                                                const RunHistory& history) {
  CertifiedEvaluator eval(game, history);
  const auto value = eval.Value();
  std::vector<double> conf(game.num_players(),
                           std::numeric_limits<double>::quiet_NaN());
  if (history.has_snapshots()) conf = GapBoundFromConfidence(history);
  std::vector<CertifiedGapRow> rows;
  for (int i = 0; i < game.num_players(); ++i) {
    CertifiedGapRow row;
    row.player = i;
    row.exact_value = value[i];
    row.omniscient_br = eval.OmniscientDeviation(i, DeviationMode::kBestResponse);
    row.omniscient_mod =
        eval.OmniscientDeviation(i, DeviationMode::kBestModification);
    row.confidence_gap = conf[i];
    rows.push_back(row);
  }
  return rows;
}

std::string CertifiedGapCsv(const std::vector<CertifiedGapRow>& rows) {
  std::string out = "player,exact_value,omniscient_br,omniscient_mod,confidence_gap\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", r.player,
                  r.exact_value, r.omniscient_br, r.omniscient_mod,
                  r.confidence_gap);
    out += buf;
  }
  return out;
}

}  // namespace mglab
