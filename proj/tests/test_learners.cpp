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

#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "mglab/generators.hpp"
#include "mglab/learners.hpp"
#include "mglab/schedule.hpp"

using namespace mglab;

namespace {

struct Snapshot {
  // [player][h * S + s]
  std::vector<std::vector<double>> upper;
};

Snapshot Capture(std::span<const VLearner* const> learners) {
  Snapshot snap;
  for (const VLearner* l : learners) {
    std::vector<double> up;
    for (int h = 0; h < l->horizon(); ++h) {
      for (int s = 0; s < l->num_states(); ++s) up.push_back(l->Upper(h, s));
    }
    snap.upper.push_back(std::move(up));
  }
  return snap;
}

}  // namespace

TEST_CASE("alpha_weights examples and sums") {
  CHECK(AlphaWeights(0, 3) == std::vector<double>{1.0});
  const auto one = AlphaWeights(1, 4);
  CHECK(one[0] == 0.0);
  CHECK(one[1] == 1.0);
  const auto w = AlphaWeights(2, 1);
  CHECK(w[0] == 0.0);
  CHECK(w[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  for (int H = 1; H <= 10; ++H) {
    for (std::int64_t t : {1, 2, 7, 50, 999}) {
      const auto a = AlphaWeights(t, H);
      double sum = 0.0;
      for (std::int64_t j = 1; j <= t; ++j) sum += a[j];
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("alpha sampler draws from the alpha weights") {
  const int H = 2;
  const std::int64_t t = 12;
  const auto w = AlphaWeights(t, H);
  AlphaSampler sampler(H);
  RngStream rng(4);
  const int N = 200000;
  std::vector<double> counts(t + 1, 0.0);
  for (int n = 0; n < N; ++n) counts[sampler.Sample(t, rng)] += 1;
  CHECK(counts[0] == 0.0);
  for (std::int64_t j = 1; j <= t; ++j) {
    const double se = std::sqrt(w[j] * (1 - w[j]) / N);
    CHECK(std::abs(counts[j] / N - w[j]) <= 5 * se + 1e-12);
  }
}

TEST_CASE("one episode overwrites visited values") {
  MarkovGame g = RandomGame({.num_players = 2, .num_states = 3, .horizon = 3,
                             .num_actions = {2, 3}, .seed = 1});
  LearnerParams params{.episodes = 1};
  const double iota = params.ResolvedIota(g);
  EpisodeTrace trace;
  std::vector<std::vector<double>> up;
  RunObserver obs;
  obs.on_episode_end = [&](std::int64_t, const EpisodeTrace& tr,
                           std::span<const VLearner* const> ls) {
    trace = tr;
    for (int i = 0; i < 2; ++i) {
      std::vector<double> v;
      for (int h = 0; h < 3; ++h) v.push_back(ls[i]->Upper(h, tr[h].state));
      up.push_back(v);
      for (int h = 0; h < 3; ++h) CHECK(ls[i]->Visits(h, tr[h].state) == 1);
    }
  };
  CceVLearning(g, params, 3, obs);
  for (int i = 0; i < 2; ++i) {
    const double beta = CceBonus(1, 3, g.num_actions(i), iota, 0.5);
    for (int h = 0; h < 3; ++h) {
      // Step h + 1 is updated after step h within the episode, so step h
      // still sees its initial value H.
      const double next = h + 1 < 3 ? 3.0 : 0.0;
      CHECK(up[i][h] ==
            doctest::Approx(trace[h].rewards[i] + next + beta).epsilon(1e-14));
    }
  }
}

TEST_CASE("update rule identity reconstructed from the trace log") {
  for (Algorithm alg : {Algorithm::kCce, Algorithm::kCe}) {
    MarkovGame g = RandomGame({.num_players = 2, .num_states = 2,
                               .horizon = 3, .num_actions = {2, 3},
                               .seed = 9});
    const int H = 3, K = 400;
    LearnerParams params{.episodes = K};
    const double iota = params.ResolvedIota(g);
    std::vector<Snapshot> snaps(K + 2);
    std::vector<EpisodeTrace> traces(K + 1);
    RunObserver obs;
    obs.on_episode_start = [&](std::int64_t k,
                               std::span<const VLearner* const> ls) {
      snaps[k] = Capture(ls);
    };
    obs.on_episode_end = [&](std::int64_t k, const EpisodeTrace& tr,
                             std::span<const VLearner* const> ls) {
      traces[k] = tr;
      if (k == K) snaps[K + 1] = Capture(ls);
    };
    const RunHistory hist = RunVLearning(alg, g, params, 5, obs);
    RngStream pick(17);
    for (int rep = 0; rep < 200; ++rep) {
      const int h = static_cast<int>(pick.Below(H));
      const int s = static_cast<int>(pick.Below(2));
      const std::int64_t k = 1 + static_cast<std::int64_t>(pick.Below(K + 1));
      const int i = static_cast<int>(pick.Below(2));
      const std::int64_t t = hist.VisitsBefore(h, s, k);
      const auto w = AlphaWeights(t, H);
      double expect = w[0] * H;
      for (std::int64_t j = 1; j <= t; ++j) {
        const std::int64_t kj = hist.EpisodeOfVisit(h, s, j);
        const StepRecord& rec = traces[kj][h];
        REQUIRE(rec.state == s);
        const double next =
            h + 1 < H ? snaps[kj].upper[i][(h + 1) * 2 + rec.next_state] : 0.0;
        const double beta =
            alg == Algorithm::kCce
                ? CceBonus(j, H, g.num_actions(i), iota, params.bonus_c)
                : CeBonus(j, H, g.num_actions(i), iota, params.bonus_c);
        expect += w[j] * (rec.rewards[i] + next + beta);
      }
      CHECK(std::abs(snaps[k].upper[i][h * 2 + s] - expect) <= 1e-8);
    }
  }
}

TEST_CASE("upper bound dominates the lower bound on random games") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    MarkovGame g = RandomGame({.num_players = 2, .num_states = 3,
                               .horizon = 3, .num_actions = {2}, .seed = seed});
    for (Algorithm alg : {Algorithm::kCce, Algorithm::kCe}) {
      const RunHistory hist = RunVLearning(alg, g, {.episodes = 300}, seed);
      CHECK(hist.telemetry().bound_violations == 0);
      for (std::int64_t k = 1; k <= hist.episodes(); ++k) {
        for (int i = 0; i < 2; ++i) {
          CHECK(hist.UpperSnapshot(k, i) >= hist.LowerSnapshot(k, i));
        }
      }
    }
  }
}

TEST_CASE("history invariants and truncation") {
  MarkovGame g = RandomGame({.num_players = 3, .num_states = 3, .horizon = 2,
                             .num_actions = {2, 3, 2}, .seed = 2});
  const RunHistory hist = CceVLearning(g, {.episodes = 250}, 8);
  CHECK_NOTHROW(hist.Validate());
  for (int h = 0; h < 2; ++h) {
    std::int64_t total = 0;
    for (int s = 0; s < 3; ++s) {
      total += hist.TotalVisits(h, s);
      for (std::int64_t l = 1; l <= hist.TotalVisits(h, s); ++l) {
        const std::int64_t k = hist.EpisodeOfVisit(h, s, l);
        CHECK(hist.VisitsBefore(h, s, k) == l - 1);
        CHECK(hist.VisitsBefore(h, s, k + 1) == l);
      }
    }
    CHECK(total == 250);
  }
  const RunHistory cut = hist.Truncated(100);
  CHECK_NOTHROW(cut.Validate());
  CHECK(cut.episodes() == 100);
  CHECK(cut.UpperSnapshot(100, 1) == hist.UpperSnapshot(100, 1));
  CHECK(hist.Truncated(250) == hist);
}

TEST_CASE("fixed seed gives identical histories") {
  MarkovGame g = RandomGame({.num_players = 2, .num_states = 2, .horizon = 2,
                             .num_actions = {2}, .seed = 3});
  CHECK(CeVLearning(g, {.episodes = 200}, 11) ==
        CeVLearning(g, {.episodes = 200}, 11));
  CHECK(CceVLearning(g, {.episodes = 200}, 11) ==
        CceVLearning(g, {.episodes = 200}, 11));
  CHECK(!(CceVLearning(g, {.episodes = 200}, 11) ==
          CceVLearning(g, {.episodes = 200}, 12)));
}

TEST_CASE("CE: one sub-expert update per visit and small residuals") {
  MarkovGame g = RandomGame({.num_players = 2, .num_states = 2, .horizon = 3,
                             .num_actions = {3, 2}, .seed = 6});
  const RunHistory hist = CeVLearning(g, {.episodes = 500}, 1);
  CHECK(hist.telemetry().subexpert_violations == 0);
  CHECK(hist.telemetry().max_fixed_point_residual <= 1e-9);
}

TEST_CASE("CE on a one-step game is independent mixed-expert bandits") {
  std::vector<double> means(6 * 2);
  RngStream gen(3);
  for (double& x : means) x = gen.Uniform();
  MarkovGame g = MakeOneStepGame({2, 3}, means, RewardKind::kBernoulli);
  const std::int64_t K = 300;
  LearnerParams params{.episodes = K};
  const double iota = params.ResolvedIota(g);
  const std::uint64_t seed = 21;
  const RunHistory hist = CeVLearning(g, params, seed);

  std::vector<MixedExpert> bandits{MixedExpert(2, 1, iota),
                                   MixedExpert(3, 1, iota)};
  std::vector<RngStream> rngs{RngStream::Derive(seed, "learner", 0, 0, 0),
                              RngStream::Derive(seed, "learner", 1, 0, 0)};
  RngStream env = RngStream::Derive(seed, "env");
  std::vector<int> acts(2);
  std::vector<double> rewards(2);
  for (std::int64_t k = 1; k <= K; ++k) {
    std::vector<MixedExpertProposal> props;
    std::vector<int> experts(2);
    for (int i = 0; i < 2; ++i) {
      props.push_back(bandits[i].Propose());
      experts[i] = rngs[i].Categorical(props[i].mix.p);
      acts[i] = rngs[i].Categorical(props[i].q[experts[i]]);
      const auto stored = hist.VisitDistribution(0, 0, k, i);
      for (std::size_t a = 0; a < stored.size(); ++a) {
        CHECK(stored[a] == props[i].mix.p[a]);
      }
    }
    const std::int64_t joint = g.joint().Encode(acts);
    RealizeRewards(g, 0, 0, joint, env, rewards);
    SampleNextState(g, 0, 0, joint, env);
    for (int i = 0; i < 2; ++i) {
      bandits[i].Commit(props[i], experts[i], acts[i], 1.0 - rewards[i]);
    }
  }
  for (int i = 0; i < 2; ++i) {
    const auto fin = hist.FinalDistribution(0, 0, i);
    const auto p = bandits[i].Propose().mix.p;
    for (std::size_t a = 0; a < p.size(); ++a) CHECK(fin[a] == p[a]);
  }
}

TEST_CASE("each player's learner is a function of its own observations") {
  for (Algorithm alg : {Algorithm::kCce, Algorithm::kCe}) {
    MarkovGame g = RandomGame({.num_players = 3, .num_states = 2,
                               .horizon = 3, .num_actions = {2, 3, 2},
                               .seed = 12});
    const std::int64_t K = 200;
    const std::uint64_t seed = 4;
    LearnerParams params{.episodes = K};
    const double iota = params.ResolvedIota(g);
    std::vector<EpisodeTrace> traces;
    std::vector<Snapshot> finals;
    RunObserver obs;
    obs.on_episode_end = [&](std::int64_t k, const EpisodeTrace& tr,
                             std::span<const VLearner* const> ls) {
      traces.push_back(tr);
      if (k == K) finals.push_back(Capture(ls));
    };
    RunVLearning(alg, g, params, seed, obs);

    for (int i = 0; i < 3; ++i) {
      std::unique_ptr<VLearner> solo;
      if (alg == Algorithm::kCce) {
        solo = std::make_unique<CceVLearner>(3, 2, g.num_actions(i), iota, 0.5);
      } else {
        solo = std::make_unique<CeVLearner>(3, 2, g.num_actions(i), iota, 0.5);
      }
      std::map<std::pair<int, int>, RngStream> rngs;
      for (const auto& tr : traces) {
        for (int h = 0; h < 3; ++h) {
          const StepRecord& rec = tr[h];
          auto it = rngs.find({h, rec.state});
          if (it == rngs.end()) {
            it = rngs.emplace(std::make_pair(h, rec.state),
                              RngStream::Derive(seed, "learner", i, h,
                                                rec.state))
                     .first;
          }
          const int a = solo->Act(h, rec.state, it->second);
          REQUIRE(a == rec.actions[i]);
          solo->Observe(h, rec.state, a, rec.rewards[i], rec.next_state);
        }
      }
      const VLearner* view = solo.get();
      const Snapshot mine = Capture(std::span<const VLearner* const>(&view, 1));
      CHECK(mine.upper[0] == finals[0].upper[i]);
    }
  }
}

TEST_CASE("confidence gap bound averages the snapshots") {
  MarkovGame g = RandomGame({.num_players = 2, .num_states = 2, .horizon = 2,
                             .num_actions = {2}, .seed = 3});
  const RunHistory hist = CceVLearning(g, {.episodes = 50}, 2);
  const auto gap = GapBoundFromConfidence(hist);
  double expect = 0.0;
  for (std::int64_t k = 1; k <= 50; ++k) {
    expect += hist.UpperSnapshot(k, 1) - hist.LowerSnapshot(k, 1);
  }
  CHECK(gap[1] == doctest::Approx(expect / 50));
}
