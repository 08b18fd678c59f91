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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mglab/error.hpp"
#include "mglab/evaluators.hpp"
#include "mglab/generators.hpp"
#include "mglab/hard.hpp"
#include "mglab/rng.hpp"

using namespace mglab;

namespace {

// Enumerates every swap function phi: [A_i] -> [A_i] and every constant.
void BruteGaps(const std::vector<int>& na, const std::vector<double>& means,
               const std::vector<double>& dist, std::vector<double>& cce,
               std::vector<double>& ce) {
  const JointActionSpace space(na);
  const int m = static_cast<int>(na.size());
  cce.assign(m, 0.0);
  ce.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const int A = na[i];
    double base = 0.0;
    for (std::int64_t a = 0; a < space.size(); ++a) base += dist[a] * means[a * m + i];
    std::int64_t nphi = 1;
    for (int x = 0; x < A; ++x) nphi *= A;
    double best_phi = -1e300, best_const = -1e300;
    for (std::int64_t code = 0; code < nphi; ++code) {
      std::vector<int> phi(A);
      std::int64_t c = code;
      for (int x = 0; x < A; ++x) {
        phi[x] = static_cast<int>(c % A);
        c /= A;
      }
      double v = 0.0;
      for (std::int64_t a = 0; a < space.size(); ++a) {
        auto acts = space.Decode(a);
        acts[i] = phi[acts[i]];
        v += dist[a] * means[space.Encode(acts) * m + i];
      }
      best_phi = std::max(best_phi, v);
      if (std::all_of(phi.begin(), phi.end(), [&](int y) { return y == phi[0]; })) {
        best_const = std::max(best_const, v);
      }
    }
    cce[i] = best_const - base;
    ce[i] = best_phi - base;
  }
}

std::vector<double> RandomDist(std::int64_t n, RngStream& rng, bool sparse) {
  std::vector<double> d(n);
  double s = 0.0;
  for (auto& x : d) {
    x = (sparse && rng.Uniform() < 0.5) ? 0.0 : -std::log(1.0 - rng.Uniform());
    s += x;
  }
  if (s == 0.0) {
    d[0] = 1.0;
    return d;
  }
  for (auto& x : d) x /= s;
  return d;
}

}  // namespace

TEST_CASE("one-step gaps: hand examples") {
  // Coordination r = 1{a1 == a2}; pure NE (0, 0).
  const std::vector<double> coord = {1, 1, 0, 0, 0, 0, 1, 1};
  const std::vector<double> point = {1, 0, 0, 0};
  for (double g : OneStepCceGap({2, 2}, coord, point)) CHECK(g == 0.0);
  for (double g : OneStepCeGap({2, 2}, coord, point)) CHECK(g == 0.0);

  // Matching pennies rescaled: player 0 wins on a match.
  const std::vector<double> pennies = {1, 0, 0, 1, 0, 1, 1, 0};
  const std::vector<double> uniform(4, 0.25);
  for (double g : OneStepCceGap({2, 2}, pennies, uniform)) CHECK(g == 0.0);
  for (double g : OneStepCeGap({2, 2}, pennies, uniform)) CHECK(g == 0.0);

  // Chicken with a traffic light: 0 = stop, 1 = go. Joint index a0 + 2 a1.
  // (stop, stop) 0.5 each; (go, go) crash 0; the mover gets 0.75, the
  // stopper 0.75 as well (coordinated cell).
  const std::vector<double> chicken = {0.5, 0.5, 0.75, 0.75, 0.75, 0.75, 0, 0};
  const std::vector<double> light = {0, 0.5, 0.5, 0};
  for (double g : OneStepCeGap({2, 2}, chicken, light)) CHECK(g == 0.0);

  // Point masses outside D in a hard game: the players with a neighbour in
  // D along their own coordinate gain eps, the others nothing.
  const auto hard = BuildHardGame({2, 2, 2}, HammingOneNet(3), 0.1);
  for (std::int64_t a : {1, 2, 3, 4, 5, 6}) {
    std::vector<double> mass(8, 0.0);
    mass[a] = 1.0;
    const auto gaps = OneStepCceGap(hard.num_actions, hard.Means(), mass);
    for (double g : gaps) CHECK((g == 0.0 || std::abs(g - 0.1) < 1e-12));
    CHECK(std::abs(*std::max_element(gaps.begin(), gaps.end()) - 0.1) < 1e-12);
  }
  // Correlated play can beat every constant deviation: negative CCE gap.
  const std::vector<double> diag = {0.5, 0, 0, 0.5};
  for (double g : OneStepCceGap({2, 2}, coord, diag)) CHECK(g == -0.5);
  CHECK_THROWS_AS(OneStepCceGap({2, 2}, coord, std::vector<double>{0.5, 0.2, 0, 0}), Error);
}

TEST_CASE("one-step gaps agree with swap enumeration") {
  RngStream rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 1 + static_cast<int>(rng.Below(3));
    std::vector<int> na(m);
    std::int64_t n = 1;
    for (int& a : na) {
      a = 1 + static_cast<int>(rng.Below(3));
      n *= a;
    }
    std::vector<double> means(n * m);
    for (auto& x : means) x = rng.Uniform();
    const auto dist = RandomDist(n, rng, trial % 2 == 0);
    const auto cce = OneStepCceGap(na, means, dist);
    const auto ce = OneStepCeGap(na, means, dist);
    std::vector<double> bcce, bce;
    BruteGaps(na, means, dist, bcce, bce);
    for (int i = 0; i < m; ++i) {
      CHECK(std::abs(cce[i] - bcce[i]) < 1e-12);
      CHECK(std::abs(ce[i] - bce[i]) < 1e-12);
      CHECK(ce[i] >= cce[i] - 1e-12);
      CHECK(ce[i] >= -1e-12);
    }
  }
}

TEST_CASE("product inputs: CE gap equals CCE gap") {
  RngStream rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<int> na = {2, 3, 2};
    const JointActionSpace space(na);
    std::vector<double> means(space.size() * 3);
    for (auto& x : means) x = rng.Uniform();
    std::vector<std::vector<double>> marg;
    for (int a : na) marg.push_back(RandomDist(a, rng, false));
    std::vector<double> dist(space.size());
    for (std::int64_t a = 0; a < space.size(); ++a) {
      const auto acts = space.Decode(a);
      dist[a] = marg[0][acts[0]] * marg[1][acts[1]] * marg[2][acts[2]];
    }
    const auto cce = OneStepCceGap(na, means, dist);
    const auto ce = OneStepCeGap(na, means, dist);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(ce[i] - cce[i]) < 1e-12);
      CHECK(cce[i] >= -1e-12);
    }
  }
}

TEST_CASE("point-mass CCE gap equals the game-core NE gap") {
  RngStream rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<int> na = {2, 3};
    std::vector<double> means(6 * 2);
    for (auto& x : means) x = rng.Uniform();
    const MarkovGame g = MakeOneStepGame(na, means, RewardKind::kDeterministic);
    const std::int64_t a = static_cast<std::int64_t>(rng.Below(6));
    std::vector<double> dist(6, 0.0);
    dist[a] = 1.0;
    MarkovProductPolicy pi(1, 1, na);
    const auto acts = g.joint().Decode(a);
    for (int i = 0; i < 2; ++i) pi.SetPure(0, i, 0, acts[i]);
    const auto cce = OneStepCceGap(na, means, dist);
    const auto ce = OneStepCeGap(na, means, dist);
    CHECK(std::abs(std::max(cce[0], cce[1]) - NeGap(g, pi)) < 1e-15);
    CHECK(ce == cce);
  }
}

TEST_CASE("gap reports serialise") {
  const MarkovGame g = RandomGame({.num_players = 2, .num_states = 2, .horizon = 2,
                                   .num_actions = {2}, .seed = 1});
  const auto pol = RandomPolicy(g, 2);
  const auto rep = ProductGapReport(g, pol);
  REQUIRE(rep.rows.size() == 2);
  for (const auto& r : rep.rows) {
    CHECK(r.ne_gap >= -1e-9);
    CHECK(r.ce_gap >= r.cce_gap - 1e-9);
  }
  CHECK(std::abs(std::max(rep.rows[0].ne_gap, rep.rows[1].ne_gap) - NeGap(g, pol)) < 1e-15);

  const RunHistory hist = CceVLearning(g, {.episodes = 200}, 3);
  const auto cert = CertifiedGapReportFull(g, hist, {.mc_episodes = 2000, .seed = 4});
  REQUIRE(cert.rows.size() == 4);
  CHECK(cert.rows[0].method == "omniscient");
  CHECK(cert.rows[3].method == "monte-carlo");
  CHECK(cert.rows[3].se > 0.0);
  for (int i = 0; i < 2; ++i) {
    // The omniscient bound dominates the Markov deviation up to MC noise.
    CHECK(cert.rows[2 + i].best_response <=
          cert.rows[i].best_response + 4 * cert.rows[2 + i].se);
  }
  const auto csv = GapReportCsv(cert);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  const auto j = nlohmann::json::parse(GapReportJson(cert));
  CHECK(j["object"] == "certified");
  CHECK(j["rows"].size() == 4);
  CHECK(j["rows"][2]["ce_gap"].is_null());
  CHECK(j["rows"][0]["value"].get<double>() == cert.rows[0].value);
  CHECK(CertifiedGapReportFull(g, hist, {.mc_episodes = 2000, .seed = 4}).rows[3].best_response ==
        cert.rows[3].best_response);
}
