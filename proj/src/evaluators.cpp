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

#include "mglab/evaluators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"
#include "mglab/certified.hpp"
#include "mglab/error.hpp"
#include "mglab/hard.hpp"
#include "mglab/rng.hpp"

namespace mglab {
namespace {

constexpr const char* kOrigin = "evaluators";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct OneStepTable {
  JointActionSpace space;
  int m;
};

OneStepTable CheckOneStep(const std::vector<int>& num_actions,
                          std::span<const double> means,
                          std::span<const double> dist) {
  Require(!num_actions.empty(), kOrigin, "need at least one player");
  std::int64_t n = 1;
  for (int a : num_actions) {
    Require(a >= 1, kOrigin, "every player needs an action");
    n *= a;
    Require(n <= kMaxEnumeration, kOrigin, "joint action space exceeds 2^20");
  }
  const int m = static_cast<int>(num_actions.size());
  Require(static_cast<std::int64_t>(means.size()) == n * m, kOrigin,
          "mean table must have |A| * m entries");
  Require(static_cast<std::int64_t>(dist.size()) == n, kOrigin,
          "distribution must have |A| entries");
  double total = 0.0;
  for (double p : dist) {
    Require(p >= 0.0, kOrigin, "distribution has a negative entry");
    total += p;
  }
  Require(std::abs(total - 1.0) <= 1e-9, kOrigin,
          "distribution does not sum to 1");
  return {JointActionSpace(num_actions), m};
}

// value[i] = E[r_i(a)].
std::vector<double> OneStepValue(const OneStepTable& t,
                                 std::span<const double> means,
                                 std::span<const double> dist) {
  std::vector<double> v(t.m, 0.0);
  for (std::int64_t a = 0; a < t.space.size(); ++a) {
    if (dist[a] == 0.0) continue;
    for (int i = 0; i < t.m; ++i) v[i] += dist[a] * means[a * t.m + i];
  }
  return v;
}

// Best constant deviation and best swap per player.
void OneStepDeviations(const OneStepTable& t, std::span<const double> means,
                       std::span<const double> dist, std::vector<double>& br,
                       std::vector<double>& mod) {
  br.assign(t.m, 0.0);
  mod.assign(t.m, 0.0);
  for (int i = 0; i < t.m; ++i) {
    const int A = t.space.num_actions(i);
    // v[x * A + b]: mass-weighted value of playing b when recommended x.
    std::vector<double> v(static_cast<std::size_t>(A) * A, 0.0);
    std::vector<double> mass(A, 0.0);
    for (std::int64_t a = 0; a < t.space.size(); ++a) {
      if (dist[a] == 0.0) continue;
      const int x = t.space.ActionOf(a, i);
      mass[x] += dist[a];
      for (int b = 0; b < A; ++b) {
        v[x * A + b] += dist[a] * means[t.space.WithAction(a, i, b) * t.m + i];
      }
    }
    double best_const = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < A; ++b) {
      double u = 0.0;
      for (int x = 0; x < A; ++x) u += v[x * A + b];
      best_const = std::max(best_const, u);
    }
    br[i] = best_const;
    for (int x = 0; x < A; ++x) {
      if (mass[x] < kUnreachableMass) continue;
      mod[i] += *std::max_element(v.begin() + x * A, v.begin() + (x + 1) * A);
    }
  }
}

std::string Fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

nlohmann::ordered_json Num(double x) {
  return std::isnan(x) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(x);
}

}  // namespace

std::vector<double> OneStepCceGap(const std::vector<int>& num_actions,
                                  std::span<const double> means,
                                  std::span<const double> dist) {
  const auto t = CheckOneStep(num_actions, means, dist);
  std::vector<double> br, mod;
  OneStepDeviations(t, means, dist, br, mod);
  const auto v = OneStepValue(t, means, dist);
  for (int i = 0; i < t.m; ++i) br[i] -= v[i];
  return br;
}

std::vector<double> OneStepCeGap(const std::vector<int>& num_actions,
                                 std::span<const double> means,
                                 std::span<const double> dist) {
  const auto t = CheckOneStep(num_actions, means, dist);
  std::vector<double> br, mod;
  OneStepDeviations(t, means, dist, br, mod);
  const auto v = OneStepValue(t, means, dist);
  for (int i = 0; i < t.m; ++i) mod[i] -= v[i];
  return mod;
}

double GapReport::MaxCceGap(const std::string& method) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (r.method == method) worst = std::max(worst, r.cce_gap);
  }
  return worst;
}

GapReport OneStepGapReport(const std::vector<int>& num_actions,
                           std::span<const double> means,
                           std::span<const double> dist) {
  const auto t = CheckOneStep(num_actions, means, dist);
  std::vector<double> br, mod;
  OneStepDeviations(t, means, dist, br, mod);
  const auto v = OneStepValue(t, means, dist);
  GapReport report{"one-step", {}};
  for (int i = 0; i < t.m; ++i) {
    report.rows.push_back({.player = i,
                           .method = "exact",
                           .value = v[i],
                           .best_response = br[i],
                           .best_modification = mod[i],
                           .ne_gap = kNaN,
                           .cce_gap = br[i] - v[i],
                           .ce_gap = mod[i] - v[i],
                           .se = 0.0,
                           .confidence_gap = kNaN});
  }
  return report;
}

GapReport ProductGapReport(const MarkovGame& game,
                           const MarkovProductPolicy& policy) {
  policy.ValidateFor(game);
  const auto v = ExactValue(game, policy);
  GapReport report{"product", {}};
  for (int i = 0; i < game.num_players(); ++i) {
    const double br = BestResponseValue(game, policy, i).value;
    const double gap = br - v[i];
    report.rows.push_back({.player = i,
                           .method = "exact-dp",
                           .value = v[i],
                           .best_response = br,
                           .best_modification = br,
                           .ne_gap = gap,
                           .cce_gap = gap,
                           .ce_gap = gap,
                           .se = 0.0,
                           .confidence_gap = kNaN});
  }
  return report;
}

GapReport CertifiedGapReportFull(const MarkovGame& game,
                                 const RunHistory& history,
                                 const CertifiedEvalOptions& options) {
  Require(options.mc_episodes >= 0, kOrigin, "mc_episodes must be >= 0");
  CertifiedEvaluator eval(game, history);
  const auto v = eval.Value();
  std::vector<double> conf(game.num_players(), kNaN);
  if (history.has_snapshots()) conf = GapBoundFromConfidence(history);
  GapReport report{"certified", {}};
  for (int i = 0; i < game.num_players(); ++i) {
    const double br = eval.OmniscientDeviation(i, DeviationMode::kBestResponse);
    const double mod =
        eval.OmniscientDeviation(i, DeviationMode::kBestModification);
    report.rows.push_back({.player = i,
                           .method = "omniscient",
                           .value = v[i],
                           .best_response = br,
                           .best_modification = mod,
                           .ne_gap = kNaN,
                           .cce_gap = br - v[i],
                           .ce_gap = mod - v[i],
                           .se = 0.0,
                           .confidence_gap = conf[i]});
  }
  if (options.mc_episodes > 0) {
    for (int i = 0; i < game.num_players(); ++i) {
      const MarkovDeviation dev = eval.BestMarkovDeviation(i, options.max_passes);
      // One stream per player so adding players never shifts the others.
      const auto mc = CertifiedMonteCarlo(game, history, options.mc_episodes,
                                          Mix64(options.seed + i), &dev);
      report.rows.push_back({.player = i,
                             .method = "monte-carlo",
                             .value = v[i],
                             .best_response = mc.mean[i],
                             .best_modification = kNaN,
                             .ne_gap = kNaN,
                             .cce_gap = mc.mean[i] - v[i],
                             .ce_gap = kNaN,
                             .se = mc.se[i],
                             .confidence_gap = conf[i]});
    }
  }
  return report;
}

std::string GapReportCsv(const GapReport& report) {
  std::string out =
      "player,method,value,best_response,best_modification,ne_gap,cce_gap,"
      "ce_gap,se,confidence_gap\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.player) + "," + r.method + "," + Fmt(r.value) +
           "," + Fmt(r.best_response) + "," + Fmt(r.best_modification) + "," +
           Fmt(r.ne_gap) + "," + Fmt(r.cce_gap) + "," + Fmt(r.ce_gap) + "," +
           Fmt(r.se) + "," + Fmt(r.confidence_gap) + "\n";
  }
  return out;
}

std::string GapReportJson(const GapReport& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"player", r.player},
                    {"method", r.method},
                    {"value", Num(r.value)},
                    {"best_response", Num(r.best_response)},
                    {"best_modification", Num(r.best_modification)},
                    {"ne_gap", Num(r.ne_gap)},
                    {"cce_gap", Num(r.cce_gap)},
                    {"ce_gap", Num(r.ce_gap)},
                    {"se", Num(r.se)},
                    {"confidence_gap", Num(r.confidence_gap)}});
  }
  nlohmann::ordered_json j = {{"object", report.object}, {"rows", rows}};
  return j.dump(2) + "\n";
}

}  // namespace mglab
