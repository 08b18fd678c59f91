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

// Equilibrium auditors: exact one-step CCE/CE gaps, and gap reports for
// product policies and certified policies.

#ifndef MGLAB_EVALUATORS_HPP_
#define MGLAB_EVALUATORS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mglab/game.hpp"
#include "mglab/learners.hpp"

namespace mglab {

// Source actions with less conditional mass are skipped by the CE gap.
inline constexpr double kUnreachableMass = 1e-15;

// `means` is [joint][player], `dist` a distribution over joint actions.
// Per player: max_b E[r_i(b, a_-i)] - E[r_i(a)].
std::vector<double> OneStepCceGap(const std::vector<int>& num_actions,
                                  std::span<const double> means,
                                  std::span<const double> dist);
// Per player: sum over source actions x of the best swap x -> b given the
// conditional law of a_-i.
std::vector<double> OneStepCeGap(const std::vector<int>& num_actions,
                                 std::span<const double> means,
                                 std::span<const double> dist);

struct GapRow {
  int player = 0;
  // "exact" (one-step), "exact-dp" (product policy), "omniscient" (certified,
  // latent-observing deviator) or "monte-carlo" (Markov deviation, with se).
  std::string method;
  double value = 0.0;
  double best_response = 0.0;
  double best_modification = 0.0;
  double ne_gap = 0.0;  // NaN unless the object is a product policy
  double cce_gap = 0.0;
  double ce_gap = 0.0;  // NaN when no modification class was evaluated
  double se = 0.0;
  double confidence_gap = 0.0;  // NaN unless the object came from V-learning
};

struct GapReport {
  std::string object;  // "one-step", "product" or "certified"
  std::vector<GapRow> rows;

  // Worst gap over rows with the given method.
  double MaxCceGap(const std::string& method) const;
};

GapReport OneStepGapReport(const std::vector<int>& num_actions,
                           std::span<const double> means,
                           std::span<const double> dist);
// Exact DP. For a product policy the recommendation carries no information
// about the others, so best modification = best response.
GapReport ProductGapReport(const MarkovGame& game,
                           const MarkovProductPolicy& policy);

struct CertifiedEvalOptions {
  // Monte Carlo episodes for the Markov-deviation rows; 0 skips them.
  std::int64_t mc_episodes = 0;
  std::uint64_t seed = 0;
  int max_passes = 50;
};

// "omniscient" rows (exact upper bounds on deviation values) and optionally
// "monte-carlo" rows (best local Markov deviation, a lower bound).
GapReport CertifiedGapReportFull(const MarkovGame& game,
                                 const RunHistory& history,
                                 const CertifiedEvalOptions& options);

std::string GapReportCsv(const GapReport& report);
// NaN fields serialise as null.
std::string GapReportJson(const GapReport& report);

}  // namespace mglab

#endif  // MGLAB_EVALUATORS_HPP_
