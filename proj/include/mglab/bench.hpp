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


// Experiment plumbing: flat key = value configs, generator specs, the seeded
// runner and its on-disk layout.
//
// Run directory:
//   <output>/game.json                 only for generator sources
//   <output>/seed-<s>/curves.csv       episode, conf_gap_<i>[, exact_gap_<i>]
//   <output>/seed-<s>/report.json      GapReport at the final episode
//   <output>/seed-<s>/manifest.json    config echo, seed, game hash, outputs
//   <output>/seed-<s>/history.json     with history = true (cce, ce)
//   <output>/seed-<s>/audit.csv        nash-ca only
//   <output>/curves.csv                per-seed curves merged, seed first
//   <output>/plot.gp                   gnuplot script over the merged file

#ifndef MGLAB_BENCH_HPP_
#define MGLAB_BENCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mglab/game.hpp"

namespace mglab {

inline constexpr int kManifestFormatVersion = 1;

struct ExperimentConfig {
  std::string game;       // path to a game file, or
  std::string generator;  // a generator spec (see GenerateGame)
  std::string algorithm = "cce";  // cce | ce | nash-ca | ucbvi
  std::int64_t episodes = 1000;   // K (cce, ce, ucbvi)
  std::int64_t learner_episodes = 0;  // nash-ca K_i override; 0: theory
  double eps = 0.1;
  std::optional<double> c;
  std::optional<double> iota;
  std::optional<double> p;
  std::vector<std::uint64_t> seeds{0};
  std::string output = "run";
  std::int64_t cadence = 0;      // 0: exact gaps at the final episode only
  std::int64_t curve_every = 1;  // curve rows every n episodes, and at K
  bool history = false;
  std::int64_t mc_episodes = 0;     // Monte Carlo rows in report.json
  std::int64_t ca_mc_episodes = 0;  // nash-ca evaluation episodes N
  int player = 0;                   // ucbvi: learning player
  int threads = 0;                  // 0: hardware concurrency

  // Keys as above; seeds are "1,2,5" or "0-9"; cadence is an integer or
  // "final"; '#' and ';' start comments; [sections] are ignored.
  static ExperimentConfig Parse(const std::string& text);
  // Canonical text form; Parse(ToText()) == *this.
  std::string ToText() const;
  void Validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

// random(m,S,H,A,seed), random-coop(m,S,H,A,seed),
// random-det(m,S,H,A,seed), hard-one-step(m,k,eps), hard-mdp(m,k,eps,H).
// A is one count or a colon list ("2:3"). Hard specs use 2k actions per
// player (2 when k = 1) and embed D and eps in the file. Construction
// warnings (small hard games) go to *warning when given.
std::string GenerateGame(const std::string& spec,
                         std::string* warning = nullptr);

struct RunSummary {
  std::vector<std::uint64_t> seeds;
  std::string output;
  std::string game_hash;
};

RunSummary RunExperiment(const ExperimentConfig& config);

// Re-runs the single seed recorded in a manifest into `output`. Throws if
// the game source no longer hashes to the recorded value.
RunSummary RunFromManifest(const std::string& manifest_text,
                           const std::string& output);

// GapReport JSON for a persisted history (mc_episodes > 0 adds Monte Carlo
// rows seeded by `seed`).
std::string EvalHistory(const std::string& game_text,
                        const std::string& history_text,
                        std::int64_t mc_episodes, std::uint64_t seed);

// Random KL decomposition instances: CSV rows (instance, actions, rounds,
// lhs, rhs, abs_diff). Each instance draws Bernoulli arm means for P and Q
// and a random adaptive rule.
struct KlCheckOptions {
  int instances = 50;
  int max_actions = 3;
  int max_rounds = 4;
  std::uint64_t seed = 0;
};
std::string KlCheckCsv(const KlCheckOptions& options, double* max_diff);

// JSON {"m","k","size","net":[[a_0..a_{m-1}], ...]}.
std::string NetJson(int m, int k);
// Checks that the JSON's net covers its space; sets *size.
bool VerifyNetJson(const std::string& text, std::int64_t* size);

}  // namespace mglab

#endif  // MGLAB_BENCH_HPP_
