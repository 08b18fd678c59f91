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


#include "mglab/mglab.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "json.hpp"
#include "mglab/bench.hpp"
#include "mglab/certified.hpp"
#include "mglab/error.hpp"
#include "mglab/evaluators.hpp"
#include "mglab/io.hpp"
#include "mglab/learners.hpp"

struct mglab_game {
  mglab::GameDocument doc;
};

struct mglab_history {
  mglab::RunHistory hist;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
mglab_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return MGLAB_OK;
  } catch (const mglab::Error& e) {
    g_last_error = e.what();
    switch (e.kind()) {
      case mglab::ErrorKind::kValidation:
        return MGLAB_ERR_INVALID;
      case mglab::ErrorKind::kNumerical:
        return MGLAB_ERR_NUMERICAL;
      case mglab::ErrorKind::kIo:
        return MGLAB_ERR_IO;
    }
    return MGLAB_ERR_INTERNAL;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return MGLAB_ERR_INTERNAL;
}

void NotNull(const void* p, const char* what) {
  mglab::Require(p != nullptr, "c-api", std::string(what) + " is null");
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::string Summary(const mglab::RunSummary& s) {
  nlohmann::ordered_json j = {
      {"output", s.output}, {"seeds", s.seeds}, {"game_hash", s.game_hash}};
  return j.dump();
}

}  // namespace

extern "C" {

const char* mglab_version(void) { return "0.1.0"; }

const char* mglab_last_error(void) { return g_last_error.c_str(); }

void mglab_string_free(char* s) { std::free(s); }

mglab_status mglab_generate_json(const char* spec, char** json,
                                 char** warning) {
  return Guard([&] {
    NotNull(spec, "spec");
    NotNull(json, "json");
    std::string warn;
    const std::string text = mglab::GenerateGame(spec, &warn);
    *json = Dup(text);
    if (warning) *warning = Dup(warn);
  });
}

mglab_status mglab_game_generate(const char* spec, mglab_game** out) {
  return Guard([&] {
    NotNull(spec, "spec");
    NotNull(out, "out");
    *out = new mglab_game{mglab::GameFromJson(mglab::GenerateGame(spec))};
  });
}

mglab_status mglab_game_from_json(const char* text, mglab_game** out) {
  return Guard([&] {
    NotNull(text, "text");
    NotNull(out, "out");
    *out = new mglab_game{mglab::GameFromJson(text)};
  });
}

mglab_status mglab_game_load(const char* path, mglab_game** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = new mglab_game{mglab::GameFromJson(mglab::ReadFile(path))};
  });
}

mglab_status mglab_game_to_json(const mglab_game* game, char** out) {
  return Guard([&] {
    NotNull(game, "game");
    NotNull(out, "out");
    const auto& d = game->doc;
    *out = Dup(mglab::GameToJson(d.game, d.good ? &*d.good : nullptr,
                                 d.eps ? &*d.eps : nullptr));
  });
}

void mglab_game_free(mglab_game* game) { delete game; }

mglab_status mglab_game_dims(const mglab_game* game, int* players,
                             int* horizon, int* states) {
  return Guard([&] {
    NotNull(game, "game");
    if (players) *players = game->doc.game.num_players();
    if (horizon) *horizon = game->doc.game.horizon();
    if (states) *states = game->doc.game.num_states();
  });
}

mglab_status mglab_game_num_actions(const mglab_game* game, int player,
                                    int* out) {
  return Guard([&] {
    NotNull(game, "game");
    NotNull(out, "out");
    mglab::Require(player >= 0 && player < game->doc.game.num_players(),
                   "c-api", "player out of range");
    *out = game->doc.game.num_actions(player);
  });
}

mglab_status mglab_learn(const mglab_game* game, const char* algorithm,
                         int64_t episodes, double bonus_c, uint64_t seed,
                         mglab_history** out) {
  return Guard([&] {
    NotNull(game, "game");
    NotNull(algorithm, "algorithm");
    NotNull(out, "out");
    const std::string alg = algorithm;
    mglab::Require(alg == "cce" || alg == "ce", "c-api",
                   "algorithm must be cce or ce");
    mglab::Require(episodes >= 1, "c-api", "episodes must be positive");
    mglab::LearnerParams params;
    params.episodes = episodes;
    if (bonus_c > 0.0) params.bonus_c = bonus_c;
    *out = new mglab_history{mglab::RunVLearning(
        alg == "ce" ? mglab::Algorithm::kCe : mglab::Algorithm::kCce,
        game->doc.game, params, seed)};
  });
}

mglab_status mglab_history_from_json(const char* text, mglab_history** out) {
  return Guard([&] {
    NotNull(text, "text");
    NotNull(out, "out");
    *out = new mglab_history{mglab::HistoryFromJson(text)};
  });
}

mglab_status mglab_history_to_json(const mglab_history* history, char** out) {
  return Guard([&] {
    NotNull(history, "history");
    NotNull(out, "out");
    *out = Dup(mglab::HistoryToJson(history->hist));
  });
}

void mglab_history_free(mglab_history* history) { delete history; }

mglab_status mglab_history_episodes(const mglab_history* history,
                                    int64_t* out) {
  return Guard([&] {
    NotNull(history, "history");
    NotNull(out, "out");
    *out = history->hist.episodes();
  });
}

mglab_status mglab_history_confidence_gap(const mglab_history* history,
                                          double* out, int players) {
  return Guard([&] {
    NotNull(history, "history");
    NotNull(out, "out");
    mglab::Require(players == history->hist.num_players(), "c-api",
                   "players does not match the history");
    const auto gap = mglab::GapBoundFromConfidence(history->hist);
    std::copy(gap.begin(), gap.end(), out);
  });
}

mglab_status mglab_certified_value(const mglab_game* game,
                                   const mglab_history* history, double* out,
                                   int players) {
  return Guard([&] {
    NotNull(game, "game");
    NotNull(history, "history");
    NotNull(out, "out");
    mglab::Require(players == game->doc.game.num_players(), "c-api",
                   "players does not match the game");
    const auto v = mglab::CertifiedExactValue(game->doc.game, history->hist);
    std::copy(v.begin(), v.end(), out);
  });
}

mglab_status mglab_certified_report(const mglab_game* game,
                                    const mglab_history* history,
                                    int64_t mc_episodes, uint64_t seed,
                                    char** out) {
  return Guard([&] {
    NotNull(game, "game");
    NotNull(history, "history");
    NotNull(out, "out");
    mglab::CertifiedEvalOptions opt;
    opt.mc_episodes = mc_episodes;
    opt.seed = seed;
    *out = Dup(mglab::GapReportJson(
        mglab::CertifiedGapReportFull(game->doc.game, history->hist, opt)));
  });
}

mglab_status mglab_run_config(const char* config_text, char** summary) {
  return Guard([&] {
    NotNull(config_text, "config");
    const auto s =
        mglab::RunExperiment(mglab::ExperimentConfig::Parse(config_text));
    if (summary) *summary = Dup(Summary(s));
  });
}

mglab_status mglab_run_manifest(const char* manifest_text, const char* output,
                                char** summary) {
  return Guard([&] {
    NotNull(manifest_text, "manifest");
    NotNull(output, "output");
    const auto s = mglab::RunFromManifest(manifest_text, output);
    if (summary) *summary = Dup(Summary(s));
  });
}

mglab_status mglab_eval_files(const char* game_path, const char* history_path,
                              int64_t mc_episodes, uint64_t seed,
                              char** report_json) {
  return Guard([&] {
    NotNull(game_path, "game path");
    NotNull(history_path, "history path");
    NotNull(report_json, "out");
    *report_json = Dup(mglab::EvalHistory(mglab::ReadFile(game_path),
                                          mglab::ReadFile(history_path),
                                          mc_episodes, seed));
  });
}

mglab_status mglab_kl_check(int instances, int max_actions, int max_rounds,
                            uint64_t seed, char** csv, double* max_abs_diff) {
  return Guard([&] {
    NotNull(csv, "out");
    mglab::KlCheckOptions o;
    o.instances = instances;
    o.max_actions = max_actions;
    o.max_rounds = max_rounds;
    o.seed = seed;
    *csv = Dup(mglab::KlCheckCsv(o, max_abs_diff));
  });
}

mglab_status mglab_net(int m, int k, char** json) {
  return Guard([&] {
    NotNull(json, "out");
    *json = Dup(mglab::NetJson(m, k));
  });
}

mglab_status mglab_net_verify(const char* json, int* covers, int64_t* size) {
  return Guard([&] {
    NotNull(json, "json");
    NotNull(covers, "covers");
    std::int64_t n = 0;
    *covers = mglab::VerifyNetJson(json, &n) ? 1 : 0;
    if (size) *size = n;
  });
}

mglab_status mglab_blob_hash(const char* data, size_t size, char** out) {
  return Guard([&] {
    mglab::Require(data != nullptr || size == 0, "c-api", "data is null");
    NotNull(out, "out");
    *out = Dup(mglab::GitBlobHash(std::string(data ? data : "", size)));
  });
}

}  // extern "C"
