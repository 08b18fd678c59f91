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


/* C interface to mglab. Objects are opaque handles; every call returns an
 * mglab_status and, on failure, leaves a message for mglab_last_error() on
 * the calling thread. Strings returned through char** are owned by the
 * caller and released with mglab_string_free. */

#ifndef MGLAB_MGLAB_H_
#define MGLAB_MGLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(MGLAB_BUILDING)
#define MGLAB_API __declspec(dllexport)
#else
#define MGLAB_API __declspec(dllimport)
#endif
#else
#define MGLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mglab_status {
  MGLAB_OK = 0,
  MGLAB_ERR_INTERNAL = 1,
  MGLAB_ERR_INVALID = 2,   /* validation: bad input, caps, schema */
  MGLAB_ERR_NUMERICAL = 3, /* a solver missed its tolerance */
  MGLAB_ERR_IO = 4
} mglab_status;

typedef struct mglab_game mglab_game;
typedef struct mglab_history mglab_history;

MGLAB_API const char* mglab_version(void);
/* Message of the last failed call on this thread ("" if none). */
MGLAB_API const char* mglab_last_error(void);
MGLAB_API void mglab_string_free(char* s);

/* Game file text for a generator spec. *warning, when non-null, receives
 * construction warnings ("" if none). */
MGLAB_API mglab_status mglab_generate_json(const char* spec, char** json,
                                           char** warning);

/* Games. */
MGLAB_API mglab_status mglab_game_generate(const char* spec, mglab_game** out);
MGLAB_API mglab_status mglab_game_from_json(const char* text, mglab_game** out);
MGLAB_API mglab_status mglab_game_load(const char* path, mglab_game** out);
MGLAB_API mglab_status mglab_game_to_json(const mglab_game* game, char** out);
MGLAB_API void mglab_game_free(mglab_game* game);
MGLAB_API mglab_status mglab_game_dims(const mglab_game* game, int* players,
                                       int* horizon, int* states);
MGLAB_API mglab_status mglab_game_num_actions(const mglab_game* game,
                                              int player, int* out);

/* V-learning runs. algorithm is "cce" or "ce"; bonus_c <= 0 keeps the
 * default. */
MGLAB_API mglab_status mglab_learn(const mglab_game* game,
                                   const char* algorithm, int64_t episodes,
                                   double bonus_c, uint64_t seed,
                                   mglab_history** out);
MGLAB_API mglab_status mglab_history_from_json(const char* text,
                                               mglab_history** out);
MGLAB_API mglab_status mglab_history_to_json(const mglab_history* history,
                                             char** out);
MGLAB_API void mglab_history_free(mglab_history* history);
MGLAB_API mglab_status mglab_history_episodes(const mglab_history* history,
                                              int64_t* out);
/* (1/K) sum_k (upper - lower)(s1) per player; out holds `players` values. */
MGLAB_API mglab_status mglab_history_confidence_gap(
    const mglab_history* history, double* out, int players);
/* Exact per-player value of the certified policy. */
MGLAB_API mglab_status mglab_certified_value(const mglab_game* game,
                                             const mglab_history* history,
                                             double* out, int players);
/* GapReport JSON; mc_episodes > 0 adds Monte Carlo rows. */
MGLAB_API mglab_status mglab_certified_report(const mglab_game* game,
                                              const mglab_history* history,
                                              int64_t mc_episodes,
                                              uint64_t seed, char** out);

/* Experiments. Summaries are JSON {"output","seeds","game_hash"}. */
MGLAB_API mglab_status mglab_run_config(const char* config_text,
                                        char** summary);
MGLAB_API mglab_status mglab_run_manifest(const char* manifest_text,
                                          const char* output, char** summary);
MGLAB_API mglab_status mglab_eval_files(const char* game_path,
                                        const char* history_path,
                                        int64_t mc_episodes, uint64_t seed,
                                        char** report_json);
MGLAB_API mglab_status mglab_kl_check(int instances, int max_actions,
                                      int max_rounds, uint64_t seed,
                                      char** csv, double* max_abs_diff);
MGLAB_API mglab_status mglab_net(int m, int k, char** json);
/* *covers is 1 when the net covers its space. */
MGLAB_API mglab_status mglab_net_verify(const char* json, int* covers,
                                        int64_t* size);
/* git blob id of a byte string. */
MGLAB_API mglab_status mglab_blob_hash(const char* data, size_t size,
                                       char** out);

#ifdef __cplusplus
}
#endif

#endif /* MGLAB_MGLAB_H_ */
