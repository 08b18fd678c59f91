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


// Exercises the shared library through its C header only.

#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "mglab/mglab.h"

namespace {

std::string Take(char* s) {
  std::string out = s ? s : "";
  mglab_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("status codes and last error") {
  mglab_game* g = nullptr;
  CHECK(mglab_game_generate("hard-one-step(3,1,0.9)", &g) == MGLAB_ERR_INVALID);
  CHECK(g == nullptr);
  CHECK(std::string(mglab_last_error()).find("hard-instances") != std::string::npos);
  CHECK(mglab_game_load("/nonexistent/game.json", &g) == MGLAB_ERR_IO);
  CHECK(mglab_game_from_json("{not json", &g) == MGLAB_ERR_INVALID);
  CHECK(mglab_game_generate(nullptr, &g) == MGLAB_ERR_INVALID);
  CHECK(mglab_game_generate("random(2,2,2,2,0)", &g) == MGLAB_OK);
  CHECK(std::string(mglab_last_error()).empty());
  mglab_game_free(g);

  // Errors are per thread.
  mglab_game_generate("nope(1)", &g);
  std::string other = "unset";
  std::thread t([&] { other = mglab_last_error(); });
  t.join();
  CHECK(other.empty());
  CHECK_FALSE(std::string(mglab_last_error()).empty());
}

TEST_CASE("game and history handles") {
  mglab_game* g = nullptr;
  REQUIRE(mglab_game_generate("random(2,2,3,2:3,4)", &g) == MGLAB_OK);
  int m = 0, H = 0, S = 0, a1 = 0;
  CHECK(mglab_game_dims(g, &m, &H, &S) == MGLAB_OK);
  CHECK(m == 2);
  CHECK(H == 3);
  CHECK(S == 2);
  CHECK(mglab_game_num_actions(g, 1, &a1) == MGLAB_OK);
  CHECK(a1 == 3);
  CHECK(mglab_game_num_actions(g, 2, &a1) == MGLAB_ERR_INVALID);

  char* text = nullptr;
  REQUIRE(mglab_game_to_json(g, &text) == MGLAB_OK);
  const std::string json = Take(text);
  mglab_game* g2 = nullptr;
  REQUIRE(mglab_game_from_json(json.c_str(), &g2) == MGLAB_OK);
  REQUIRE(mglab_game_to_json(g2, &text) == MGLAB_OK);
  CHECK(Take(text) == json);
  mglab_game_free(g2);

  mglab_history* h = nullptr;
  CHECK(mglab_learn(g, "nope", 10, 0, 1, &h) == MGLAB_ERR_INVALID);
  REQUIRE(mglab_learn(g, "cce", 1, 0, 1, &h) == MGLAB_OK);
  double gap[2] = {0, 0};
  REQUIRE(mglab_history_confidence_gap(h, gap, 2) == MGLAB_OK);
  CHECK(gap[0] == 3.0);
  CHECK(gap[1] == 3.0);
  CHECK(mglab_history_confidence_gap(h, gap, 3) == MGLAB_ERR_INVALID);
  mglab_history_free(h);

  REQUIRE(mglab_learn(g, "ce", 300, 0, 2, &h) == MGLAB_OK);
  std::int64_t K = 0;
  CHECK(mglab_history_episodes(h, &K) == MGLAB_OK);
  CHECK(K == 300);
  REQUIRE(mglab_history_to_json(h, &text) == MGLAB_OK);
  const std::string hjson = Take(text);
  mglab_history* h2 = nullptr;
  REQUIRE(mglab_history_from_json(hjson.c_str(), &h2) == MGLAB_OK);
  double v1[2], v2[2];
  REQUIRE(mglab_certified_value(g, h, v1, 2) == MGLAB_OK);
  REQUIRE(mglab_certified_value(g, h2, v2, 2) == MGLAB_OK);
  CHECK(v1[0] == v2[0]);
  CHECK(v1[1] == v2[1]);
  REQUIRE(mglab_certified_report(g, h2, 200, 7, &text) == MGLAB_OK);
  const std::string report = Take(text);
  CHECK(report.find("\"monte-carlo\"") != std::string::npos);
  CHECK(report.find("\"omniscient\"") != std::string::npos);
  mglab_history_free(h2);
  mglab_history_free(h);
  mglab_game_free(g);
}

TEST_CASE("utilities") {
  char* out = nullptr;
  char* warning = nullptr;
  REQUIRE(mglab_generate_json("hard-one-step(3,1,0.1)", &out, &warning) == MGLAB_OK);
  CHECK(std::string(out).find("\"D\"") != std::string::npos);
  CHECK_FALSE(Take(warning).empty());
  mglab_string_free(out);
  REQUIRE(mglab_generate_json("hard-one-step(5,1,0.1)", &out, &warning) == MGLAB_OK);
  CHECK(Take(warning).empty());
  mglab_string_free(out);
  REQUIRE(mglab_blob_hash("", 0, &out) == MGLAB_OK);
  CHECK(Take(out) == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  double worst = 1.0;
  REQUIRE(mglab_kl_check(10, 3, 4, 3, &out, &worst) == MGLAB_OK);
  mglab_string_free(out);
  CHECK(worst <= 1e-10);
  REQUIRE(mglab_net(4, 1, &out) == MGLAB_OK);
  int covers = 0;
  std::int64_t size = 0;
  CHECK(mglab_net_verify(out, &covers, &size) == MGLAB_OK);
  mglab_string_free(out);
  CHECK(covers == 1);
  CHECK(size == 4);  // 3-bit Hamming code times a free bit
  CHECK(mglab_run_config("algorithm = cce\n", nullptr) == MGLAB_ERR_INVALID);
  CHECK(mglab_run_manifest("{}", "x", nullptr) == MGLAB_ERR_INVALID);
}
