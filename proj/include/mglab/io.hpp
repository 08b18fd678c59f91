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

// JSON persistence for games and run histories, plus small file helpers.
//
// Game document:
//   {"format": "mglab-game", "version": 1, "m", "H", "S", "A": [...], "s1",
//    "P": [h][s][joint][s'], "R": {"means": [h][s][joint][player],
//    "kind": [h][s][joint][player] of "det" | "bern"}, optional "D": [joint],
//    optional "eps"}
// Floats are written in shortest round-trip form, so reading back is exact.

#ifndef MGLAB_IO_HPP_
#define MGLAB_IO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mglab/game.hpp"
#include "mglab/learners.hpp"

namespace mglab {

inline constexpr int kGameFormatVersion = 1;
inline constexpr int kHistoryFormatVersion = 1;

struct GameDocument {
  MarkovGame game;
  std::optional<std::vector<std::int64_t>> good;  // "D"
  std::optional<double> eps;
};

std::string GameToJson(const MarkovGame& game,
                       const std::vector<std::int64_t>* good = nullptr,
                       const double* eps = nullptr);
// Throws Error(kValidation) on schema violations.
GameDocument GameFromJson(const std::string& text);

std::string HistoryToJson(const RunHistory& history);
RunHistory HistoryFromJson(const std::string& text);

// Throw Error(kIo) on failure.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& content);

// git's object id for a blob: SHA-1 of "blob <size>\0" + content, hex.
std::string GitBlobHash(const std::string& content);

}  // namespace mglab

#endif  // MGLAB_IO_HPP_
