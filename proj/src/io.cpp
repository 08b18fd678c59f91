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

#include "mglab/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mglab/error.hpp"

namespace mglab {
namespace {

using Json = nlohmann::ordered_json;
constexpr const char* kOrigin = "io";

Json Parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    Fail(kOrigin, std::string("malformed JSON: ") + e.what());
  }
}

void CheckHeader(const Json& j, const char* format, int version) {
  Require(j.is_object(), kOrigin, "document must be a JSON object");
  Require(j.contains("format") && j["format"] == format, kOrigin,
          std::string("expected format \"") + format + "\"");
  Require(j.contains("version") && j["version"].is_number_integer(), kOrigin,
          "missing version");
  Require(j["version"].get<int>() == version, kOrigin,
          "unsupported version " + j["version"].dump());
}

// Runs `body` and maps json type errors to validation errors.
template <typename F>
auto Guard(F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Json::exception& e) {
    Fail(kOrigin, std::string("schema violation: ") + e.what());
  }
}

const Json& Field(const Json& j, const char* key) {
  Require(j.contains(key), kOrigin, std::string("missing field \"") + key + "\"");
  return j[key];
}

const Json& Sized(const Json& j, std::size_t n, const char* what) {
  Require(j.is_array() && j.size() == n, kOrigin,
          std::string(what) + " has the wrong length");
  return j;
}

}  // namespace

std::string GameToJson(const MarkovGame& game,
                       const std::vector<std::int64_t>* good,
                       const double* eps) {
  const int H = game.horizon(), S = game.num_states(), m = game.num_players();
  const std::int64_t J = game.num_joint_actions();
  Json P = Json::array(), means = Json::array(), kinds = Json::array();
  for (int h = 0; h < H; ++h) {
    Json ph = Json::array(), mh = Json::array(), kh = Json::array();
    for (int s = 0; s < S; ++s) {
      Json ps = Json::array(), ms = Json::array(), ks = Json::array();
      for (std::int64_t a = 0; a < J; ++a) {
        const auto row = game.Transition(h, s, a);
        ps.push_back(Json(std::vector<double>(row.begin(), row.end())));
        Json ma = Json::array(), ka = Json::array();
        for (int i = 0; i < m; ++i) {
          ma.push_back(game.RewardMean(h, s, a, i));
          ka.push_back(game.Kind(h, s, a, i) == RewardKind::kBernoulli ? "bern"
                                                                      : "det");
        }
        ms.push_back(std::move(ma));
        ks.push_back(std::move(ka));
      }
      ph.push_back(std::move(ps));
      mh.push_back(std::move(ms));
      kh.push_back(std::move(ks));
    }
    P.push_back(std::move(ph));
    means.push_back(std::move(mh));
    kinds.push_back(std::move(kh));
  }
  Json j = {{"format", "mglab-game"},
            {"version", kGameFormatVersion},
            {"m", m},
            {"H", H},
            {"S", S},
            {"A", game.num_actions()},
            {"s1", game.initial_state()},
            {"P", std::move(P)},
            {"R", {{"means", std::move(means)}, {"kind", std::move(kinds)}}}};
  if (good != nullptr) j["D"] = *good;
  if (eps != nullptr) j["eps"] = *eps;
  return j.dump() + "\n";
}

GameDocument GameFromJson(const std::string& text) {
  const Json j = Parse(text);
  CheckHeader(j, "mglab-game", kGameFormatVersion);
  return Guard([&] {
    const int m = Field(j, "m").get<int>();
    const int H = Field(j, "H").get<int>();
    const int S = Field(j, "S").get<int>();
    auto A = Field(j, "A").get<std::vector<int>>();
    Require(static_cast<int>(A.size()) == m, kOrigin, "A must have m entries");
    GameTensors t = GameTensors::Zeros(m, H, S, A);
    t.initial_state = Field(j, "s1").get<int>();
    const std::int64_t J = t.joint_size();
    const Json& P = Sized(Field(j, "P"), H, "P");
    const Json& R = Field(j, "R");
    const Json& means = Sized(Field(R, "means"), H, "R.means");
    const Json& kinds = Sized(Field(R, "kind"), H, "R.kind");
    for (int h = 0; h < H; ++h) {
      Sized(P[h], S, "P[h]");
      Sized(means[h], S, "R.means[h]");
      Sized(kinds[h], S, "R.kind[h]");
      for (int s = 0; s < S; ++s) {
        Sized(P[h][s], J, "P[h][s]");
        Sized(means[h][s], J, "R.means[h][s]");
        Sized(kinds[h][s], J, "R.kind[h][s]");
        for (std::int64_t a = 0; a < J; ++a) {
          const Json& row = Sized(P[h][s][a], S, "P[h][s][a]");
          for (int ns = 0; ns < S; ++ns) t.P(h, s, a, ns) = row[ns].get<double>();
          const Json& mr = Sized(means[h][s][a], m, "R.means[h][s][a]");
          const Json& kr = Sized(kinds[h][s][a], m, "R.kind[h][s][a]");
          for (int i = 0; i < m; ++i) {
            t.R(h, s, a, i) = mr[i].get<double>();
            const auto k = kr[i].get<std::string>();
            Require(k == "det" || k == "bern", kOrigin,
                    "reward kind must be \"det\" or \"bern\"");
            t.Kind(h, s, a, i) =
                k == "bern" ? RewardKind::kBernoulli : RewardKind::kDeterministic;
          }
        }
      }
    }
    GameDocument doc{MarkovGame(std::move(t)), std::nullopt, std::nullopt};
    if (j.contains("D")) {
      auto D = j["D"].get<std::vector<std::int64_t>>();
      for (auto a : D) {
        Require(a >= 0 && a < J, kOrigin, "D entry out of range");
      }
      doc.good = std::move(D);
    }
    if (j.contains("eps")) doc.eps = j["eps"].get<double>();
    return doc;
  });
}

std::string HistoryToJson(const RunHistory& hist) {
  const int H = hist.horizon(), S = hist.num_states(), m = hist.num_players();
  Json cells = Json::array();
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      const auto eps = hist.VisitEpisodes(h, s);
      std::vector<double> flat;
      for (std::int64_t l = 1; l <= static_cast<std::int64_t>(eps.size()); ++l) {
        for (int i = 0; i < m; ++i) {
          const auto d = hist.VisitDistribution(h, s, l, i);
          flat.insert(flat.end(), d.begin(), d.end());
        }
      }
      cells.push_back({{"h", h},
                       {"s", s},
                       {"episodes", std::vector<std::int64_t>(eps.begin(), eps.end())},
                       {"dists", std::move(flat)}});
    }
  }
  std::vector<double> upper, lower;
  if (hist.has_snapshots()) {
    for (std::int64_t k = 1; k <= hist.episodes(); ++k) {
      for (int i = 0; i < m; ++i) {
        upper.push_back(hist.UpperSnapshot(k, i));
        lower.push_back(hist.LowerSnapshot(k, i));
      }
    }
  }
  Json final_dists = nullptr;
  if (hist.has_final_distributions()) {
    std::vector<double> flat;
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        for (int i = 0; i < m; ++i) {
          const auto d = hist.FinalDistribution(h, s, i);
          flat.insert(flat.end(), d.begin(), d.end());
        }
      }
    }
    final_dists = std::move(flat);
  }
  const auto& tel = hist.telemetry();
  Json j = {{"format", "mglab-history"},
            {"version", kHistoryFormatVersion},
            {"algorithm", AlgorithmName(hist.algorithm())},
            {"H", H},
            {"S", S},
            {"A", hist.num_actions()},
            {"s1", hist.initial_state()},
            {"K", hist.episodes()},
            {"cells", std::move(cells)},
            {"upper_s1", std::move(upper)},
            {"lower_s1", std::move(lower)},
            {"final", std::move(final_dists)},
            {"telemetry",
             {{"max_fixed_point_residual", tel.max_fixed_point_residual},
              {"subexpert_violations", tel.subexpert_violations},
              {"bound_violations", tel.bound_violations}}}};
  return j.dump() + "\n";
}

RunHistory HistoryFromJson(const std::string& text) {
  const Json j = Parse(text);
  CheckHeader(j, "mglab-history", kHistoryFormatVersion);
  return Guard([&] {
    const auto alg_name = Field(j, "algorithm").get<std::string>();
    Require(alg_name == "cce" || alg_name == "ce", kOrigin,
            "algorithm must be \"cce\" or \"ce\"");
    const Algorithm alg = alg_name == "cce" ? Algorithm::kCce : Algorithm::kCe;
    const int H = Field(j, "H").get<int>();
    const int S = Field(j, "S").get<int>();
    const auto A = Field(j, "A").get<std::vector<int>>();
    const int m = static_cast<int>(A.size());
    int sum_a = 0;
    for (int a : A) sum_a += a;
    RunHistory hist(alg, H, S, A, Field(j, "s1").get<int>());
    const auto K = Field(j, "K").get<std::int64_t>();
    Require(K >= 0, kOrigin, "K must be nonnegative");
    hist.SetEpisodes(K);

    const auto upper = Field(j, "upper_s1").get<std::vector<double>>();
    const auto lower = Field(j, "lower_s1").get<std::vector<double>>();
    Require(upper.size() == lower.size() &&
                (upper.empty() ||
                 upper.size() == static_cast<std::size_t>(K) * m),
            kOrigin, "snapshot arrays have the wrong length");
    for (std::size_t off = 0; off < upper.size(); off += m) {
      hist.BeginEpisode(std::span(upper).subspan(off, m),
                        std::span(lower).subspan(off, m));
    }

    const Json& cells = Sized(Field(j, "cells"), static_cast<std::size_t>(H) * S,
                              "cells");
    std::vector<std::span<const double>> dists(m);
    for (const Json& c : cells) {
      const int h = Field(c, "h").get<int>();
      const int s = Field(c, "s").get<int>();
      const auto eps = Field(c, "episodes").get<std::vector<std::int64_t>>();
      const auto flat = Field(c, "dists").get<std::vector<double>>();
      Require(flat.size() == eps.size() * sum_a, kOrigin,
              "cell distributions have the wrong length");
      for (std::size_t l = 0; l < eps.size(); ++l) {
        std::size_t off = l * sum_a;
        for (int i = 0; i < m; ++i) {
          dists[i] = std::span(flat).subspan(off, A[i]);
          off += A[i];
        }
        hist.AddVisit(h, s, eps[l], dists);
      }
    }

    const Json& fin = Field(j, "final");
    if (!fin.is_null()) {
      const auto flat = fin.get<std::vector<double>>();
      Require(flat.size() == static_cast<std::size_t>(H) * S * sum_a, kOrigin,
              "final distributions have the wrong length");
      std::size_t off = 0;
      for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
          for (int i = 0; i < m; ++i) {
            hist.SetFinalDistribution(h, s, i, std::span(flat).subspan(off, A[i]));
            off += A[i];
          }
        }
      }
    }
    const Json& tel = Field(j, "telemetry");
    auto& t = hist.mutable_telemetry();
    t.max_fixed_point_residual =
        Field(tel, "max_fixed_point_residual").get<double>();
    t.subexpert_violations = Field(tel, "subexpert_violations").get<std::int64_t>();
    t.bound_violations = Field(tel, "bound_violations").get<std::int64_t>();
    hist.Validate();
    return hist;
  });
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, kOrigin, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::kIo, kOrigin, "error reading " + path);
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, kOrigin, "cannot write " + path);
  out << content;
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, kOrigin, "error writing " + path);
}

std::string GitBlobHash(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  const bool ok = ctx != nullptr && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) &&
                  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error(ErrorKind::kIo, kOrigin, "SHA-1 digest failed");
  std::string hex(2 * len, '0');
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(hex.data() + 2 * i, 3, "%02x", digest[i]);
  }
  return hex;
}

}  // namespace mglab
