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


#include "mglab/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mglab/certified.hpp"
#include "mglab/error.hpp"
#include "mglab/evaluators.hpp"
#include "mglab/generators.hpp"
#include "mglab/hard.hpp"
#include "mglab/io.hpp"
#include "mglab/learners.hpp"
#include "mglab/mpg.hpp"
#include "mglab/rng.hpp"

namespace mglab {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
constexpr const char* kOrigin = "bench-cli";

std::string Trim(std::string_view v) {
  const auto b = v.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = v.find_last_not_of(" \t\r\n");
  return std::string(v.substr(b, e - b + 1));
}

std::vector<std::string> SplitOn(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(Trim(cur));
  if (!text.empty() && text.back() == sep) out.push_back("");
  return out;
}

template <typename T>
T ParseInt(const std::string& v, const std::string& key) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  Require(r.ec == std::errc() && r.ptr == end && !v.empty(), kOrigin,
          key + ": expected an integer, got \"" + v + "\"");
  return out;
}

double ParseDouble(const std::string& v, const std::string& key) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  Require(r.ec == std::errc() && r.ptr == end && !v.empty() &&
              std::isfinite(out),
          kOrigin, key + ": expected a number, got \"" + v + "\"");
  return out;
}

bool ParseBool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  Fail(kOrigin, key + ": expected true or false, got \"" + v + "\"");
}

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::uint64_t> ParseSeeds(const std::string& v) {
  std::vector<std::uint64_t> seeds;
  for (const auto& part : SplitOn(v, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(ParseInt<std::uint64_t>(part, "seeds"));
      continue;
    }
    const auto lo = ParseInt<std::uint64_t>(Trim(part.substr(0, dash)), "seeds");
    const auto hi = ParseInt<std::uint64_t>(Trim(part.substr(dash + 1)), "seeds");
    Require(lo <= hi && hi - lo < 100000, kOrigin, "seeds: bad range " + part);
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

// name(a,b,c) -> {name, {a, b, c}}
std::pair<std::string, std::vector<std::string>> ParseCall(
    const std::string& spec) {
  const auto open = spec.find('(');
  Require(open != std::string::npos && !spec.empty() && spec.back() == ')',
          kOrigin, "generator spec must look like name(args): " + spec);
  return {Trim(spec.substr(0, open)),
          SplitOn(spec.substr(open + 1, spec.size() - open - 2), ',')};
}

std::vector<int> ParseActions(const std::string& v, int m) {
  std::vector<int> out;
  for (const auto& a : SplitOn(v, ':')) out.push_back(ParseInt<int>(a, "A"));
  if (out.size() == 1) out.assign(static_cast<std::size_t>(std::max(m, 1)), out[0]);
  Require(static_cast<int>(out.size()) == m, kOrigin,
          "A must be one count or m counts");
  return out;
}

struct GameSource {
  MarkovGame game;
  std::string text;
  std::string hash;
};

GameSource LoadGame(const ExperimentConfig& cfg) {
  std::string text =
      cfg.generator.empty() ? ReadFile(cfg.game) : GenerateGame(cfg.generator);
  GameDocument doc = GameFromJson(text);
  std::string hash = GitBlobHash(text);
  return {std::move(doc.game), std::move(text), std::move(hash)};
}

struct SeedOutput {
  std::string curves;  // without header
  std::string header;
};

std::string ManifestJson(const ExperimentConfig& cfg, std::uint64_t seed,
                         const std::string& game_hash,
                         const std::map<std::string, std::string>& outputs) {
  Json game = Json::object();
  if (cfg.generator.empty()) {
    game["source"] = "file";
    game["path"] = cfg.game;
  } else {
    game["source"] = "generator";
    game["spec"] = cfg.generator;
  }
  game["hash"] = game_hash;
  Json out = Json::object();
  for (const auto& [name, content] : outputs) out[name] = GitBlobHash(content);
  ExperimentConfig echo = cfg;
  echo.seeds = {seed};
  echo.threads = 0;  // scheduling only; keeps manifests identical
  Json j = {{"format", "mglab-manifest"},
            {"version", kManifestFormatVersion},
            {"seed", seed},
            {"algorithm", cfg.algorithm},
            {"config", echo.ToText()},
            {"game", std::move(game)},
            {"outputs", std::move(out)}};
  return j.dump(2) + "\n";
}

void VLearningSeed(const ExperimentConfig& cfg, const MarkovGame& game,
                   std::uint64_t seed, std::map<std::string, std::string>& files,
                   SeedOutput& out) {
  const Algorithm alg = cfg.algorithm == "ce" ? Algorithm::kCe : Algorithm::kCce;
  LearnerParams params;
  params.episodes = cfg.episodes;
  params.eps = cfg.eps;
  if (cfg.c) params.bonus_c = *cfg.c;
  if (cfg.iota) params.iota = *cfg.iota;
  if (cfg.p) params.p = *cfg.p;
  const RunHistory hist = RunVLearning(alg, game, params, seed);
  const int m = game.num_players();
  const std::int64_t K = hist.episodes();
  const DeviationMode mode = alg == Algorithm::kCe
                                 ? DeviationMode::kBestModification
                                 : DeviationMode::kBestResponse;

  std::string header = "episode";
  for (int i = 0; i < m; ++i) header += ",conf_gap_" + std::to_string(i);
  for (int i = 0; i < m; ++i) header += ",exact_gap_" + std::to_string(i);
  out.header = header;

  std::vector<double> sum(m, 0.0);
  std::string rows;
  for (std::int64_t k = 1; k <= K; ++k) {
    for (int i = 0; i < m; ++i) {
      sum[i] += hist.UpperSnapshot(k, i) - hist.LowerSnapshot(k, i);
    }
    const bool exact = cfg.cadence > 0 ? k % cfg.cadence == 0 : k == K;
    if (k % cfg.curve_every != 0 && k != K && !exact) continue;
    rows += std::to_string(k);
    for (int i = 0; i < m; ++i) rows += "," + Num(sum[i] / static_cast<double>(k));
    if (exact) {
      const RunHistory cut = k == K ? hist : hist.Truncated(k);
      const CertifiedEvaluator ev(game, cut);
      const auto value = ev.Value();
      for (int i = 0; i < m; ++i) {
        rows += "," + Num(ev.OmniscientDeviation(i, mode) - value[i]);
      }
    } else {
      rows += std::string(static_cast<std::size_t>(m), ',');
    }
    rows += "\n";
  }
  out.curves = rows;
  files["curves.csv"] = header + "\n" + rows;

  CertifiedEvalOptions eval;
  eval.mc_episodes = cfg.mc_episodes;
  eval.seed = RngStream::Derive(seed, "bench-eval").NextU64();
  files["report.json"] = GapReportJson(CertifiedGapReportFull(game, hist, eval));
  if (cfg.history) files["history.json"] = HistoryToJson(hist);
}

double PlayerGap(const MarkovGame& game, const MarkovProductPolicy& pol,
                 int i, const std::vector<double>& value) {
  return BestResponseValue(game, pol, i).value - value[i];
}

void NashCaSeed(const ExperimentConfig& cfg, const MarkovGame& game,
                std::uint64_t seed, std::map<std::string, std::string>& files,
                SeedOutput& out) {
  NashCaConfig nc;
  nc.eps = cfg.eps;
  if (cfg.p) nc.p = *cfg.p;
  if (cfg.iota) nc.iota = *cfg.iota;
  if (cfg.c) nc.ucbvi_c = *cfg.c;
  nc.learner_episodes = cfg.learner_episodes;
  nc.mc_episodes = cfg.ca_mc_episodes;
  const NashCaResult res = NashCa(game, nc, seed);
  const int m = game.num_players();

  std::string header = "episode";
  for (int i = 0; i < m; ++i) header += ",exact_gap_" + std::to_string(i);
  out.header = header;
  // Path point j follows the j-th accepted audit row.
  std::vector<std::int64_t> at{0};
  std::int64_t used = 0;
  for (const auto& row : res.audit) {
    used += row.episodes;
    if (row.accepted) at.push_back(used);
  }
  std::string rows;
  for (std::size_t j = 0; j < res.path.size(); ++j) {
    const auto value = ExactValue(game, res.path[j]);
    rows += std::to_string(j < at.size() ? at[j] : used);
    for (int i = 0; i < m; ++i) rows += "," + Num(PlayerGap(game, res.path[j], i, value));
    rows += "\n";
  }
  // Final row after the certifying sweep.
  {
    const auto value = ExactValue(game, res.policy);
    rows += std::to_string(res.total_episodes);
    for (int i = 0; i < m; ++i) rows += "," + Num(PlayerGap(game, res.policy, i, value));
    rows += "\n";
  }
  out.curves = rows;
  files["curves.csv"] = header + "\n" + rows;
  files["audit.csv"] = NashCaAuditCsv(res);
  files["report.json"] = GapReportJson(ProductGapReport(game, res.policy));
}

void UcbviSeed(const ExperimentConfig& cfg, const MarkovGame& game,
               std::uint64_t seed, std::map<std::string, std::string>& files,
               SeedOutput& out) {
  Require(cfg.player >= 0 && cfg.player < game.num_players(), kOrigin,
          "player out of range");
  MarkovProductPolicy others = MarkovProductPolicy::Uniform(game);
  SamplingMdpView view(game, others, cfg.player,
                       RngStream::Derive(seed, "bench-ucbvi-opponents"),
                       RngStream::Derive(seed, "bench-ucbvi-env"));
  UcbviParams params;
  params.episodes = cfg.episodes;
  if (cfg.c) params.c = *cfg.c;
  if (cfg.iota) params.iota = *cfg.iota;
  if (cfg.p) params.p = *cfg.p;
  const UcbviResult res = UcbviUplow(view, params);

  out.header = "episode,upper,lower,conf_gap";
  double sum = 0.0;
  std::string rows;
  const auto K = static_cast<std::int64_t>(res.upper.size());
  for (std::int64_t k = 1; k <= K; ++k) {
    const double u = res.upper[k - 1], l = res.lower[k - 1];
    sum += u - l;
    if (k % cfg.curve_every != 0 && k != K) continue;
    rows += std::to_string(k) + "," + Num(u) + "," + Num(l) + "," +
            Num(sum / static_cast<double>(k)) + "\n";
  }
  out.curves = rows;
  files["curves.csv"] = out.header + "\n" + rows;

  MarkovProductPolicy pol = others;
  const int S = game.num_states();
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < S; ++s) {
      pol.SetPure(h, cfg.player, s, res.policy[static_cast<std::size_t>(h) * S + s]);
    }
  }
  files["report.json"] = GapReportJson(ProductGapReport(game, pol));
}

SeedOutput RunSeed(const ExperimentConfig& cfg, const GameSource& src,
                   std::uint64_t seed) {
  SeedOutput out;
  std::map<std::string, std::string> files;
  if (cfg.algorithm == "nash-ca") {
    NashCaSeed(cfg, src.game, seed, files, out);
  } else if (cfg.algorithm == "ucbvi") {
    UcbviSeed(cfg, src.game, seed, files, out);
  } else {
    VLearningSeed(cfg, src.game, seed, files, out);
  }
  const fs::path dir = fs::path(cfg.output) / ("seed-" + std::to_string(seed));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, kOrigin, "cannot create " + dir.string());
  const std::string manifest = ManifestJson(cfg, seed, src.hash, files);
  for (const auto& [name, content] : files) WriteFile((dir / name).string(), content);
  WriteFile((dir / "manifest.json").string(), manifest);
  return out;
}

std::string PlotScript(const ExperimentConfig& cfg) {
  const int gap_col = cfg.algorithm == "ucbvi" ? 5 : 3;  // merged file columns
  std::string s;
  s += "# gnuplot script over curves.csv (seed first)\n";
  s += "set datafile separator ','\n";
  s += "set key autotitle columnhead\n";
  if (cfg.algorithm != "nash-ca") s += "set logscale x\n";
  s += "set xlabel 'episode'\n";
  s += "set ylabel '" + std::string(cfg.algorithm == "nash-ca" ? "exact gap" : "confidence gap") + "'\n";
  s += "set terminal pngcairo size 900,600\n";
  s += "set output 'curves.png'\n";
  s += "seeds = \"";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    s += (i ? " " : "") + std::to_string(cfg.seeds[i]);
  }
  s += "\"\n";
  s += "plot for [s in seeds] 'curves.csv' using ($1 == s+0 ? $2 : 1/0):" +
       std::to_string(gap_col) +
       " with lines title 'seed '.s\n";
  return s;
}

}  // namespace

ExperimentConfig ExperimentConfig::Parse(const std::string& text) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto cut = raw.find_first_of("#;");
    std::string line = Trim(raw.substr(0, cut));
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    Require(eq != std::string::npos, kOrigin,
            "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = Trim(line.substr(0, eq));
    const std::string v = Trim(line.substr(eq + 1));
    Require(seen[key]++ == 0, kOrigin, "duplicate key " + key);
    if (key == "game") cfg.game = v;
    else if (key == "generator") cfg.generator = v;
    else if (key == "algorithm") cfg.algorithm = v;
    else if (key == "episodes") cfg.episodes = ParseInt<std::int64_t>(v, key);
    else if (key == "learner_episodes") cfg.learner_episodes = ParseInt<std::int64_t>(v, key);
    else if (key == "eps") cfg.eps = ParseDouble(v, key);
    else if (key == "c") cfg.c = ParseDouble(v, key);
    else if (key == "iota") cfg.iota = ParseDouble(v, key);
    else if (key == "p") cfg.p = ParseDouble(v, key);
    else if (key == "seeds") cfg.seeds = ParseSeeds(v);
    else if (key == "output") cfg.output = v;
    else if (key == "cadence") cfg.cadence = v == "final" ? 0 : ParseInt<std::int64_t>(v, key);
    else if (key == "curve_every") cfg.curve_every = ParseInt<std::int64_t>(v, key);
    else if (key == "history") cfg.history = ParseBool(v, key);
    else if (key == "mc_episodes") cfg.mc_episodes = ParseInt<std::int64_t>(v, key);
    else if (key == "ca_mc_episodes") cfg.ca_mc_episodes = ParseInt<std::int64_t>(v, key);
    else if (key == "player") cfg.player = ParseInt<int>(v, key);
    else if (key == "threads") cfg.threads = ParseInt<int>(v, key);
    else Fail(kOrigin, "unknown key " + key);
  }
  cfg.Validate();
  return cfg;
}

std::string ExperimentConfig::ToText() const {
  std::string s;
  auto put = [&](const std::string& k, const std::string& v) {
    s += k + " = " + v + "\n";
  };
  if (!game.empty()) put("game", game);
  if (!generator.empty()) put("generator", generator);
  put("algorithm", algorithm);
  put("episodes", std::to_string(episodes));
  put("learner_episodes", std::to_string(learner_episodes));
  put("eps", Num(eps));
  if (c) put("c", Num(*c));
  if (iota) put("iota", Num(*iota));
  if (p) put("p", Num(*p));
  std::string seed_list;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    seed_list += (i ? "," : "") + std::to_string(seeds[i]);
  }
  put("seeds", seed_list);
  put("output", output);
  put("cadence", cadence > 0 ? std::to_string(cadence) : "final");
  put("curve_every", std::to_string(curve_every));
  put("history", history ? "true" : "false");
  put("mc_episodes", std::to_string(mc_episodes));
  put("ca_mc_episodes", std::to_string(ca_mc_episodes));
  put("player", std::to_string(player));
  put("threads", std::to_string(threads));
  return s;
}

void ExperimentConfig::Validate() const {
  Require(game.empty() != generator.empty(), kOrigin,
          "exactly one of game and generator must be set");
  Require(algorithm == "cce" || algorithm == "ce" || algorithm == "nash-ca" ||
              algorithm == "ucbvi",
          kOrigin, "algorithm must be cce, ce, nash-ca or ucbvi");
  Require(episodes >= 1, kOrigin, "episodes must be positive");
  Require(learner_episodes >= 0 && mc_episodes >= 0 && ca_mc_episodes >= 0,
          kOrigin, "episode counts must be nonnegative");
  Require(!seeds.empty(), kOrigin, "seeds must be nonempty");
  Require(cadence >= 0, kOrigin, "cadence must be positive or final");
  Require(cadence == 0 || episodes % cadence == 0, kOrigin,
          "cadence must divide episodes");
  Require(curve_every >= 1, kOrigin, "curve_every must be positive");
  Require(threads >= 0 && player >= 0, kOrigin, "threads and player must be >= 0");
  Require(!output.empty(), kOrigin, "output must be set");
}

std::string GenerateGame(const std::string& spec, std::string* warning) {
  const auto [name, args] = ParseCall(Trim(spec));
  if (name == "random" || name == "random-coop" || name == "random-det") {
    Require(args.size() == 5, kOrigin, name + " takes (m,S,H,A,seed)");
    RandomGameSpec g;
    g.num_players = ParseInt<int>(args[0], "m");
    g.num_states = ParseInt<int>(args[1], "S");
    g.horizon = ParseInt<int>(args[2], "H");
    g.num_actions = ParseActions(args[3], g.num_players);
    g.seed = ParseInt<std::uint64_t>(args[4], "seed");
    g.cooperative = name == "random-coop";
    g.kind = name == "random-det" ? RewardKind::kDeterministic
                                  : RewardKind::kBernoulli;
    return GameToJson(RandomGame(g));
  }
  if (name == "hard-one-step" || name == "hard-mdp") {
    const bool mdp = name == "hard-mdp";
    Require(args.size() == (mdp ? 4u : 3u), kOrigin,
            name + (mdp ? " takes (m,k,eps,H)" : " takes (m,k,eps)"));
    const int m = ParseInt<int>(args[0], "m");
    const int k = ParseInt<int>(args[1], "k");
    const double eps = ParseDouble(args[2], "eps");
    Require(m >= 1 && k >= 1, kOrigin, "m and k must be positive");
    const std::vector<int> A(static_cast<std::size_t>(m), 2 * k);
    const OneStepHardGame hard = BuildHardGame(A, BlockOneNet(m, k), eps, warning);
    const MarkovGame g =
        mdp ? hard.ToMdp(ParseInt<int>(args[3], "H")) : hard.ToGame();
    return GameToJson(g, &hard.good, &hard.eps);
  }
  Fail(kOrigin, "unknown generator " + name);
}

RunSummary RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const GameSource src = LoadGame(config);
  std::error_code ec;
  fs::create_directories(config.output, ec);
  if (ec) throw Error(ErrorKind::kIo, kOrigin, "cannot create " + config.output);
  if (!config.generator.empty()) {
    WriteFile((fs::path(config.output) / "game.json").string(), src.text);
  }

  const std::size_t n = config.seeds.size();
  std::vector<SeedOutput> outs(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < n;) {
      try {
        outs[j] = RunSeed(config, src, config.seeds[j]);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  std::size_t workers = config.threads > 0
                            ? static_cast<std::size_t>(config.threads)
                            : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::string merged = "seed," + outs[0].header + "\n";
  for (std::size_t j = 0; j < n; ++j) {
    std::istringstream rows(outs[j].curves);
    for (std::string row; std::getline(rows, row);) {
      merged += std::to_string(config.seeds[j]) + "," + row + "\n";
    }
  }
  WriteFile((fs::path(config.output) / "curves.csv").string(), merged);
  WriteFile((fs::path(config.output) / "plot.gp").string(),
            PlotScript(config));
  return {config.seeds, config.output, src.hash};
}

RunSummary RunFromManifest(const std::string& manifest_text,
                           const std::string& output) {
  Json j;
  try {
    j = Json::parse(manifest_text);
  } catch (const Json::exception& e) {
    Fail(kOrigin, std::string("malformed manifest: ") + e.what());
  }
  Require(j.is_object() && j.value("format", "") == "mglab-manifest", kOrigin,
          "not a manifest");
  Require(j.value("version", 0) == kManifestFormatVersion, kOrigin,
          "unsupported manifest version");
  ExperimentConfig cfg;
  std::string recorded;
  try {
    cfg = ExperimentConfig::Parse(j.at("config").get<std::string>());
    cfg.seeds = {j.at("seed").get<std::uint64_t>()};
    recorded = j.at("game").at("hash").get<std::string>();
  } catch (const Json::exception& e) {
    Fail(kOrigin, std::string("manifest schema: ") + e.what());
  }
  cfg.output = output;
  const GameSource src = LoadGame(cfg);
  Require(src.hash == recorded, kOrigin,
          "game source hash " + src.hash + " differs from manifest " + recorded);
  return RunExperiment(cfg);
}

std::string EvalHistory(const std::string& game_text,
                        const std::string& history_text,
                        std::int64_t mc_episodes, std::uint64_t seed) {
  const GameDocument doc = GameFromJson(game_text);
  const RunHistory hist = HistoryFromJson(history_text);
  Require(hist.horizon() == doc.game.horizon() &&
              hist.num_states() == doc.game.num_states() &&
              hist.num_actions() == doc.game.num_actions(),
          kOrigin, "history does not match the game");
  CertifiedEvalOptions eval;
  eval.mc_episodes = mc_episodes;
  eval.seed = RngStream::Derive(seed, "bench-eval").NextU64();
  return GapReportJson(CertifiedGapReportFull(doc.game, hist, eval));
}

std::string KlCheckCsv(const KlCheckOptions& o, double* max_diff) {
  Require(o.instances >= 1 && o.max_actions >= 1 && o.max_rounds >= 1, kOrigin,
          "kl-check options must be positive");
  std::string csv = "instance,actions,rounds,lhs,rhs,abs_diff\n";
  double worst = 0.0;
  for (int n = 0; n < o.instances; ++n) {
    RngStream rng = RngStream::Derive(o.seed, "kl-check", static_cast<std::uint64_t>(n));
    const int A = 1 + static_cast<int>(rng.Below(static_cast<std::uint64_t>(o.max_actions)));
    const int rounds = 1 + static_cast<int>(rng.Below(static_cast<std::uint64_t>(o.max_rounds)));
    std::vector<double> p(A), q(A);
    for (int a = 0; a < A; ++a) {
      p[a] = 0.05 + 0.9 * rng.Uniform();
      q[a] = 0.05 + 0.9 * rng.Uniform();
    }
    const KlRule rule = RandomTableRule(rounds, A, rng.NextU64());
    const KlCheck check = KlDecomposition(p, q, rule, rounds);
    const double diff = std::abs(check.lhs - check.rhs);
    worst = std::max(worst, diff);
    csv += std::to_string(n) + "," + std::to_string(A) + "," +
           std::to_string(rounds) + "," + Num(check.lhs) + "," +
           Num(check.rhs) + "," + Num(diff) + "\n";
  }
  if (max_diff != nullptr) *max_diff = worst;
  return csv;
}

std::string NetJson(int m, int k) {
  Require(m >= 1 && k >= 1, kOrigin, "m and k must be positive");
  const auto net = BlockOneNet(m, k);
  const JointActionSpace space(std::vector<int>(static_cast<std::size_t>(m), 2 * k));
  Json points = Json::array();
  for (auto a : net) points.push_back(space.Decode(a));
  Json j = {{"m", m},
            {"k", k},
            {"size", static_cast<std::int64_t>(net.size())},
            {"net", std::move(points)}};
  return j.dump() + "\n";
}

bool VerifyNetJson(const std::string& text, std::int64_t* size) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    Fail(kOrigin, std::string("malformed net: ") + e.what());
  }
  try {
    const int m = j.at("m").get<int>();
    const int k = j.at("k").get<int>();
    Require(m >= 1 && k >= 1, kOrigin, "m and k must be positive");
    const JointActionSpace space(std::vector<int>(static_cast<std::size_t>(m), 2 * k));
    std::vector<std::int64_t> net;
    for (const auto& pt : j.at("net")) {
      const auto a = pt.get<std::vector<int>>();
      Require(static_cast<int>(a.size()) == m, kOrigin, "net point has wrong length");
      for (int x : a) Require(x >= 0 && x < 2 * k, kOrigin, "net point out of range");
      net.push_back(space.Encode(a));
    }
    std::sort(net.begin(), net.end());
    net.erase(std::unique(net.begin(), net.end()), net.end());
    if (size != nullptr) *size = static_cast<std::int64_t>(net.size());
    return IsOneNet(space, net);
  } catch (const Json::exception& e) {
    Fail(kOrigin, std::string("net schema: ") + e.what());
  }
}

}  // namespace mglab
