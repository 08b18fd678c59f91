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


// Command-line front end. Links only the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mglab/mglab.h"

namespace {

// 0 ok, 2 validation or unreadable input, 3 numerical, 1 anything else.
int ExitCode(mglab_status s) {
  switch (s) {
    case MGLAB_OK:
      return 0;
    case MGLAB_ERR_INVALID:
    case MGLAB_ERR_IO:
      return 2;
    case MGLAB_ERR_NUMERICAL:
      return 3;
    default:
      return 1;
  }
}

int Report(mglab_status s) {
  if (s != MGLAB_OK) std::cerr << "mglab: " << mglab_last_error() << "\n";
  return ExitCode(s);
}

struct CliFailure {
  int code;
};

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "mglab: cannot read " << path << "\n";
    throw CliFailure{2};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::cerr << "mglab: cannot write " << path << "\n";
    throw CliFailure{2};
  }
}

// Takes ownership of a C API string.
std::string Take(char* s) {
  std::string out = s ? s : "";
  mglab_string_free(s);
  return out;
}

// Drops `key = ...` lines so the override can be appended.
std::string Override(const std::string& config,
                     const std::vector<std::string>& sets) {
  std::vector<std::pair<std::string, std::string>> kv;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "mglab: --set expects key=value, got " << s << "\n";
      throw CliFailure{2};
    }
    kv.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  std::istringstream in(config);
  std::string out;
  for (std::string line; std::getline(in, line);) {
    std::string head = line.substr(0, line.find('='));
    head.erase(0, head.find_first_not_of(" \t"));
    head.erase(head.find_last_not_of(" \t") + 1);
    bool replaced = false;
    for (const auto& [k, v] : kv) replaced |= head == k;
    if (!replaced) out += line + "\n";
  }
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mglab: multi-agent Markov game laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mglab_version()));

  auto* gen = app.add_subcommand("gen", "Generate a game file");
  std::string gen_spec, gen_out;
  gen->add_option("spec", gen_spec,
                  "random(m,S,H,A,seed) | random-coop(...) | random-det(...) | "
                  "hard-one-step(m,k,eps) | hard-mdp(m,k,eps,H)")
      ->required();
  gen->add_option("-o,--output", gen_out, "Output file (default stdout)");

  auto* run = app.add_subcommand("run", "Run an experiment");
  std::string run_config, run_manifest, run_output;
  std::vector<std::string> run_sets;
  auto* config_opt = run->add_option("config", run_config, "Experiment config file");
  auto* manifest_opt =
      run->add_option("--manifest", run_manifest, "Re-run a seed from its manifest.json");
  config_opt->excludes(manifest_opt);
  run->add_option("--output", run_output, "Output directory override");
  run->add_option("--set", run_sets, "Config override key=value (repeatable)");

  auto* eval = app.add_subcommand("eval", "Gap report for a persisted history");
  std::string eval_game, eval_history, eval_out;
  std::int64_t eval_mc = 0;
  std::uint64_t eval_seed = 0;
  eval->add_option("--game", eval_game, "Game file")->required();
  eval->add_option("--history", eval_history, "history.json")->required();
  eval->add_option("--mc", eval_mc, "Monte Carlo episodes for deviation rows");
  eval->add_option("--seed", eval_seed, "Seed for the Monte Carlo rows");
  eval->add_option("-o,--output", eval_out, "Output file (default stdout)");

  auto* kl = app.add_subcommand("kl-check", "Check the KL decomposition on random instances");
  int kl_instances = 50, kl_actions = 3, kl_rounds = 4;
  std::uint64_t kl_seed = 0;
  double kl_tol = 1e-10;
  std::string kl_out;
  kl->add_option("--instances", kl_instances)->capture_default_str();
  kl->add_option("--max-actions", kl_actions)->capture_default_str();
  kl->add_option("--max-rounds", kl_rounds)->capture_default_str();
  kl->add_option("--seed", kl_seed)->capture_default_str();
  kl->add_option("--tol", kl_tol, "Exit 3 when |lhs - rhs| exceeds this")
      ->capture_default_str();
  kl->add_option("-o,--output", kl_out, "CSV file (default stdout)");

  auto* net = app.add_subcommand("net", "Emit or verify a 1-net");
  int net_m = 0, net_k = 1;
  std::string net_verify, net_out;
  auto* m_opt = net->add_option("-m", net_m, "Players");
  net->add_option("-k", net_k, "Block size (2k actions per player)")->capture_default_str();
  auto* verify_opt = net->add_option("--verify", net_verify, "Net JSON to verify");
  m_opt->excludes(verify_opt);
  net->add_option("-o,--output", net_out, "Output file (default stdout)");

  auto* hash = app.add_subcommand("hash", "git blob id of a file");
  std::string hash_file;
  hash->add_option("file", hash_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      char* text = nullptr;
      char* warning = nullptr;
      const mglab_status s = mglab_generate_json(gen_spec.c_str(), &text, &warning);
      if (s != MGLAB_OK) return Report(s);
      const std::string warn = Take(warning);
      if (!warn.empty()) std::cerr << "mglab: warning: " << warn << "\n";
      Emit(Take(text), gen_out);
      return 0;
    }
    if (*run) {
      char* summary = nullptr;
      mglab_status s;
      if (!run_manifest.empty()) {
        if (run_output.empty()) {
          std::cerr << "mglab: --manifest needs --output\n";
          return 2;
        }
        s = mglab_run_manifest(Slurp(run_manifest).c_str(), run_output.c_str(), &summary);
      } else {
        if (run_config.empty()) {
          std::cerr << "mglab: run needs a config file or --manifest\n";
          return 2;
        }
        auto sets = run_sets;
        if (!run_output.empty()) sets.push_back("output=" + run_output);
        const std::string text = Override(Slurp(run_config), sets);
        s = mglab_run_config(text.c_str(), &summary);
      }
      if (s != MGLAB_OK) return Report(s);
      std::cout << Take(summary) << "\n";
      return 0;
    }
    if (*eval) {
      char* report = nullptr;
      const mglab_status s = mglab_eval_files(eval_game.c_str(), eval_history.c_str(),
                                              eval_mc, eval_seed, &report);
      if (s != MGLAB_OK) return Report(s);
      Emit(Take(report), eval_out);
      return 0;
    }
    if (*kl) {
      char* csv = nullptr;
      double worst = 0.0;
      const mglab_status s =
          mglab_kl_check(kl_instances, kl_actions, kl_rounds, kl_seed, &csv, &worst);
      if (s != MGLAB_OK) return Report(s);
      Emit(Take(csv), kl_out);
      std::fprintf(stderr, "max |lhs - rhs| = %.3g\n", worst);
      return worst <= kl_tol ? 0 : 3;
    }
    if (*net) {
      if (!net_verify.empty()) {
        int covers = 0;
        std::int64_t size = 0;
        const mglab_status s = mglab_net_verify(Slurp(net_verify).c_str(), &covers, &size);
        if (s != MGLAB_OK) return Report(s);
        std::cout << (covers ? "covers" : "does not cover") << " (size " << size << ")\n";
        return covers ? 0 : 2;
      }
      char* json = nullptr;
      const mglab_status s = mglab_net(net_m, net_k, &json);
      if (s != MGLAB_OK) return Report(s);
      Emit(Take(json), net_out);
      return 0;
    }
    if (*hash) {
      const std::string data = Slurp(hash_file);
      char* id = nullptr;
      const mglab_status s = mglab_blob_hash(data.data(), data.size(), &id);
      if (s != MGLAB_OK) return Report(s);
      std::cout << Take(id) << "\n";
      return 0;
    }
  } catch (const CliFailure& f) {
    return f.code;
  }
  return 1;
}
