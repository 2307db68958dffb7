#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oaht/errors.hpp"
#include "oaht/nn/parameter_store.hpp"
#include "oaht/runner/aggregate.hpp"
#include "oaht/runner/experiment.hpp"
#include "oaht/runner/verify.hpp"
#include "oaht/train/trainer.hpp"

namespace {

using nlohmann::json;

enum class FieldKind { Real, Integer, Text, IntList };

struct FieldSpec {
  const char* name;
  FieldKind kind;
};

constexpr FieldSpec kFields[] = {
    {"env", FieldKind::Text},
    {"topology", FieldKind::Text},
    {"pair_range", FieldKind::Text},
    {"indiv_range", FieldKind::Text},
    {"lambda", FieldKind::Real},
    {"lr", FieldKind::Real},
    {"gamma", FieldKind::Real},
    {"tau", FieldKind::Real},
    {"update_frequency", FieldKind::Integer},
    {"num_envs", FieldKind::Integer},
    {"eps_start", FieldKind::Real},
    {"eps_end", FieldKind::Real},
    {"eps_fraction", FieldKind::Real},
    {"eps_length", FieldKind::Integer},
    {"max_num_steps", FieldKind::Integer},
    {"weight_predict", FieldKind::Real},
    {"num_players_train", FieldKind::Integer},
    {"num_players_test", FieldKind::IntList},
    {"saving_frequency", FieldKind::Integer},
    {"eval_eps", FieldKind::Integer},
    {"eval_init_seed", FieldKind::Integer},
    {"seed", FieldKind::Integer},
    {"embedding_dim", FieldKind::Integer},
    {"hidden_dim", FieldKind::Integer},
    {"rank", FieldKind::Integer},
    {"rows", FieldKind::Integer},
    {"cols", FieldKind::Integer},
    {"prey_flee_probability", FieldKind::Real},
};

// Config assembled from an optional file, a preset, and per-field flags, in
// that order of precedence (flags win).
struct ConfigOptions {
  std::string file;
  std::string preset;
  std::map<std::string, std::string> values;

  void attach(CLI::App& app) {
    app.add_option("--config", file, "JSON config file");
    app.add_option("--preset", preset, "Preset name (gpl, ciao-s, ciao-c, ciao-{s,c}-{np,fi,zi,ni,nr})");
    for (const auto& f : kFields) {
      std::string flag = std::string("--") + f.name;
      app.add_option(flag, values[f.name], f.name);
    }
  }

  oaht::train::ExperimentConfig build() const {
    json j = json::object();
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw std::runtime_error("cannot open config " + file);
      j = json::parse(in);
    }
    if (!preset.empty()) {
      j["preset"] = preset;
      for (const char* key : {"topology", "pair_range", "indiv_range", "lambda"}) j.erase(key);
    }
    for (const auto& f : kFields) {
      const std::string& v = values.at(f.name);
      if (v.empty()) continue;
      switch (f.kind) {
        case FieldKind::Real:
          j[f.name] = std::stod(v);
          break;
        case FieldKind::Integer:
          j[f.name] = std::stoll(v);
          break;
        case FieldKind::Text:
          j[f.name] = v;
          break;
        case FieldKind::IntList: {
          std::vector<int> list;
          std::stringstream ss(v);
          std::string cell;
          while (std::getline(ss, cell, ',')) list.push_back(std::stoi(cell));
          j[f.name] = list;
          break;
        }
      }
    }
    return oaht::train::config_from_json(j.dump());
  }
};

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) seeds.push_back(std::stoull(cell));
  return seeds;
}

int run_train(const ConfigOptions& opts, const std::string& seeds, const std::string& out, bool quiet) {
  auto cfg = opts.build();
  const auto manifest = oaht::runner::RunManifest::make(cfg, seeds.empty() ? std::vector<std::uint64_t>{cfg.seed}
                                                                           : parse_seeds(seeds),
                                                        out);
  std::cout << "config " << manifest.config_hash << " -> " << manifest.output_dir.string() << "\n";
  const auto results = oaht::runner::run_experiment(manifest, [&](const oaht::train::EpisodeMetrics& m) {
    if (!quiet) std::cout << oaht::runner::format_train_row(m) << "\n" << std::flush;
  });
  for (const auto& r : results) {
    for (const auto& [n, rows] : r.eval) {
      if (rows.empty()) continue;
      std::printf("seed %llu eval_%d final mean_return %.6f\n", static_cast<unsigned long long>(r.seed), n,
                  rows.back().mean_return);
    }
  }
  return 0;
}

int run_eval(const ConfigOptions& opts, const std::string& checkpoint, int players, int episodes, bool random) {
  const auto cfg = opts.build();
  oaht::train::Trainer trainer(cfg);
  if (!checkpoint.empty()) trainer.load_checkpoint(oaht::nn::ParameterStore::load_file(checkpoint));
  const int n = players > 0 ? players : cfg.num_players_train;
  const int eps = episodes > 0 ? episodes : cfg.eval_eps;
  const double ret =
      trainer.evaluate(n, eps, random ? oaht::train::EvalPolicy::UniformRandom : oaht::train::EvalPolicy::Greedy);
  std::printf("max_agents %d episodes %d policy %s mean_return %.6f\n", n, eps, random ? "random" : "greedy", ret);
  return 0;
}

int run_verify(int games, std::uint64_t seed) {
  int failures = 0;
  for (const auto& r : oaht::runner::verify_all(games, seed)) {
    std::printf("%-26s %s checked=%d failed=%d worst=%.3g %s\n", r.name.c_str(), r.ok() ? "PASS" : "FAIL", r.checked,
                r.failed, r.worst, r.detail.c_str());
    if (!r.ok()) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

int run_aggregate(const std::vector<std::string>& files, const std::string& metric, const std::string& out) {
  std::vector<oaht::runner::Series> series;
  for (const auto& f : files) series.push_back(oaht::runner::read_series(f, metric));
  const auto rows = oaht::runner::aggregate(series);
  const std::string text = oaht::runner::format_summary(rows);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream o(out);
    if (!o) throw std::runtime_error("cannot open " + out + " for writing");
    o << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open ad hoc teamwork experiments and oracles"};
  app.require_subcommand(1);

  auto* train = app.add_subcommand("train", "Train one or more seeds and write metric CSVs");
  ConfigOptions train_cfg;
  train_cfg.attach(*train);
  std::string seeds, out = "runs";
  bool quiet = false;
  train->add_option("--seeds", seeds, "Comma-separated seeds (default: --seed)");
  train->add_option("--out", out, "Output directory");
  train->add_flag("--quiet", quiet, "Suppress per-episode output");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  ConfigOptions eval_cfg;
  eval_cfg.attach(*eval);
  std::string checkpoint;
  int players = 0, episodes = 0;
  bool random = false;
  eval->add_option("--checkpoint", checkpoint, "checkpoint.bin written by train");
  eval->add_option("--players", players, "Maximum number of agents");
  eval->add_option("--episodes", episodes, "Evaluation episodes");
  eval->add_flag("--random", random, "Uniform-random learner baseline");

  auto* verify = app.add_subcommand("verify", "Run the game-theory and tabular oracles");
  int games = 50;
  std::uint64_t verify_seed = 1;
  verify->add_option("--games", games, "Random instances per suite");
  verify->add_option("--seed", verify_seed, "RNG seed");

  auto* agg = app.add_subcommand("aggregate", "Mean and 95% interval across seed CSVs");
  std::vector<std::string> files;
  std::string metric = "mean_return", agg_out;
  agg->add_option("files", files, "Metric CSVs, one per seed")->required();
  agg->add_option("--metric", metric, "Column to aggregate");
  agg->add_option("--out", agg_out, "Output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*train) return run_train(train_cfg, seeds, out, quiet);
    if (*eval) return run_eval(eval_cfg, checkpoint, players, episodes, random);
    if (*verify) return run_verify(games, verify_seed);
    if (*agg) return run_aggregate(files, metric, agg_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
