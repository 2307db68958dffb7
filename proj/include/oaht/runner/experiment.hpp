#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "oaht/runner/manifest.hpp"
#include "oaht/train/trainer.hpp"

namespace oaht::runner {

inline constexpr const char* kTrainHeader = "episode,steps,mean_return,td_loss,reg_loss,agent_nll,epsilon";
inline constexpr const char* kEvalHeader = "episode,steps,mean_return";

struct EvalRow {
  int episode = 0;
  std::int64_t steps = 0;
  double mean_return = 0.0;
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::filesystem::path dir;
  std::vector<train::EpisodeMetrics> train;
  std::map<int, std::vector<EvalRow>> eval;  // keyed by max agents
};

std::string format_train_row(const train::EpisodeMetrics& m);
std::string format_eval_row(const EvalRow& r);

// Trains one seed, evaluating the greedy policy every saving_frequency
// episodes for each num_players_test. Files go to `dir`; `progress` is called
// after every episode when set.
SeedResult run_seed(const train::ExperimentConfig& config, std::uint64_t seed, const std::filesystem::path& dir,
                    const std::function<void(const train::EpisodeMetrics&)>& progress = {});

// Runs every seed into output_dir/seed_<s>/ (train.csv, eval_<n>.csv,
// checkpoint.bin) and writes output_dir/manifest.json.
std::vector<SeedResult> run_experiment(const RunManifest& manifest,
                                       const std::function<void(const train::EpisodeMetrics&)>& progress = {});

}  // namespace oaht::runner
