#include "oaht/runner/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace oaht::runner {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

std::string format_train_row(const train::EpisodeMetrics& m) {
  return std::to_string(m.episode) + "," + std::to_string(m.steps) + "," + fmt(m.mean_return) + "," + fmt(m.td_loss) +
         "," + fmt(m.reg_loss) + "," + fmt(m.agent_nll) + "," + fmt(m.epsilon);
}

std::string format_eval_row(const EvalRow& r) {
  return std::to_string(r.episode) + "," + std::to_string(r.steps) + "," + fmt(r.mean_return);
}

SeedResult run_seed(const train::ExperimentConfig& config, std::uint64_t seed, const std::filesystem::path& dir,
                    const std::function<void(const train::EpisodeMetrics&)>& progress) {
  ensure_dir(dir);
  train::ExperimentConfig cfg = config;
  cfg.seed = seed;
  train::Trainer trainer(cfg);
  SeedResult result;
  result.seed = seed;
  result.dir = dir;
  const int episodes = cfg.num_episodes();
  for (int ep = 0; ep < episodes; ++ep) {
    const auto m = trainer.train_episode();
    result.train.push_back(m);
    if (progress) progress(m);
    if (m.episode % cfg.saving_frequency == 0) {
      for (int n : cfg.num_players_test) {
        result.eval[n].push_back({m.episode, m.steps, trainer.evaluate(n, cfg.eval_eps)});
      }
    }
  }

  std::string csv = std::string(kTrainHeader) + "\n";
  for (const auto& m : result.train) csv += format_train_row(m) + "\n";
  write_file(dir / "train.csv", csv);
  for (int n : cfg.num_players_test) {
    std::string e = std::string(kEvalHeader) + "\n";
    for (const auto& r : result.eval[n]) e += format_eval_row(r) + "\n";
    write_file(dir / ("eval_" + std::to_string(n) + ".csv"), e);
  }
  trainer.checkpoint().save_file((dir / "checkpoint.bin").string());
  return result;
}

std::vector<SeedResult> run_experiment(const RunManifest& manifest,
                                       const std::function<void(const train::EpisodeMetrics&)>& progress) {
  ensure_dir(manifest.output_dir);
  write_file(manifest.output_dir / "manifest.json", manifest.to_json());
  std::vector<SeedResult> out;
  for (std::uint64_t seed : manifest.seeds) {
    out.push_back(run_seed(manifest.config, seed, manifest.output_dir / ("seed_" + std::to_string(seed)), progress));
  }
  return out;
}

}  // namespace oaht::runner
