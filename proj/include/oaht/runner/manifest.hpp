#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "oaht/train/config.hpp"

namespace oaht::runner {

struct RunManifest {
  train::ExperimentConfig config;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir;
  std::string config_hash;  // git blob SHA-1 of the canonical config JSON

  static RunManifest make(train::ExperimentConfig config, std::vector<std::uint64_t> seeds,
                          std::filesystem::path output_dir);
  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

// SHA-1 over "blob <size>\0<content>", lowercase hex.
std::string git_blob_hash(const std::string& content);

}  // namespace oaht::runner
