#include "oaht/runner/manifest.hpp"

#include <openssl/sha.h>

#include <array>
#include <cstdio>
#include <json.hpp>

#include "oaht/errors.hpp"

namespace oaht::runner {

using nlohmann::json;

std::string git_blob_hash(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  blob += content;
  std::array<unsigned char, SHA_DIGEST_LENGTH> digest{};
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest.data());
  std::string hex;
  hex.reserve(2 * digest.size());
  for (unsigned char c : digest) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", c);
    hex += buf;
  }
  return hex;
}

RunManifest RunManifest::make(train::ExperimentConfig config, std::vector<std::uint64_t> seeds,
                              std::filesystem::path output_dir) {
  config.validate();
  if (seeds.empty()) throw DomainError("manifest: at least one seed is required");
  RunManifest m;
  m.config_hash = git_blob_hash(train::to_json(config));
  m.config = std::move(config);
  m.seeds = std::move(seeds);
  m.output_dir = std::move(output_dir);
  return m;
}

std::string RunManifest::to_json() const {
  json j;
  j["config"] = json::parse(train::to_json(config));
  j["config_hash"] = config_hash;
  j["output_dir"] = output_dir.string();
  j["seeds"] = seeds;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    auto m = make(train::config_from_json(j.at("config").dump()), j.at("seeds").get<std::vector<std::uint64_t>>(),
                  j.value("output_dir", std::string("runs")));
    if (j.contains("config_hash") && j["config_hash"].get<std::string>() != m.config_hash) {
      throw DomainError("manifest: config_hash does not match the config");
    }
    return m;
  } catch (const json::exception& e) {
    throw DomainError(std::string("manifest: ") + e.what());
  }
}

}  // namespace oaht::runner
