#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oaht/cag/game.hpp"
#include "oaht/errors.hpp"

namespace oaht::cag {

using nlohmann::json;

std::string serialize_game(const AffinityGame& game) {
  json j;
  j["n_agents"] = game.n_agents();
  json edges = json::array();
  for (const auto& [edge, w] : game.weights()) edges.push_back({edge.first, edge.second, w});
  j["edges"] = std::move(edges);
  j["singleton_values"] = game.singleton_values();
  j["preference_offsets"] = game.preference_offsets();
  return j.dump(2) + "\n";
}

AffinityGame parse_game(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("malformed game file: ") + e.what());
  }
  try {
    const int n = j.at("n_agents").get<int>();
    EdgeMap weights;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw DomainError("edge entries must be [j, k, weight]");
      const Edge key{e[0].get<int>(), e[1].get<int>()};
      if (!weights.emplace(key, e[2].get<double>()).second) throw DomainError("duplicate edge in game file");
    }
    auto b = j.at("singleton_values").get<std::vector<double>>();
    std::vector<double> offsets;
    if (j.contains("preference_offsets")) offsets = j["preference_offsets"].get<std::vector<double>>();
    return AffinityGame(n, std::move(weights), std::move(b), std::move(offsets));
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed game file: ") + e.what());
  }
}

AffinityGame load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open game file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_game(ss.str());
}

void save_game(const std::string& path, const AffinityGame& game) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write game file: " + path);
  out << serialize_game(game);
}

}  // namespace oaht::cag
