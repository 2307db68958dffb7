#include "oaht/world/openness.hpp"

#include <algorithm>

#include "oaht/errors.hpp"

namespace oaht::world {

OpennessController::OpennessController(OpennessConfig config, std::vector<AgentType> types)
    : config_(config), types_(std::move(types)) {
  config_.validate();
  if (types_.empty()) throw DomainError("at least one teammate type is required");
  const int pool = 2 * (config_.max_agents - 1);
  for (int i = 1; i <= pool; ++i) slots_.push_back(AgentSlot{i, AgentType::Random, SlotStatus::Queued, 0, 0});
}

int OpennessController::sample_active(std::mt19937_64& rng) {
  const int d = std::uniform_int_distribution<int>(config_.active_duration.lo, config_.active_duration.hi)(rng);
  samples_.push_back({true, d});
  return d;
}

int OpennessController::sample_dead(std::mt19937_64& rng) {
  const int d = std::uniform_int_distribution<int>(config_.dead_duration.lo, config_.dead_duration.hi)(rng);
  samples_.push_back({false, d});
  return d;
}

AgentType OpennessController::sample_type(std::mt19937_64& rng) const {
  return types_[std::uniform_int_distribution<std::size_t>(0, types_.size() - 1)(rng)];
}

void OpennessController::reset(std::mt19937_64& rng) {
  samples_.clear();
  queue_.clear();
  const int initial = std::uniform_int_distribution<int>(1, config_.max_agents - 1)(rng);
  for (auto& s : slots_) {
    if (s.id <= initial) {
      s.status = SlotStatus::Active;
      s.type = sample_type(rng);
      s.remaining = sample_active(rng);
      s.wait = 0;
    } else {
      s.status = SlotStatus::Queued;
      s.remaining = 0;
      s.wait = sample_dead(rng);
      queue_.push_back(s.id);
    }
  }
}

OpennessController::Tick OpennessController::tick(std::mt19937_64& rng) {
  Tick out;
  for (AgentId id : queue_) --slots_[id - 1].wait;
  for (auto& s : slots_) {
    if (s.status != SlotStatus::Active) continue;
    if (--s.remaining > 0) continue;
    s.status = SlotStatus::Queued;
    s.wait = sample_dead(rng);
    queue_.push_back(s.id);
    out.left.push_back(s.id);
  }
  int active = static_cast<int>(active_teammates().size()) + 1;
  for (auto it = queue_.begin(); it != queue_.end() && active < config_.max_agents;) {
    AgentSlot& s = slots_[*it - 1];
    if (s.wait > 0) {
      ++it;
      continue;
    }
    s.status = SlotStatus::Active;
    s.type = sample_type(rng);
    s.remaining = sample_active(rng);
    s.wait = 0;
    out.joined.push_back(s.id);
    ++active;
    it = queue_.erase(it);
  }
  std::sort(out.joined.begin(), out.joined.end());
  return out;
}

std::vector<AgentId> OpennessController::active_teammates() const {
  std::vector<AgentId> out;
  for (const auto& s : slots_) {
    if (s.status == SlotStatus::Active) out.push_back(s.id);
  }
  return out;
}

const AgentSlot& OpennessController::slot(AgentId id) const {
  if (id < 1 || id > static_cast<int>(slots_.size())) throw DomainError("unknown teammate id");
  return slots_[id - 1];
}

}  // namespace oaht::world
