#pragma once

#include <deque>
#include <random>
#include <vector>

#include "oaht/world/types.hpp"

namespace oaht::world {

enum class SlotStatus { Active, Queued };

struct AgentSlot {
  AgentId id = 0;
  AgentType type = AgentType::Random;
  SlotStatus status = SlotStatus::Queued;
  int remaining = 0;  // meaningful while Active
  int wait = 0;       // meaningful while Queued
};

struct DurationSample {
  bool active = true;  // false for a dead (re-entry) duration
  int value = 0;
};

// Teammate pool with active timers and a FIFO re-entry queue. The learner is
// not part of the pool and never leaves.
class OpennessController {
 public:
  struct Tick {
    std::vector<AgentId> joined;
    std::vector<AgentId> left;
  };

  OpennessController(OpennessConfig config, std::vector<AgentType> types);

  const OpennessConfig& config() const { return config_; }
  void reset(std::mt19937_64& rng);
  Tick tick(std::mt19937_64& rng);

  std::vector<AgentId> active_teammates() const;  // ascending
  const AgentSlot& slot(AgentId id) const;
  const std::vector<AgentSlot>& slots() const { return slots_; }
  const std::deque<AgentId>& queue() const { return queue_; }
  // Every duration sampled since the last reset, in sampling order.
  const std::vector<DurationSample>& samples() const { return samples_; }

 private:
  int sample_active(std::mt19937_64& rng);
  int sample_dead(std::mt19937_64& rng);
  AgentType sample_type(std::mt19937_64& rng) const;

  OpennessConfig config_;
  std::vector<AgentType> types_;
  std::vector<AgentSlot> slots_;  // index id - 1
  std::deque<AgentId> queue_;
  std::vector<DurationSample> samples_;
};

}  // namespace oaht::world
