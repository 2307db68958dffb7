#pragma once

#include <vector>

#include "oaht/tabular/tabular_game.hpp"

namespace oaht::tabular {

inline constexpr std::size_t kMaxDvscPolicies = 729;

struct DvscReport {
  std::size_t num_policies = 0;
  std::vector<int> best_policy;       // learner action per state
  double best_welfare = 0.0;          // mean over start states of V^best
  std::vector<double> best_values;    // V^best per state
  bool dominant = false;              // V^best(s) >= V^pi(s) for every pi and s
  double worst_gap = 0.0;             // min over pi, s of V^best(s) - V^pi(s)
  bool precondition_holds = false;    // some joint action weakly beats every singleton preference
};

// Enumerates every deterministic learner policy, picks the one maximizing the
// discounted social welfare from a uniform start distribution, and checks that
// it dominates every other policy state-wise. Throws CapacityError beyond
// kMaxDvscPolicies.
DvscReport dvsc_check(const TabularGame& game, double tol = 1e-9);

}  // namespace oaht::tabular
