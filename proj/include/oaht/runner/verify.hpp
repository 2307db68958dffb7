#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace oaht::runner {

struct SuiteResult {
  std::string name;
  int checked = 0;
  int failed = 0;
  double worst = 0.0;  // suite-specific worst observed deviation
  std::string detail;
  bool ok() const { return checked > 0 && failed == 0; }
};

// Welfare-optimal partitions of random symmetric games are inner stable.
SuiteResult verify_inner_stability(int games, std::uint64_t seed);
// With w >= 0 and b = 0 the grand coalition is strictly core stable.
SuiteResult verify_grand_coalition_core(int games, std::uint64_t seed);
// Whenever the z-split condition holds the grand coalition is core stable.
SuiteResult verify_core_condition_soundness(int games, std::uint64_t seed);
// Sup-norm contraction ratio of the optimality backup never exceeds gamma.
SuiteResult verify_contraction(int games, std::uint64_t seed);
// Full Q of a random policy equals the sum of its pairwise and individual parts.
SuiteResult verify_factorization(int games, std::uint64_t seed);
// Welfare-argmax policy dominates every deterministic policy state-wise.
SuiteResult verify_dvsc(int games, std::uint64_t seed);

std::vector<SuiteResult> verify_all(int games, std::uint64_t seed);

}  // namespace oaht::runner
