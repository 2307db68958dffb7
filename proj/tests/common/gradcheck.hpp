#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oaht/nn/parameter_store.hpp"

namespace oaht::testing {

inline constexpr double kFdStep = 1e-5;
inline constexpr double kGradRelTol = 1e-5;

struct GradCheckResult {
  double max_rel_err = 0.0;
  std::size_t checked = 0;
  std::string worst;
};

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-4});
}

// Central differences of `loss` against the gradients that `accumulate`
// writes into `store`. At most `per_tensor` coordinates of each tensor are
// probed, chosen at random.
inline GradCheckResult check_gradients(nn::ParameterStore& store, const std::function<double()>& loss,
                                       const std::function<void()>& accumulate, std::size_t per_tensor,
                                       std::mt19937_64& rng) {
  store.zero_grad();
  accumulate();
  GradCheckResult out;
  for (const auto& name : store.names()) {
    const std::vector<double> analytic(store.grads(name).begin(), store.grads(name).end());
    std::vector<std::size_t> coords(analytic.size());
    std::iota(coords.begin(), coords.end(), 0);
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(std::min(per_tensor, coords.size()));
    for (std::size_t i : coords) {
      auto values = store.values(name);
      const double saved = values[i];
      values[i] = saved + kFdStep;
      const double up = loss();
      values[i] = saved - kFdStep;
      const double down = loss();
      values[i] = saved;
      const double numeric = (up - down) / (2 * kFdStep);
      const double err = relative_error(analytic[i], numeric);
      ++out.checked;
      if (err > out.max_rel_err) {
        out.max_rel_err = err;
        out.worst = name + "[" + std::to_string(i) + "] analytic=" + std::to_string(analytic[i]) +
                    " numeric=" + std::to_string(numeric);
      }
    }
  }
  return out;
}

}  // namespace oaht::testing
