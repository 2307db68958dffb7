#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace oaht::runner {

struct Series {
  std::vector<int> checkpoints;  // episode numbers
  std::vector<double> values;
};

struct SummaryRow {
  int checkpoint = 0;
  double mean = 0.0;
  double ci_half_width = 0.0;  // 1.96 * sample sd / sqrt(n)
  int n = 0;
};

inline constexpr double kZ95 = 1.96;

// Per checkpoint mean and normal-approximation 95% interval across series.
// Requires >= 2 series over identical checkpoint grids.
std::vector<SummaryRow> aggregate(std::span<const Series> series);

// Reads column `metric` keyed by the "episode" column of a metrics CSV.
Series read_series(const std::filesystem::path& csv, const std::string& metric);

std::string format_summary(std::span<const SummaryRow> rows);

}  // namespace oaht::runner
