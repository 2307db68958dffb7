#include "oaht/runner/aggregate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "oaht/errors.hpp"

namespace oaht::runner {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

std::vector<SummaryRow> aggregate(std::span<const Series> series) {
  if (series.size() < 2) throw DomainError("aggregate: at least two series are required");
  const auto& grid = series.front().checkpoints;
  for (const auto& s : series) {
    if (s.checkpoints != grid || s.values.size() != grid.size()) {
      throw DomainError("aggregate: mismatched checkpoint grids");
    }
  }
  const double n = static_cast<double>(series.size());
  std::vector<SummaryRow> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double mean = 0.0;
    for (const auto& s : series) mean += s.values[i];
    mean /= n;
    double ss = 0.0;
    for (const auto& s : series) ss += (s.values[i] - mean) * (s.values[i] - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    out.push_back({grid[i], mean, kZ95 * sd / std::sqrt(n), static_cast<int>(series.size())});
  }
  return out;
}

Series read_series(const std::filesystem::path& csv, const std::string& metric) {
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("cannot open " + csv.string());
  std::string line;
  if (!std::getline(in, line)) throw DomainError(csv.string() + ": missing header");
  const auto header = split(line);
  int ep_col = -1, m_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "episode") ep_col = static_cast<int>(i);
    if (header[i] == metric) m_col = static_cast<int>(i);
  }
  if (ep_col < 0 || m_col < 0) throw DomainError(csv.string() + ": missing column episode or " + metric);
  Series s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw DomainError(csv.string() + ": ragged row");
    try {
      s.checkpoints.push_back(std::stoi(cells[ep_col]));
      s.values.push_back(std::stod(cells[m_col]));
    } catch (const std::exception&) {
      throw DomainError(csv.string() + ": unparsable row '" + line + "'");
    }
  }
  return s;
}

std::string format_summary(std::span<const SummaryRow> rows) {
  std::string out = "checkpoint,mean,ci_half_width,n\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%d\n", r.checkpoint, r.mean, r.ci_half_width, r.n);
    out += buf;
  }
  return out;
}

}  // namespace oaht::runner
