#pragma once

// Coverage-probability studies: replicate chains, build intervals, count how many cover the truth.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spectral/config.hpp"

namespace spectral {

struct CoverageRow {
  int repeat = 0;
  std::string parameter;  ///< "a", "rate", "mean" or "w"
  double value = 0.0;
  std::optional<double> mu1;  ///< mu_w studies only
  double true_value = 0.0;
  double variance = 0.0;  ///< asymptotic variance used for every interval of the cell
  std::string variance_formula;
  int covered = 0;
  int replicates = 0;
  std::string error;  ///< non-empty when the cell aborted

  double coverage_percent() const { return replicates > 0 ? 100.0 * covered / replicates : 0.0; }
};

struct CoverageTable {
  ExperimentConfig config;
  std::vector<CoverageRow> rows;
};

/// mu1 when c is exactly taurho(mu1) on the sine-cosine basis.
std::optional<double> taurho_parameter(const SpectralCopula& c);

/// Deterministic for a fixed master seed regardless of `threads` (0 = default worker count).
CoverageTable run_coverage(const ExperimentConfig& config, unsigned threads = 0);

/// RFC-4180 CSV with one header row.
std::string to_csv(const CoverageTable& table);
nlohmann::json to_json(const CoverageTable& table);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace spectral
