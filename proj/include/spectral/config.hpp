#pragma once

// JSON descriptions of copulas and coverage experiments.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "spectral/copula.hpp"

namespace spectral {

inline constexpr const char* kConfigSchema = "scopula/1";

/// Malformed configuration; field() is a dotted path to the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// {"family": "sine_cosine" | "cosine" | "shifted_legendre" | "two_value_step" | "piecewise_sign",
///  "alpha": ..., "breakpoints": [...]}
Basis parse_basis(const nlohmann::json& j, const std::string& path = "basis");

/// Either a named family {"named": "taurho", "mu1": 0.05} or explicit terms
/// {"basis": {...}, "terms": [{"k": 1, "wave": "sine", "lambda": 0.05}, ...]}.
SpectralCopula parse_copula(const nlohmann::json& j, const std::string& path = "copula");

nlohmann::json copula_to_json(const SpectralCopula& c);

enum class ExperimentKind { bernoulli, exponential, mean, mu_w };
enum class VarianceMode { model, iid };
enum class MuWVariance { printed, exact };

std::string_view to_string(ExperimentKind k);
std::string_view to_string(VarianceMode m);

struct ExperimentConfig {
  /// Absent only for mu_w studies, which build taurho(mu1) per cell.
  std::optional<SpectralCopula> copula;
  nlohmann::json copula_json;
  ExperimentKind kind = ExperimentKind::bernoulli;
  std::vector<double> thresholds;  ///< bernoulli
  std::vector<double> rates;       ///< exponential
  std::vector<double> weights;     ///< mu_w
  std::vector<double> mu1_values;  ///< mu_w
  std::size_t n = 1000;
  int replicates = 1000;
  double level = 0.95;
  std::uint64_t master_seed = 1;
  VarianceMode variance_mode = VarianceMode::model;
  MuWVariance mu_w_variance = MuWVariance::printed;
  int repeats = 1;
};

/// {"schema": "scopula/1", "copula": {...}, "experiment": {"kind": "coverage_bernoulli", ...}}
ExperimentConfig parse_experiment(const nlohmann::json& j);

nlohmann::json experiment_to_json(const ExperimentConfig& c);

/// Reads and parses a JSON file; ConfigError with field "<file>" on I/O or syntax errors.
nlohmann::json load_json(const std::string& file);

}  // namespace spectral
