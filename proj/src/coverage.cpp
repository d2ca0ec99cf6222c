#include "spectral/coverage.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <mutex>

#include "spectral/estimation.hpp"
#include "spectral/parallel.hpp"
#include "spectral/sampling.hpp"

namespace spectral {
namespace {

using Evaluator = std::function<bool(std::span<const double>)>;

struct Cell {
  std::size_t row = 0;
  Evaluator covers;
};

/// Cells sharing one chain per replicate, drawn from stream (master, experiment, r).
struct Group {
  std::uint64_t experiment = 0;
  SpectralCopula copula;
  std::vector<Cell> cells;
};

std::uint64_t experiment_id(int repeat, std::size_t group) {
  return (static_cast<std::uint64_t>(repeat) << 32) | static_cast<std::uint64_t>(group);
}

Evaluator mean_evaluator(MarginalTransform f, double truth, std::size_t n, double sigma2, double level) {
  return [=](std::span<const double> u) {
    double s = 0.0;
    for (double x : u) s += f(x);
    return interval(s / static_cast<double>(u.size()), n, sigma2, level).contains(truth);
  };
}

CoverageRow make_row(std::string parameter, double value, double truth) {
  CoverageRow row;
  row.parameter = std::move(parameter);
  row.value = value;
  row.true_value = truth;
  return row;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void add_mean_group(const ExperimentConfig& cfg, int rep, std::vector<Group>& groups, std::vector<CoverageRow>& rows) {
  const SpectralCopula& c = *cfg.copula;
  const auto mu1 = taurho_parameter(c);
  const bool model = cfg.variance_mode == VarianceMode::model;

  auto push_row = [&](CoverageRow row, Group& g, const MarginalTransform& f) {
    row.repeat = rep;
    row.replicates = cfg.replicates;
    g.cells.push_back({rows.size(), mean_evaluator(f, row.true_value, cfg.n, row.variance, cfg.level)});
    rows.push_back(std::move(row));
  };

  switch (cfg.kind) {
    case ExperimentKind::bernoulli: {
      Group g{experiment_id(rep, 0), c, {}};
      for (double a : cfg.thresholds) {
        CoverageRow row = make_row("a", a, a);
        if (!model) {
          row.variance = a * (1.0 - a);
          row.variance_formula = "iid";
        } else if (mu1) {
          row.variance = sigma2_bernoulli(a, *mu1);
          row.variance_formula = std::string(to_string(VarianceFormula::bernoulli));
        } else {
          const double cut[] = {a};
          row.variance = sigma2_general(c, [a](double x) { return x <= a ? 1.0 : 0.0; }, cut);
          row.variance_formula = "Spectral";
        }
        push_row(std::move(row), g, MarginalTransform::bernoulli(a));
      }
      groups.push_back(std::move(g));
      break;
    }
    case ExperimentKind::exponential: {
      for (std::size_t i = 0; i < cfg.rates.size(); ++i) {
        const double rate = cfg.rates[i];
        Group g{experiment_id(rep, i), c, {}};
        CoverageRow row = make_row("rate", rate, rate);
        if (!model) {
          row.variance = rate * rate;
          row.variance_formula = "iid";
        } else if (mu1) {
          row.variance = sigma2_exponential(rate, *mu1);
          row.variance_formula = std::string(to_string(VarianceFormula::exponential));
        } else {
          row.variance = sigma2_general(c, [rate](double x) { return -rate * std::log1p(-x); });
          row.variance_formula = "Spectral";
        }
        push_row(std::move(row), g, MarginalTransform::exponential(rate));
        groups.push_back(std::move(g));
      }
      break;
    }
    case ExperimentKind::mean: {
      Group g{experiment_id(rep, 0), c, {}};
      CoverageRow row = make_row("mean", 0.5, 0.5);
      if (!model) {
        row.variance = 1.0 / 12.0;
        row.variance_formula = "iid";
      } else if (mu1) {
        row.variance = sigma2_uniform(*mu1);
        row.variance_formula = std::string(to_string(VarianceFormula::uniform));
      } else {
        row.variance = sigma2_general(c, [](double x) { return x; });
        row.variance_formula = "Spectral";
      }
      push_row(std::move(row), g, MarginalTransform::uniform());
      groups.push_back(std::move(g));
      break;
    }
    case ExperimentKind::mu_w: break;
  }
}

void add_mu_w_groups(const ExperimentConfig& cfg, int rep, std::vector<Group>& groups, std::vector<CoverageRow>& rows) {
  const bool model = cfg.variance_mode == VarianceMode::model;
  for (std::size_t i = 0; i < cfg.mu1_values.size(); ++i) {
    const double mu1 = cfg.mu1_values[i];
    Group g{experiment_id(rep, i), taurho(mu1), {}};
    for (double w : cfg.weights) {
      CoverageRow row = make_row("w", w, mu1);
      row.repeat = rep;
      row.mu1 = mu1;
      row.replicates = cfg.replicates;
      if (!model) {
        row.variance = mu_w_variance_exact(w, 0.0, 0.0);
        row.variance_formula = "iid";
      } else if (cfg.mu_w_variance == MuWVariance::printed) {
        row.variance = mu_w_variance_printed(w, mu1);
        row.variance_formula = "MuWPrinted";
      } else {
        row.variance = mu_w_variance_exact(w, mu1, -4.0 * mu1);
        row.variance_formula = "MuWExact";
      }
      const double sigma2 = row.variance;
      const double level = cfg.level;
      g.cells.push_back({rows.size(), [=](std::span<const double> u) {
                           const WeightedEstimate e = estimate_mu_weighted(u, w);
                           return interval(e.estimate, e.n - 1, sigma2, level).contains(mu1);
                         }});
      rows.push_back(std::move(row));
    }
    groups.push_back(std::move(g));
  }
}

}  // namespace

std::optional<double> taurho_parameter(const SpectralCopula& c) {
  if (!std::holds_alternative<family::SineCosine>(c.basis().family())) return std::nullopt;
  const double mu1 = c.coefficient({1, Wave::sine});
  for (const Term& t : c.terms()) {
    const bool first = t.index == BasisIndex{1, Wave::sine};
    const bool second = t.index == BasisIndex{2, Wave::sine};
    if (!first && !second && t.lambda != 0.0) return std::nullopt;
  }
  if (std::abs(c.coefficient({2, Wave::sine}) + 4.0 * mu1) > 1e-15) return std::nullopt;
  return mu1;
}

CoverageTable run_coverage(const ExperimentConfig& config, unsigned threads) {
  if (config.kind != ExperimentKind::mu_w && !config.copula)
    throw std::invalid_argument("run_coverage: experiment needs a copula");
  CoverageTable table{config, {}};
  std::vector<Group> groups;
  for (int rep = 0; rep < config.repeats; ++rep) {
    if (config.kind == ExperimentKind::mu_w) {
      add_mu_w_groups(config, rep, groups, table.rows);
    } else {
      add_mean_group(config, rep, groups, table.rows);
    }
  }

  const auto R = static_cast<std::size_t>(config.replicates);
  // hits[row * R + r] = 1 when replicate r of the row's cell covers the truth
  std::vector<unsigned char> hits(table.rows.size() * R, 0);
  std::vector<std::string> errors(groups.size());
  std::mutex error_mutex;

  parallel_for(groups.size() * R, threads, [&](std::size_t task) {
    const std::size_t gi = task / R;
    const std::size_t r = task % R;
    const Group& g = groups[gi];
    try {
      Rng rng = make_stream(config.master_seed, g.experiment, r);
      const std::vector<double> u = generate_states(g.copula, config.n, rng);
      for (const Cell& cell : g.cells) hits[cell.row * R + r] = cell.covers(u) ? 1 : 0;
    } catch (const std::exception& e) {
      std::lock_guard lock(error_mutex);
      if (errors[gi].empty()) errors[gi] = e.what();
    }
  });

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    for (const Cell& cell : groups[gi].cells) {
      CoverageRow& row = table.rows[cell.row];
      row.error = errors[gi];
      if (!row.error.empty()) continue;
      int covered = 0;
      for (std::size_t r = 0; r < R; ++r) covered += hits[cell.row * R + r];
      row.covered = covered;
    }
  }
  return table;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

std::string to_csv(const CoverageTable& table) {
  std::string out =
      "repeat,kind,parameter,value,mu1,true_value,variance,variance_formula,variance_mode,covered,replicates,"
      "coverage_percent,error\r\n";
  const std::string kind(to_string(table.config.kind));
  const std::string mode(to_string(table.config.variance_mode));
  for (const CoverageRow& r : table.rows) {
    out += std::to_string(r.repeat) + "," + kind + "," + r.parameter + "," + format_double(r.value) + ",";
    if (r.mu1) out += format_double(*r.mu1);
    out += "," + format_double(r.true_value) + "," + format_double(r.variance) + "," + quote(r.variance_formula) +
           "," + mode + "," + std::to_string(r.covered) + "," + std::to_string(r.replicates) + "," +
           format_double(r.coverage_percent()) + "," + quote(r.error) + "\r\n";
  }
  return out;
}

nlohmann::json to_json(const CoverageTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const CoverageRow& r : table.rows) {
    nlohmann::json j{{"repeat", r.repeat},
                     {"parameter", r.parameter},
                     {"value", r.value},
                     {"true_value", r.true_value},
                     {"variance", r.variance},
                     {"variance_formula", r.variance_formula},
                     {"covered", r.covered},
                     {"replicates", r.replicates},
                     {"coverage_percent", r.coverage_percent()}};
    if (r.mu1) j["mu1"] = *r.mu1;
    if (!r.error.empty()) j["error"] = r.error;
    rows.push_back(std::move(j));
  }
  return {{"config", experiment_to_json(table.config)}, {"rows", std::move(rows)}};
}

}  // namespace spectral
