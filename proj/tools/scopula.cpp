// scopula: command-line front end for the spectral copula library.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spectral/association.hpp"
#include "spectral/config.hpp"
#include "spectral/coverage.hpp"
#include "spectral/estimation.hpp"
#include "spectral/mixing.hpp"
#include "spectral/sampling.hpp"
#include "spectral/stats.hpp"

namespace {

using nlohmann::json;
using namespace spectral;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBoundary = 2;
constexpr int kExitInconclusive = 3;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + out);
  f << text;
}

SpectralCopula load_copula(const std::string& file) {
  const json j = load_json(file);
  if (j.is_object() && j.contains("copula")) return parse_copula(j["copula"], "copula");
  return parse_copula(j, "copula");
}

json validity_json(const ValidityReport& r) {
  return {{"verdict", std::string(to_string(r.verdict))},
          {"analytic_ok", r.analytic_ok},
          {"analytic_margin", r.analytic_margin},
          {"grid_min_density", r.grid_min_density},
          {"grid_max_density", r.grid_max_density},
          {"margin_deviation", r.margin_deviation},
          {"grid_adjudicated", r.grid_adjudicated},
          {"grid_size", r.grid_size}};
}

json mixing_json(const MixingReport& r) {
  json folds = json::array();
  for (const FoldBounds& b : r.folds) {
    json f{{"n", b.n}, {"grid_min", b.grid_min}, {"grid_max", b.grid_max}};
    if (b.decomp_lo) f["decomp_bound"] = {*b.decomp_lo, *b.decomp_hi};
    folds.push_back(std::move(f));
  }
  return {{"certificate", std::string(to_string(r.certificate))},
          {"certified_at", r.certified_at},
          {"sup_lambda", r.sup_lambda},
          {"sum_sq_lambda", r.sum_sq_lambda},
          {"rho_n", r.rho_n},
          {"fold_density_bounds", std::move(folds)},
          {"decomp_applies", r.decomp_applies},
          {"truncated", r.truncated},
          {"grid_size", r.grid_size},
          {"max_n", r.max_n}};
}

MarginalTransform make_transform(const std::string& kind, double param) {
  if (kind == "uniform") return MarginalTransform::uniform();
  if (kind == "exponential") return MarginalTransform::exponential(param);
  if (kind == "bernoulli") return MarginalTransform::bernoulli(param);
  throw UsageError("unknown transform \"" + kind + "\"");
}

std::vector<double> read_column(const std::string& file, const std::string& column) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open " + file);
  std::string line;
  if (!std::getline(in, line)) throw UsageError(file + ": empty file");
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      cells.push_back(cell);
    }
    return cells;
  };
  const auto header = split(line);
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == column) col = i;
  if (col == header.size()) throw UsageError(file + ": no column named \"" + column + "\"");
  std::vector<double> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (col >= cells.size()) throw UsageError(file + ":" + std::to_string(row) + ": missing column");
    try {
      values.push_back(std::stod(cells[col]));
    } catch (const std::exception&) {
      throw UsageError(file + ":" + std::to_string(row) + ": not a number");
    }
  }
  return values;
}

struct Options {
  std::string config;
  std::string out;
  std::uint64_t seed = 1;
  bool seed_set = false;
  int grid = kValidityGrid;
  double u = 0.5;
  double v = 0.5;
  std::size_t n = 1000;
  std::string transform = "uniform";
  double param = 1.0;
  int max_n = kDefaultMaxFold;
  unsigned threads = 0;
  std::string input;
  std::string column = "u";
  std::string target = "mu";
  std::string variance = "iid";
  double mu1 = 0.0;
  double w = 0.5;
  double level = 0.95;
  int repeats = 0;
  std::string json_out;
  std::vector<int> terms{1, 2, 5, 10};
};

int run_validate(const Options& o) {
  const ValidityReport r = validate(load_copula(o.config), o.grid);
  emit(validity_json(r).dump(2) + "\n", o.out);
  return kExitOk;
}

int run_density_grid(const Options& o) {
  const SpectralCopula c = load_copula(o.config);
  std::string csv = "u,v,density\r\n";
  for (int i = 0; i < o.grid; ++i) {
    const double u = (i + 0.5) / o.grid;
    for (int j = 0; j < o.grid; ++j) {
      const double v = (j + 0.5) / o.grid;
      csv += format_double(u) + "," + format_double(v) + "," + format_double(c.density(u, v)) + "\r\n";
    }
  }
  emit(csv, o.out);
  return kExitOk;
}

int run_cdf(const Options& o) {
  const SpectralCopula c = load_copula(o.config);
  const json j{{"u", o.u},
               {"v", o.v},
               {"cdf", c.cdf(o.u, o.v)},
               {"density", c.density(o.u, o.v)},
               {"conditional_cdf", c.conditional_cdf(o.u, o.v)}};
  emit(j.dump(2) + "\n", o.out);
  return kExitOk;
}

int run_sample(const Options& o) {
  const SpectralCopula c = load_copula(o.config);
  const MarginalTransform f = make_transform(o.transform, o.param);
  const ChainSample s = generate_chain(c, o.n, o.seed);
  std::string csv = "i,u," + f.name() + "\r\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    csv += std::to_string(i + 1) + "," + format_double(s.values[i]) + "," + format_double(f(s.values[i])) + "\r\n";
  emit(csv, o.out);
  return kExitOk;
}

int run_associate(const Options& o) {
  const AssociationReport r = associate(load_copula(o.config));
  const json j{{"closed_available", r.closed_available},
               {"rho_closed", r.rho_closed},
               {"tau_closed", r.tau_closed},
               {"rho_numeric", r.rho_numeric},
               {"tau_numeric", r.tau_numeric},
               {"rho_gap", r.rho_gap},
               {"tau_gap", r.tau_gap},
               {"tolerance", r.tolerance},
               {"within_tolerance", r.within_tolerance()}};
  emit(j.dump(2) + "\n", o.out);
  return kExitOk;
}

int run_mixing(const Options& o) {
  const MixingReport r = certify_psi(load_copula(o.config), o.max_n, o.grid, o.threads);
  emit(mixing_json(r).dump(2) + "\n", o.out);
  if (r.certificate == PsiCertificate::boundary_non_mixing) return kExitBoundary;
  if (r.certificate == PsiCertificate::inconclusive) return kExitInconclusive;
  return kExitOk;
}

int run_estimate(const Options& o) {
  const std::vector<double> u = read_column(o.input, o.column);
  json j;
  if (o.target == "mu") {
    const MuEstimate e = estimate_mu(u);
    j = {{"target", "mu"},
         {"n", e.n},
         {"mu1_hat", e.mu1_hat},
         {"mu2_hat", e.mu2_hat},
         {"covariance", {{e.covariance[0][0], e.covariance[0][1]}, {e.covariance[1][0], e.covariance[1][1]}}},
         {"chi2_zero", chi2_statistic(e, {0.0, 0.0})}};
  } else if (o.target == "mu_w") {
    const WeightedEstimate e = estimate_mu_weighted(u, o.w);
    const MeanCI ci = interval(e.estimate, e.n - 1, e.variance_printed, o.level);
    j = {{"target", "mu_w"},     {"n", e.n},
         {"w", e.w},             {"estimate", e.estimate},
         {"variance_printed", e.variance_printed}, {"variance_exact", e.variance_exact},
         {"level", o.level},     {"interval", {ci.lo, ci.hi}}};
  } else if (o.target == "mean") {
    const MarginalTransform f = make_transform(o.transform, o.param);
    const std::vector<double> series = f.apply(u);
    double sigma2 = 0.0;
    VarianceFormula formula = VarianceFormula::custom;
    if (o.variance == "iid") {
      const double m = stats::mean(series);
      for (double x : series) sigma2 += (x - m) * (x - m);
      sigma2 /= static_cast<double>(series.size() - 1);
    } else if (o.variance == "model") {
      switch (f.kind()) {
        case MarginalTransform::Kind::bernoulli:
          sigma2 = sigma2_bernoulli(f.parameter(), o.mu1);
          formula = VarianceFormula::bernoulli;
          break;
        case MarginalTransform::Kind::exponential:
          sigma2 = sigma2_exponential(f.parameter(), o.mu1);
          formula = VarianceFormula::exponential;
          break;
        case MarginalTransform::Kind::uniform:
          sigma2 = sigma2_uniform(o.mu1);
          formula = VarianceFormula::uniform;
          break;
      }
    } else {
      throw UsageError("--variance must be iid or model");
    }
    const MeanCI ci = mean_ci(series, sigma2, o.level, formula);
    j = {{"target", "mean"},
         {"transform", f.name()},
         {"n", series.size()},
         {"estimate", ci.estimate},
         {"variance", ci.variance},
         {"variance_formula", std::string(to_string(ci.formula))},
         {"level", ci.level},
         {"interval", {ci.lo, ci.hi}}};
  } else {
    throw UsageError("--target must be mu, mu_w or mean");
  }
  emit(j.dump(2) + "\n", o.out);
  return kExitOk;
}

int run_coverage_cmd(const Options& o) {
  ExperimentConfig cfg = parse_experiment(load_json(o.config));
  if (o.seed_set) cfg.master_seed = o.seed;
  if (o.repeats > 0) cfg.repeats = o.repeats;
  const CoverageTable t = run_coverage(cfg, o.threads);
  emit(to_csv(t), o.out);
  if (!o.json_out.empty()) emit(to_json(t).dump(2) + "\n", o.json_out);
  return kExitOk;
}

int run_counterexample(const Options& o) {
  json rows = json::array();
  for (int k : o.terms) {
    const SineCounterexample s = reject_sine_counterexample(k);
    rows.push_back({{"terms", s.terms},
                    {"max_margin_deviation", s.max_margin_deviation},
                    {"deviation_at_half", s.deviation_at_half},
                    {"validity", validity_json(s.validity)}});
  }
  emit(rows.dump(2) + "\n", o.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral copulas: validation, association, sampling, mixing and coverage studies"};
  app.require_subcommand(1);
  Options o;

  auto add_config = [&](CLI::App* cmd) { cmd->add_option("--config", o.config, "JSON file")->required(); };
  auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", o.out, "output file (default stdout)"); };
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "master seed")->each([&](const std::string&) { o.seed_set = true; });
  };

  auto* validate_cmd = app.add_subcommand("validate", "check a copula for validity");
  add_config(validate_cmd);
  add_out(validate_cmd);
  validate_cmd->add_option("--grid", o.grid, "grid size")->check(CLI::PositiveNumber);

  auto* grid_cmd = app.add_subcommand("density-grid", "tabulate the density at grid midpoints");
  add_config(grid_cmd);
  add_out(grid_cmd);
  grid_cmd->add_option("--grid", o.grid, "grid size")->check(CLI::PositiveNumber);

  auto* cdf_cmd = app.add_subcommand("cdf", "evaluate C, c and dC/du at a point");
  add_config(cdf_cmd);
  add_out(cdf_cmd);
  cdf_cmd->add_option("--u", o.u)->check(CLI::Range(0.0, 1.0));
  cdf_cmd->add_option("--v", o.v)->check(CLI::Range(0.0, 1.0));

  auto* sample_cmd = app.add_subcommand("sample", "generate a stationary chain");
  add_config(sample_cmd);
  add_out(sample_cmd);
  add_seed(sample_cmd);
  sample_cmd->add_option("--n", o.n, "chain length")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  sample_cmd->add_option("--transform", o.transform, "uniform | exponential | bernoulli");
  sample_cmd->add_option("--param", o.param, "exponential lambda or bernoulli threshold");

  auto* assoc_cmd = app.add_subcommand("associate", "Spearman rho and Kendall tau, closed form and quadrature");
  add_config(assoc_cmd);
  add_out(assoc_cmd);

  auto* mixing_cmd = app.add_subcommand("mixing", "rho-mixing rates and psi-mixing certificates");
  add_config(mixing_cmd);
  add_out(mixing_cmd);
  mixing_cmd->add_option("--max-n", o.max_n, "largest fold")->check(CLI::PositiveNumber);
  mixing_cmd->add_option("--grid", o.grid, "grid size")->check(CLI::PositiveNumber);
  mixing_cmd->add_option("--threads", o.threads, "worker count (0 = default)");

  auto* est_cmd = app.add_subcommand("estimate", "estimators and intervals from a chain CSV");
  est_cmd->add_option("--input", o.input, "CSV file")->required();
  est_cmd->add_option("--column", o.column, "column holding U_i");
  est_cmd->add_option("--target", o.target, "mu | mu_w | mean");
  est_cmd->add_option("--transform", o.transform, "uniform | exponential | bernoulli");
  est_cmd->add_option("--param", o.param, "exponential lambda or bernoulli threshold");
  est_cmd->add_option("--variance", o.variance, "iid | model");
  est_cmd->add_option("--mu1", o.mu1, "taurho parameter for model variances");
  est_cmd->add_option("--w", o.w, "weight for mu_w")->check(CLI::Range(0.0, 1.0));
  est_cmd->add_option("--level", o.level, "confidence level")->check(CLI::Range(0.0, 1.0));
  add_out(est_cmd);

  auto* cov_cmd = app.add_subcommand("coverage", "coverage-probability study");
  add_config(cov_cmd);
  add_out(cov_cmd);
  add_seed(cov_cmd);
  cov_cmd->add_option("--threads", o.threads, "worker count (0 = default)");
  cov_cmd->add_option("--repeats", o.repeats, "independent repetitions of the study")->check(CLI::PositiveNumber);
  cov_cmd->add_option("--json", o.json_out, "also write a JSON report");

  auto* ce_cmd = app.add_subcommand("counterexample", "margin check of the truncated sine-basis construction");
  ce_cmd->add_option("--terms", o.terms, "truncation levels")->check(CLI::NonNegativeNumber);
  add_out(ce_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate_cmd) return run_validate(o);
    if (*grid_cmd) return run_density_grid(o);
    if (*cdf_cmd) return run_cdf(o);
    if (*sample_cmd) return run_sample(o);
    if (*assoc_cmd) return run_associate(o);
    if (*mixing_cmd) return run_mixing(o);
    if (*est_cmd) return run_estimate(o);
    if (*cov_cmd) return run_coverage_cmd(o);
    if (*ce_cmd) return run_counterexample(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
