#include "spectral/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace spectral {
namespace {

using nlohmann::json;

const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "." + key, "missing required field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

double number_field(const json& j, const std::string& path, const char* key) {
  return number(field(j, path, key), path + "." + key);
}

std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  if (j.empty()) throw ConfigError(path, "must not be empty");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

long long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<long long>();
}

std::string string_field(const json& j, const std::string& path, const char* key) {
  const json& v = field(j, path, key);
  if (!v.is_string()) throw ConfigError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

template <class F>
auto rethrow_as_config(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

Wave parse_wave(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected \"cosine\" or \"sine\"");
  const auto s = j.get<std::string>();
  if (s == "cosine") return Wave::cosine;
  if (s == "sine") return Wave::sine;
  throw ConfigError(path, "unknown wave \"" + s + "\" (expected cosine or sine)");
}

SpectralCopula parse_named(const json& j, const std::string& path) {
  const std::string name = string_field(j, path, "named");
  if (name == "fgm") return fgm(number_field(j, path, "lambda"));
  if (name == "legendre_fgm")
    return legendre_fgm(number_field(j, path, "lambda1"), number_field(j, path, "lambda2"));
  if (name == "cosine_single") return cosine_single(number_field(j, path, "lambda"));
  if (name == "model") return model(number_field(j, path, "mu1"), number_field(j, path, "mu2"));
  if (name == "taurho") return taurho(number_field(j, path, "mu1"));
  if (name == "two_value_step")
    return two_value_step(number_field(j, path, "alpha"), number_field(j, path, "lambda"));
  if (name == "piecewise_sign") {
    const auto breaks = number_list(field(j, path, "breakpoints"), path + ".breakpoints");
    const auto thetas = number_list(field(j, path, "thetas"), path + ".thetas");
    return piecewise_sign(breaks, thetas);
  }
  if (name == "independence") return SpectralCopula::independence(parse_basis(field(j, path, "basis"), path + ".basis"));
  throw ConfigError(path + ".named", "unknown copula \"" + name + "\"");
}

json index_to_json(BasisIndex index) {
  json t{{"k", index.k}};
  if (index.wave == Wave::cosine) t["wave"] = "cosine";
  if (index.wave == Wave::sine) t["wave"] = "sine";
  return t;
}

ExperimentKind parse_kind(const std::string& s, const std::string& path) {
  if (s == "coverage_bernoulli") return ExperimentKind::bernoulli;
  if (s == "coverage_exponential") return ExperimentKind::exponential;
  if (s == "coverage_mean") return ExperimentKind::mean;
  if (s == "coverage_mu_w") return ExperimentKind::mu_w;
  throw ConfigError(path, "unknown experiment kind \"" + s + "\"");
}

}  // namespace

Basis parse_basis(const json& j, const std::string& path) {
  const std::string name = string_field(j, path, "family");
  return rethrow_as_config(path, [&]() -> Basis {
    if (name == "sine_cosine") return Basis::sine_cosine();
    if (name == "cosine") return Basis::cosine();
    if (name == "shifted_legendre") return Basis::shifted_legendre();
    if (name == "two_value_step") return Basis::two_value_step(number_field(j, path, "alpha"));
    if (name == "piecewise_sign")
      return Basis::piecewise_sign(number_list(field(j, path, "breakpoints"), path + ".breakpoints"));
    throw ConfigError(path + ".family", "unknown basis family \"" + name + "\"");
  });
}

SpectralCopula parse_copula(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (j.contains("named")) return rethrow_as_config(path, [&] { return parse_named(j, path); });

  const Basis basis = parse_basis(field(j, path, "basis"), path + ".basis");
  const json& terms = field(j, path, "terms");
  const std::string tpath = path + ".terms";
  if (!terms.is_array()) throw ConfigError(tpath, "expected an array");
  std::vector<Term> parsed;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string p = tpath + "[" + std::to_string(i) + "]";
    const json& t = terms[i];
    Term term;
    const long long k = integer(field(t, p, "k"), p + ".k");
    if (k < 1 || k > std::numeric_limits<int>::max()) throw ConfigError(p + ".k", "must be a positive integer");
    term.index.k = static_cast<int>(k);
    if (t.contains("wave")) term.index.wave = parse_wave(t["wave"], p + ".wave");
    term.lambda = number_field(t, p, "lambda");
    if (!basis.contains(term.index)) throw ConfigError(p, to_string(term.index) + " is not a member of the basis");
    parsed.push_back(term);
  }
  return rethrow_as_config(tpath, [&] { return SpectralCopula(basis, std::move(parsed)); });
}

json copula_to_json(const SpectralCopula& c) {
  json basis{{"family", std::string(c.basis().name())}};
  if (const auto* s = std::get_if<family::TwoValueStep>(&c.basis().family())) basis["alpha"] = s->alpha;
  if (const auto* s = std::get_if<family::PiecewiseSign>(&c.basis().family())) basis["breakpoints"] = s->breakpoints;
  json terms = json::array();
  for (const Term& t : c.terms()) {
    json e = index_to_json(t.index);
    e["lambda"] = t.lambda;
    terms.push_back(std::move(e));
  }
  return {{"basis", std::move(basis)}, {"terms", std::move(terms)}};
}

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::bernoulli: return "coverage_bernoulli";
    case ExperimentKind::exponential: return "coverage_exponential";
    case ExperimentKind::mean: return "coverage_mean";
    case ExperimentKind::mu_w: return "coverage_mu_w";
  }
  return "coverage_bernoulli";
}

std::string_view to_string(VarianceMode m) { return m == VarianceMode::model ? "model" : "iid"; }

ExperimentConfig parse_experiment(const json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "expected an object");
  const std::string schema = string_field(j, "<root>", "schema");
  if (schema != kConfigSchema) throw ConfigError("schema", "unsupported schema \"" + schema + "\" (expected " + kConfigSchema + ")");

  ExperimentConfig cfg;
  const json& e = field(j, "<root>", "experiment");
  const std::string ep = "experiment";
  cfg.kind = parse_kind(string_field(e, ep, "kind"), ep + ".kind");

  if (cfg.kind != ExperimentKind::mu_w || j.contains("copula")) {
    cfg.copula_json = field(j, "<root>", "copula");
    cfg.copula = parse_copula(cfg.copula_json, "copula");
  }

  switch (cfg.kind) {
    case ExperimentKind::bernoulli:
      cfg.thresholds = number_list(field(e, ep, "thresholds"), ep + ".thresholds");
      for (std::size_t i = 0; i < cfg.thresholds.size(); ++i)
        if (!(cfg.thresholds[i] > 0.0 && cfg.thresholds[i] < 1.0))
          throw ConfigError(ep + ".thresholds[" + std::to_string(i) + "]", "must lie in (0,1)");
      break;
    case ExperimentKind::exponential:
      cfg.rates = number_list(field(e, ep, "rates"), ep + ".rates");
      for (std::size_t i = 0; i < cfg.rates.size(); ++i)
        if (!(cfg.rates[i] > 0.0)) throw ConfigError(ep + ".rates[" + std::to_string(i) + "]", "must be positive");
      break;
    case ExperimentKind::mean: break;
    case ExperimentKind::mu_w:
      cfg.weights = number_list(field(e, ep, "w"), ep + ".w");
      for (std::size_t i = 0; i < cfg.weights.size(); ++i)
        if (!(cfg.weights[i] >= 0.0 && cfg.weights[i] <= 1.0))
          throw ConfigError(ep + ".w[" + std::to_string(i) + "]", "must lie in [0,1]");
      cfg.mu1_values = number_list(field(e, ep, "mu1"), ep + ".mu1");
      for (std::size_t i = 0; i < cfg.mu1_values.size(); ++i)
        if (!(std::abs(cfg.mu1_values[i]) <= 0.11))
          throw ConfigError(ep + ".mu1[" + std::to_string(i) + "]", "must satisfy |mu1| <= 0.11");
      if (e.contains("mu_w_variance")) {
        const std::string v = string_field(e, ep, "mu_w_variance");
        if (v == "printed") {
          cfg.mu_w_variance = MuWVariance::printed;
        } else if (v == "exact") {
          cfg.mu_w_variance = MuWVariance::exact;
        } else {
          throw ConfigError(ep + ".mu_w_variance", "expected \"printed\" or \"exact\"");
        }
      }
      break;
  }

  const long long n = integer(field(e, ep, "n"), ep + ".n");
  if (n < 2) throw ConfigError(ep + ".n", "must be at least 2");
  cfg.n = static_cast<std::size_t>(n);
  const long long r = integer(field(e, ep, "replicates"), ep + ".replicates");
  if (r < 1 || r > std::numeric_limits<int>::max()) throw ConfigError(ep + ".replicates", "must be at least 1");
  cfg.replicates = static_cast<int>(r);
  if (e.contains("level")) cfg.level = number(e["level"], ep + ".level");
  if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw ConfigError(ep + ".level", "must lie in (0,1)");
  if (e.contains("master_seed")) {
    const json& s = e["master_seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      throw ConfigError(ep + ".master_seed", "expected a non-negative integer");
    cfg.master_seed = s.get<std::uint64_t>();
  }
  if (e.contains("variance_mode")) {
    const std::string v = string_field(e, ep, "variance_mode");
    if (v == "model") {
      cfg.variance_mode = VarianceMode::model;
    } else if (v == "iid") {
      cfg.variance_mode = VarianceMode::iid;
    } else {
      throw ConfigError(ep + ".variance_mode", "expected \"model\" or \"iid\"");
    }
  }
  if (e.contains("repeats")) {
    const long long rep = integer(e["repeats"], ep + ".repeats");
    if (rep < 1 || rep > 1000) throw ConfigError(ep + ".repeats", "must lie in [1, 1000]");
    cfg.repeats = static_cast<int>(rep);
  }
  return cfg;
}

json experiment_to_json(const ExperimentConfig& c) {
  json e{{"kind", std::string(to_string(c.kind))},
         {"n", c.n},
         {"replicates", c.replicates},
         {"level", c.level},
         {"master_seed", c.master_seed},
         {"variance_mode", std::string(to_string(c.variance_mode))},
         {"repeats", c.repeats}};
  switch (c.kind) {
    case ExperimentKind::bernoulli: e["thresholds"] = c.thresholds; break;
    case ExperimentKind::exponential: e["rates"] = c.rates; break;
    case ExperimentKind::mean: break;
    case ExperimentKind::mu_w:
      e["w"] = c.weights;
      e["mu1"] = c.mu1_values;
      e["mu_w_variance"] = c.mu_w_variance == MuWVariance::printed ? "printed" : "exact";
      break;
  }
  json out{{"schema", kConfigSchema}, {"experiment", std::move(e)}};
  if (c.copula) out["copula"] = copula_to_json(*c.copula);
  return out;
}

json load_json(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(file, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace spectral
