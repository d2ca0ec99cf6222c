#include <stdexcept>
#include "doctest.h"
#include "spectral/config.hpp"

using namespace spectral;
using nlohmann::json;

namespace {

std::string failing_field(const json& j) {
  try {
    parse_copula(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

std::string failing_experiment_field(const json& j) {
  try {
    parse_experiment(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

json bernoulli_study() {
  return json::parse(R"({
    "schema": "scopula/1",
    "copula": {"named": "taurho", "mu1": 0.05},
    "experiment": {"kind": "coverage_bernoulli", "thresholds": [0.1, 0.5], "n": 100, "replicates": 10,
                   "master_seed": 42, "variance_mode": "iid", "repeats": 2}
  })");
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("named copulas") {
    CHECK(parse_copula(json::parse(R"({"named":"fgm","lambda":0.2})")).coefficient({1}) == 0.2);
    const SpectralCopula t = parse_copula(json::parse(R"({"named":"taurho","mu1":0.05})"));
    CHECK(t.coefficient({2, Wave::sine}) == doctest::Approx(-0.2));
    const SpectralCopula s = parse_copula(json::parse(R"({"named":"two_value_step","alpha":2,"lambda":0.3})"));
    CHECK(s.basis() == Basis::two_value_step(2.0));
    const SpectralCopula p = parse_copula(
        json::parse(R"({"named":"piecewise_sign","breakpoints":[0,0.5,1],"thetas":[0.4,-0.2]})"));
    CHECK(p.coefficient({1}) == doctest::Approx(0.2));
    const SpectralCopula i = parse_copula(json::parse(R"({"named":"independence","basis":{"family":"cosine"}})"));
    CHECK(i.terms().empty());
  }

  TEST_CASE("explicit terms round-trip") {
    const json j = json::parse(R"({"basis":{"family":"sine_cosine"},
      "terms":[{"k":1,"wave":"sine","lambda":0.05},{"k":2,"wave":"cosine","lambda":-0.1}]})");
    const SpectralCopula c = parse_copula(j);
    CHECK(c.coefficient({1, Wave::sine}) == 0.05);
    CHECK(c.coefficient({2, Wave::cosine}) == -0.1);
    const SpectralCopula back = parse_copula(copula_to_json(c));
    CHECK(back.basis() == c.basis());
    REQUIRE(back.terms().size() == c.terms().size());
    for (std::size_t k = 0; k < c.terms().size(); ++k) {
      CHECK(back.terms()[k].index == c.terms()[k].index);
      CHECK(back.terms()[k].lambda == c.terms()[k].lambda);
    }
    const SpectralCopula step = two_value_step(3.0, 0.1);
    CHECK(parse_copula(copula_to_json(step)).basis() == step.basis());
  }

  TEST_CASE("diagnostics name the offending field") {
    CHECK(failing_field(json::parse(R"({"named":"fgm"})")) == "copula.lambda");
    CHECK(failing_field(json::parse(R"({"named":"fgm","lambda":"x"})")) == "copula.lambda");
    CHECK(failing_field(json::parse(R"({"named":"nope"})")) == "copula.named");
    CHECK(failing_field(json::parse(R"({"named":"model","mu1":0.4,"mu2":0.4})")) == "copula");
    CHECK(failing_field(json::parse(R"({"basis":{},"terms":[]})")) == "copula.basis.family");
    CHECK(failing_field(json::parse(R"({"basis":{"family":"wavelet"},"terms":[]})")) == "copula.basis.family");
    CHECK(failing_field(json::parse(R"({"basis":{"family":"two_value_step","alpha":-1},"terms":[]})")) ==
          "copula.basis");
    CHECK(failing_field(json::parse(R"({"basis":{"family":"cosine"}})")) == "copula.terms");
    CHECK(failing_field(json::parse(R"({"basis":{"family":"cosine"},"terms":[{"k":0,"lambda":0.1}]})")) ==
          "copula.terms[0].k");
    CHECK(failing_field(json::parse(R"({"basis":{"family":"cosine"},"terms":[{"k":1,"lambda":0.1},{"k":2}]})")) ==
          "copula.terms[1].lambda");
    CHECK(failing_field(json::parse(R"({"basis":{"family":"sine_cosine"},"terms":[{"k":1,"lambda":0.1}]})")) ==
          "copula.terms[0]");
    CHECK(failing_field(json::parse(R"({"basis":{"family":"sine_cosine"},"terms":[{"k":1,"wave":"tan","lambda":0.1}]})")) ==
          "copula.terms[0].wave");
    CHECK(failing_field(json::parse(R"({"basis":{"family":"cosine"},"terms":[{"k":1,"lambda":0.1},{"k":1,"lambda":0.2}]})")) ==
          "copula.terms");
  }

  TEST_CASE("experiment parsing") {
    const ExperimentConfig cfg = parse_experiment(bernoulli_study());
    CHECK(cfg.kind == ExperimentKind::bernoulli);
    CHECK(cfg.thresholds == std::vector<double>{0.1, 0.5});
    CHECK(cfg.n == 100);
    CHECK(cfg.replicates == 10);
    CHECK(cfg.master_seed == 42);
    CHECK(cfg.variance_mode == VarianceMode::iid);
    CHECK(cfg.repeats == 2);
    CHECK(cfg.level == 0.95);
    const json echo = experiment_to_json(cfg);
    const ExperimentConfig again = parse_experiment(echo);
    CHECK(again.thresholds == cfg.thresholds);
    CHECK(again.copula->coefficient({1, Wave::sine}) == 0.05);

    json muw = json::parse(R"({"schema":"scopula/1","experiment":{"kind":"coverage_mu_w","w":[0.25,0.5],
      "mu1":[0.05,0.1],"n":200,"replicates":5,"mu_w_variance":"exact"}})");
    const ExperimentConfig m = parse_experiment(muw);
    CHECK_FALSE(m.copula.has_value());
    CHECK(m.mu_w_variance == MuWVariance::exact);
  }

  TEST_CASE("experiment diagnostics") {
    json j = bernoulli_study();
    j["schema"] = "scopula/0";
    CHECK(failing_experiment_field(j) == "schema");
    j = bernoulli_study();
    j.erase("schema");
    CHECK(failing_experiment_field(j) == "<root>.schema");
    j = bernoulli_study();
    j["experiment"]["n"] = 1;
    CHECK(failing_experiment_field(j) == "experiment.n");
    j = bernoulli_study();
    j["experiment"]["replicates"] = 0;
    CHECK(failing_experiment_field(j) == "experiment.replicates");
    j = bernoulli_study();
    j["experiment"]["level"] = 1.5;
    CHECK(failing_experiment_field(j) == "experiment.level");
    j = bernoulli_study();
    j["experiment"]["thresholds"][1] = 1.0;
    CHECK(failing_experiment_field(j) == "experiment.thresholds[1]");
    j = bernoulli_study();
    j["experiment"]["kind"] = "coverage_median";
    CHECK(failing_experiment_field(j) == "experiment.kind");
    j = bernoulli_study();
    j["experiment"]["variance_mode"] = "robust";
    CHECK(failing_experiment_field(j) == "experiment.variance_mode");
    j = bernoulli_study();
    j["copula"]["mu1"] = 0.2;
    CHECK(failing_experiment_field(j) == "copula");
    j = bernoulli_study();
    j.erase("copula");
    CHECK(failing_experiment_field(j) == "<root>.copula");
  }
}
