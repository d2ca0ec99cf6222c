#include <stdexcept>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>

#include "doctest.h"
#include "spectral/estimation.hpp"
#include "spectral/sampling.hpp"
#include "spectral/stats.hpp"

using namespace spectral;

namespace {

std::vector<SpectralCopula> samplers() {
  return {model(0.05, -0.2), taurho(0.11), cosine_single(0.5), legendre_fgm(0.3, -0.1), two_value_step(1.0, 0.5),
          two_value_step(3.0, -0.25), piecewise_sign({0.0, 0.3, 0.6, 1.0}, std::vector<double>{0.9, -0.5, 1.0})};
}

/// Pearson chi-square of counts against cell probabilities of the copula on a g x g grid.
double chi2_pvalue(const std::vector<int>& counts, const SpectralCopula& law, int g, int total) {
  double stat = 0.0;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      const double u0 = static_cast<double>(i) / g;
      const double u1 = static_cast<double>(i + 1) / g;
      const double v0 = static_cast<double>(j) / g;
      const double v1 = static_cast<double>(j + 1) / g;
      const double p = law.cdf(u1, v1) - law.cdf(u0, v1) - law.cdf(u1, v0) + law.cdf(u0, v0);
      const double e = p * total;
      const double d = counts[static_cast<std::size_t>(i * g + j)] - e;
      stat += d * d / e;
    }
  return boost::math::gamma_q(0.5 * (g * g - 1), 0.5 * stat);
}

}  // namespace

TEST_SUITE("sampling") {
  TEST_CASE("independence returns the innovation") {
    const SpectralCopula c = SpectralCopula::independence(Basis::sine_cosine());
    for (double w : {1e-9, 0.3, 0.999}) CHECK(next_state(c, 0.4, w) == w);
  }

  TEST_CASE("inversion residuals and monotonicity") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const SpectralCopula& c : samplers()) {
      for (int t = 0; t < 200; ++t) {
        const double u = unif(rng);
        const double w1 = unif(rng);
        const double w2 = unif(rng);
        const double v1 = next_state(c, u, w1);
        const double v2 = next_state(c, u, w2);
        CHECK(v1 >= 0.0);
        CHECK(v1 <= 1.0);
        CHECK(std::abs(c.conditional_cdf(u, v1) - w1) <= 1e-12);
        if (w1 < w2) CHECK(v1 <= v2);
      }
      CHECK(std::abs(c.conditional_cdf(0.0, next_state(c, 0.0, 0.5)) - 0.5) <= 1e-12);
      CHECK(std::abs(c.conditional_cdf(1.0, next_state(c, 1.0, 0.5)) - 0.5) <= 1e-12);
    }
    const SpectralCopula m = model(0.05, -0.2);
    CHECK(std::abs(m.conditional_cdf(0.3, next_state(m, 0.3, 0.7)) - 0.7) <= 1e-12);
    CHECK_THROWS_AS(next_state(m, 0.3, 0.0), std::domain_error);
    CHECK_THROWS_AS(next_state(m, 1.3, 0.5), std::domain_error);
  }

  TEST_CASE("flat conditional cdf on a boundary step copula") {
    const SpectralCopula c = two_value_step(1.0, 1.0);
    // density vanishes off the diagonal blocks, so U_prev < 1/2 forces V < 1/2
    for (double w : {0.01, 0.5, 0.99}) {
      CHECK(next_state(c, 0.2, w) <= 0.5);
      CHECK(next_state(c, 0.8, w) >= 0.5);
    }
  }

  TEST_CASE("closed-form step sampler") {
    CHECK(sample_wl(0.5, 0.25, 0.9) == doctest::Approx(0.8).epsilon(1e-15));
    for (double q : {0.1, 0.6}) CHECK(sample_wl(0.0, 0.7, q) == q);
    CHECK_THROWS_AS(sample_wl(1.0, 0.3, 0.5), std::domain_error);
    const SpectralCopula c = two_value_step(1.0, 0.5);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
      const double u = unif(rng);
      const double q = unif(rng);
      CHECK(sample_wl(0.5, u, q) == doctest::Approx(next_state(c, u, q)).epsilon(1e-13));
    }
  }

  TEST_CASE("streams are deterministic and distinct") {
    Rng a = make_stream(42, 3, 7);
    Rng b = make_stream(42, 3, 7);
    Rng c = make_stream(42, 3, 8);
    Rng d = make_stream(42, 4, 7);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
    for (int i = 0; i < 1000; ++i) {
      const double u = uniform_open(a);
      CHECK(u > 0.0);
      CHECK(u < 1.0);
    }
  }

  TEST_CASE("chains are reproducible") {
    const SpectralCopula c = model(0.05, -0.2);
    const ChainSample s1 = generate_chain(c, 500, 99);
    const ChainSample s2 = generate_chain(c, 500, 99);
    CHECK(s1.values == s2.values);
    CHECK(s1.seed == 99);
    CHECK(generate_chain(c, 500, 100).values != s1.values);
    CHECK_THROWS_AS(generate_chain(c, 1, 1), std::invalid_argument);
  }

  TEST_CASE("lag-one correlation vanishes for independence and taurho") {
    const std::size_t n = 1000;
    const double band = 3.0 / std::sqrt(static_cast<double>(n));
    const ChainSample indep = generate_chain(SpectralCopula::independence(Basis::cosine()), n, 5);
    CHECK(std::abs(stats::lag_correlation(indep.values, 1)) <= band);
    const ChainSample tr = generate_chain(taurho(0.05), n, 5);
    CHECK(std::abs(stats::lag_correlation(tr.values, 1)) <= band);
  }

  TEST_CASE("exponential transform mean") {
    const std::size_t n = 20000;
    const ChainSample s = generate_chain(taurho(0.05), n, 17);
    const std::vector<double> x = MarginalTransform::exponential(5.0).apply(s.values);
    const double sigma = std::sqrt(sigma2_exponential(5.0, 0.05, log_integral_constants()));
    CHECK(std::abs(stats::mean(x) - 5.0) <= 3.0 * sigma / std::sqrt(static_cast<double>(n)));
  }

  TEST_CASE("transforms") {
    CHECK(MarginalTransform::bernoulli(0.3)(0.3) == 1.0);
    CHECK(MarginalTransform::bernoulli(0.3)(0.31) == 0.0);
    CHECK(MarginalTransform::exponential(2.0)(0.5) == doctest::Approx(2.0 * std::log(2.0)));
    CHECK(MarginalTransform::uniform()(0.25) == 0.25);
    CHECK_THROWS_AS(MarginalTransform::exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS(MarginalTransform::bernoulli(1.0), std::invalid_argument);
  }

  TEST_CASE("stationary marginal passes a KS test") {
    for (const SpectralCopula& c : {model(0.05, -0.2), two_value_step(1.0, 0.6), legendre_fgm(0.3, -0.1)}) {
      const ChainSample s = generate_chain(c, 100000, 8);
      std::vector<double> thinned;
      for (std::size_t i = 0; i < s.size(); i += 40) thinned.push_back(s.values[i]);
      CHECK(stats::ks_one_sample(thinned, [](double t) { return t; }).p_value > 0.01);
    }
  }

  TEST_CASE("two-step transition law matches the fold") {
    const int g = 20;
    const int total = 100000;
    for (const SpectralCopula& c : {cosine_single(0.5), two_value_step(1.0, 0.6), legendre_fgm(0.3, -0.1)}) {
      Rng rng = make_stream(21, 0, 0);
      std::vector<int> counts(static_cast<std::size_t>(g * g), 0);
      for (int t = 0; t < total; ++t) {
        const std::vector<double> u = generate_states(c, 3, rng);
        const int i = std::min(g - 1, static_cast<int>(u[0] * g));
        const int j = std::min(g - 1, static_cast<int>(u[2] * g));
        ++counts[static_cast<std::size_t>(i * g + j)];
      }
      CHECK(chi2_pvalue(counts, fold(c, 2), g, total) > 0.01);
      // the one-step law is distinguishable, so the test has power
      CHECK(chi2_pvalue(counts, c, g, total) < 1e-6);
    }
  }
}
