#include <stdexcept>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "spectral/copula.hpp"

using namespace spectral;
using boost::math::quadrature::gauss_kronrod;

namespace {

const double kPi = std::numbers::pi;

double integrate_split(const std::function<double(double)>& f, double hi, const std::vector<double>& cuts) {
  std::vector<double> pts{0.0};
  for (double t : cuts)
    if (t < hi) pts.push_back(t);
  pts.push_back(hi);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    sum += gauss_kronrod<double, 31>::integrate(f, pts[i], pts[i + 1], 10, 1e-13);
  return sum;
}

// Nested adaptive integral over [0,u] x [0,v], split where the density jumps.
double box_integral(const std::function<double(double, double)>& f, double u, double v,
                    const std::vector<double>& cuts = {}) {
  auto inner = [&](double x) { return integrate_split([&](double y) { return f(x, y); }, v, cuts); };
  return integrate_split(inner, u, cuts);
}

std::vector<SpectralCopula> zoo() {
  return {
      model(0.05, -0.2),
      SpectralCopula(Basis::sine_cosine(), {{{1, Wave::cosine}, 0.1}, {{1, Wave::sine}, 0.15}, {{3, Wave::sine}, -0.1}}),
      SpectralCopula(Basis::cosine(), {{{1}, 0.25}, {{2}, -0.1}, {{5}, 0.1}}),
      legendre_fgm(0.2, 0.1),
      two_value_step(2.0, 0.3),
      piecewise_sign({0.0, 0.3, 0.6, 1.0}, std::vector<double>{0.5, -0.8, 0.9}),
  };
}

}  // namespace

TEST_SUITE("copula") {
  TEST_CASE("density and cdf point values") {
    CHECK(SpectralCopula::independence(Basis::cosine()).density(0.3, 0.8) == 1.0);
    CHECK(two_value_step(1.0, 0.5).density(0.25, 0.75) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(two_value_step(1.0, 0.4).cdf(0.25, 0.25) == doctest::Approx(0.0875).epsilon(1e-14));
    CHECK(cosine_single(0.5).cdf(0.5, 0.5) == doctest::Approx(0.25 + 1.0 / (kPi * kPi)).epsilon(1e-14));
    CHECK(cosine_single(0.5).cdf(0.5, 0.5) == doctest::Approx(0.35132).epsilon(1e-5));
  }

  TEST_CASE("named constructors expand to the stated closed forms") {
    const double u = 0.37;
    const double v = 0.81;
    const double lam = 0.2;
    CHECK(fgm(lam).cdf(u, v) == doctest::Approx(u * v + 3 * lam * (u - u * u) * (v - v * v)).epsilon(1e-14));
    const double l1 = 0.2;
    const double l2 = 0.1;
    const double ext = u * v + 3 * l1 * (u - u * u) * (v - v * v) +
                       5 * l2 * (2 * u * u * u - 3 * u * u + u) * (2 * v * v * v - 3 * v * v + v);
    CHECK(legendre_fgm(l1, l2).cdf(u, v) == doctest::Approx(ext).epsilon(1e-14));
    const double cs = u * v + 2 * lam / (kPi * kPi) * std::sin(kPi * u) * std::sin(kPi * v);
    CHECK(cosine_single(lam).cdf(u, v) == doctest::Approx(cs).epsilon(1e-14));
    const double a = 3.0;
    const double s = 1 / (a + 1);
    const auto step = two_value_step(a, lam);
    CHECK(step.cdf(0.1, 0.2) == doctest::Approx((1 + lam * a) * 0.1 * 0.2).epsilon(1e-14));
    CHECK(step.density(0.9, 0.1) == doctest::Approx(1 - lam).epsilon(1e-14));
    CHECK(step.density(0.9, 0.95) == doctest::Approx(1 + lam / a).epsilon(1e-14));
    CHECK(step.density(std::nextafter(s, 0.0), 0.0) == doctest::Approx(1 + lam * a).epsilon(1e-14));
  }

  TEST_CASE("cdf equals the integral of the density") {
    for (const SpectralCopula& c : zoo()) {
      for (auto [u, v] : {std::pair{0.3, 0.7}, std::pair{0.55, 0.2}, std::pair{0.91, 0.91}}) {
        const double q = box_integral([&](double x, double y) { return c.density(x, y); }, u, v,
                                      c.basis().discontinuities());
        INFO(c.basis().name(), " u=", u, " v=", v);
        CHECK(std::abs(c.cdf(u, v) - q) <= 1e-6);
      }
    }
  }

  TEST_CASE("conditional cdf matches a central difference of the cdf") {
    const SpectralCopula c = model(0.05, -0.2);
    const double h = 1e-5;
    const double fd = (c.cdf(0.1 + h, 0.4) - c.cdf(0.1 - h, 0.4)) / (2 * h);
    CHECK(std::abs(c.conditional_cdf(0.1, 0.4) - fd) <= 1e-6);
    const double phi1 = std::numbers::sqrt2 * std::sin(2 * kPi * 0.1);
    const double Phi1 = std::numbers::sqrt2 / (2 * kPi) * (1 - std::cos(2 * kPi * 0.4));
    const double phi2 = std::numbers::sqrt2 * std::sin(4 * kPi * 0.1);
    const double Phi2 = std::numbers::sqrt2 / (4 * kPi) * (1 - std::cos(4 * kPi * 0.4));
    CHECK(c.conditional_cdf(0.1, 0.4) == doctest::Approx(0.4 + 0.05 * phi1 * Phi1 - 0.2 * phi2 * Phi2).epsilon(1e-14));
    for (const SpectralCopula& z : zoo()) {
      CHECK(z.conditional_cdf(0.42, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(z.conditional_cdf(0.42, 0.0)) <= 1e-15);
      CHECK(z.partial_v(0.3, 0.6) == z.conditional_cdf(0.6, 0.3));
    }
    CHECK(SpectralCopula::independence(Basis::shifted_legendre()).conditional_cdf(0.9, 0.3) == 0.3);
  }

  TEST_CASE("validity verdicts") {
    const ValidityReport cos = validate(SpectralCopula(Basis::cosine(), {{{1}, 0.3}, {{2}, 0.2}}));
    CHECK(cos.analytic_ok);
    CHECK(cos.verdict == Verdict::valid_boundary);
    const ValidityReport step = validate(two_value_step(1.0, 1.0));
    CHECK(step.verdict == Verdict::valid_boundary);
    CHECK(std::abs(step.grid_min_density) <= 1e-9);
    const ValidityReport bad = validate(fgm(0.5));
    CHECK(bad.verdict == Verdict::invalid);
    CHECK(bad.grid_min_density < 0.0);
    const ValidityReport ok = validate(model(0.05, -0.2));
    CHECK(ok.verdict == Verdict::valid);
    CHECK(ok.margin_deviation <= 1e-10);
    const ValidityReport tr = validate(taurho(0.11));
    CHECK(tr.verdict == Verdict::valid);
    CHECK_FALSE(tr.analytic_ok);
    CHECK(tr.grid_adjudicated);
    CHECK(tr.grid_min_density > 0.0);
    CHECK(tr.grid_max_density < 2.0);
    CHECK(to_string(Verdict::valid_boundary) == "ValidBoundary");
  }

  TEST_CASE("constructor preconditions") {
    CHECK_THROWS_AS(model(0.3, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(taurho(0.12), std::invalid_argument);
    CHECK_THROWS_AS(SpectralCopula(Basis::cosine(), {{{1}, 0.1}, {{1}, 0.2}}), std::invalid_argument);
    CHECK_THROWS_AS(SpectralCopula(Basis::cosine(), {{{1, Wave::sine}, 0.1}}), std::out_of_range);
    CHECK_THROWS_AS(SpectralCopula(Basis::cosine(), {{{1}, std::nan("")}}), std::invalid_argument);
    CHECK_THROWS_AS(fold(fgm(0.1), 0), std::invalid_argument);
  }

  TEST_CASE("fold powers the coefficients") {
    CHECK(fold(two_value_step(1.0, 0.6), 3).coefficient({1}) == doctest::Approx(0.216).epsilon(1e-15));
    const SpectralCopula c = model(0.05, -0.2);
    const SpectralCopula f1 = fold(c, 1);
    for (const Term& t : c.terms()) CHECK(f1.coefficient(t.index) == t.lambda);
    const SpectralCopula zc = zoo()[2];
    for (int m = 1; m <= 4; ++m)
      for (int n = 1; n <= 4; ++n)
        for (const Term& t : zc.terms())
          CHECK(std::abs(fold(fold(zc, m), n).coefficient(t.index) - fold(zc, m * n).coefficient(t.index)) <= 1e-12);
  }

  TEST_CASE("star product") {
    const StarProduct indep = star_product(SpectralCopula::independence(Basis::cosine()), cosine_single(0.4));
    CHECK(indep(0.2, 0.7) == doctest::Approx(1.0).epsilon(1e-12));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const SpectralCopula& c : zoo()) {
      const StarProduct sp = star_product(c, c);
      const SpectralCopula f2 = fold(c, 2);
      for (int i = 0; i < 10; ++i) {
        const double u = unif(rng);
        const double v = unif(rng);
        CHECK(std::abs(sp(u, v) - f2.density(u, v)) <= 1e-6);
      }
    }
    const SpectralCopula a(Basis::cosine(), {{{1}, 0.3}});
    const SpectralCopula b(Basis::cosine(), {{{2}, 0.2}});
    const StarProduct disjoint = star_product(a, b);
    CHECK(std::abs(disjoint(0.1, 0.9) - 1.0) <= 1e-6);
  }

  TEST_CASE("convex combination mixes coefficients") {
    const SpectralCopula parts[] = {two_value_step(1.0, 1.0), two_value_step(1.0, -1.0)};
    const double w[] = {0.95, 0.05};
    CHECK(convex_combination(w, parts).coefficient({1}) == doctest::Approx(0.9).epsilon(1e-14));
    const double bad[] = {0.5, 0.6};
    CHECK_THROWS_AS(convex_combination(bad, parts), std::invalid_argument);
    const SpectralCopula mixed[] = {fgm(0.1), cosine_single(0.1)};
    const double half[] = {0.5, 0.5};
    CHECK_THROWS_AS(convex_combination(half, mixed), std::invalid_argument);
  }

  TEST_CASE("sine-basis counterexample is rejected") {
    const SineCounterexample k0 = reject_sine_counterexample(0);
    CHECK(k0.deviation_at_half == doctest::Approx(0.5));
    const SineCounterexample k1 = reject_sine_counterexample(1);
    CHECK(k1.deviation_at_half > 0.09);
    CHECK(k1.max_margin_deviation > 0.1);
    const SineCounterexample k10 = reject_sine_counterexample(10);
    CHECK(k10.max_margin_deviation > 0.01);
    for (const auto* s : {&k0, &k1, &k10}) CHECK(s->validity.verdict == Verdict::invalid);
  }
}
