#include "spectral/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spectral/quadrature.hpp"
#include "spectral/stats.hpp"

namespace spectral {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kFunctionalNodes = 256;

double pow4(double x) {
  const double x2 = x * x;
  return x2 * x2;
}

void require_denominator(double d, const char* what) {
  if (std::abs(d) < 1e-14) throw std::domain_error(what);
}

quad::Rule functional_rule(std::span<const double> breaks) {
  static const quad::Rule base = quad::gauss_legendre(kFunctionalNodes);
  return breaks.empty() ? base : quad::composite(base, breaks);
}

double cin(double x) {
  static const quad::Rule rule = quad::gauss_legendre(64);
  return x * quad::integrate(rule, [x](double s) {
           const double t = x * s;
           return t == 0.0 ? 0.0 : (1.0 - std::cos(t)) / t;
         });
}

double zero_effect_gap(double a, double mu1) {
  return pow4(std::sin(kPi * a)) / (1.0 - mu1) - pow4(std::sin(2.0 * kPi * a)) / (1.0 + 4.0 * mu1);
}

void check_mu1(double mu1) {
  if (!(mu1 > 0.0 && mu1 < 0.75)) throw std::domain_error("zero_effect_threshold: requires 0 < mu1 < 0.75");
}

}  // namespace

MuEstimate estimate_mu(std::span<const double> u) {
  if (u.size() < 2) throw std::invalid_argument("estimate_mu: need at least two observations");
  double s1 = 0.0;
  double s2 = 0.0;
  double prev1 = std::sin(2.0 * kPi * u[0]);
  double prev2 = std::sin(4.0 * kPi * u[0]);
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double cur1 = std::sin(2.0 * kPi * u[i]);
    const double cur2 = std::sin(4.0 * kPi * u[i]);
    s1 += prev1 * cur1;
    s2 += prev2 * cur2;
    prev1 = cur1;
    prev2 = cur2;
  }
  MuEstimate e;
  e.n = u.size();
  const double m = static_cast<double>(u.size() - 1);
  e.mu1_hat = 2.0 * s1 / m;
  e.mu2_hat = 2.0 * s2 / m;
  const double off = -e.mu1_hat * e.mu2_hat;
  e.covariance = {{{1.0 / m, off / m}, {off / m, 1.0 / m}}};
  return e;
}

double chi2_statistic(const MuEstimate& est, std::array<double, 2> mu0, Chi2Options options) {
  if (est.n < 2) throw std::invalid_argument("chi2_statistic: estimate needs n >= 2");
  const double p = options.plug_in ? est.mu1_hat * est.mu2_hat : mu0[0] * mu0[1];
  if (!(std::abs(p) < 1.0)) throw std::domain_error("chi2_statistic: requires |mu1 mu2| < 1");
  const double d1 = est.mu1_hat - mu0[0];
  const double d2 = est.mu2_hat - mu0[1];
  const double divisor = options.normalization == Chi2Normalization::exact ? 1.0 - p * p : 1.0 - p;
  return static_cast<double>(est.n - 1) / divisor * (d1 * d1 + d2 * d2 + 2.0 * p * d1 * d2);
}

std::string_view to_string(VarianceFormula f) {
  switch (f) {
    case VarianceFormula::bernoulli: return "BernoulliEqI";
    case VarianceFormula::exponential: return "ExponentialEqI2";
    case VarianceFormula::uniform: return "UniformEqVm";
    case VarianceFormula::custom: return "Custom";
  }
  return "Custom";
}

double sigma2_bernoulli(double a, double mu1) {
  if (!(a > 0.0 && a < 1.0)) throw std::domain_error("sigma2_bernoulli: a must lie in (0,1)");
  require_denominator(1.0 - mu1, "sigma2_bernoulli: 1 - mu1 vanishes");
  require_denominator(1.0 + 4.0 * mu1, "sigma2_bernoulli: 1 + 4 mu1 vanishes");
  return a * (1.0 - a) + 4.0 * mu1 / (kPi * kPi) * zero_effect_gap(a, mu1);
}

LogIntegralConstants log_integral_constants() {
  const double w1 = 2.0 * kPi;
  const double w2 = 4.0 * kPi;
  const double i1 = cin(w1) / w1;
  const double i2 = cin(w2) / w2;
  return {i1 * i1, 4.0 * i2 * i2};
}

double sigma2_exponential(double lambda, double mu1, LogIntegralConstants k) {
  if (!(lambda > 0.0)) throw std::domain_error("sigma2_exponential: lambda must be positive");
  require_denominator(1.0 - mu1, "sigma2_exponential: 1 - mu1 vanishes");
  require_denominator(1.0 + 4.0 * mu1, "sigma2_exponential: 1 + 4 mu1 vanishes");
  const double l2 = lambda * lambda;
  return l2 + 4.0 * mu1 * l2 * (k.first / (1.0 - mu1) - k.second / (1.0 + 4.0 * mu1));
}

double sigma2_uniform(double mu1) {
  const double d = kPi * kPi * (1.0 - mu1) * (1.0 + 4.0 * mu1);
  require_denominator(d, "sigma2_uniform: denominator vanishes");
  return 1.0 / 12.0 + 5.0 * mu1 * mu1 / d;
}

double sigma2_custom(const Functional& f, double mu1, double mu2, std::span<const double> breaks) {
  require_denominator(1.0 - mu1, "sigma2_custom: 1 - mu1 vanishes");
  require_denominator(1.0 - mu2, "sigma2_custom: 1 - mu2 vanishes");
  const quad::Rule rule = functional_rule(breaks);
  const double m = quad::integrate(rule, f);
  const double m2 = quad::integrate(rule, [&](double x) { return f(x) * f(x); });
  const double s1 = quad::integrate(rule, [&](double x) { return std::sin(2.0 * kPi * x) * f(x); });
  const double s2 = quad::integrate(rule, [&](double x) { return std::sin(4.0 * kPi * x) * f(x); });
  const double a1 = 2.0 * s1 * s1;
  const double a2 = 2.0 * s2 * s2;
  return m2 - m * m + 2.0 * (mu1 * a1 / (1.0 - mu1) + mu2 * a2 / (1.0 - mu2));
}

double sigma2_general(const SpectralCopula& c, const Functional& f, std::span<const double> breaks) {
  if (!(c.sup_abs_lambda() < 1.0)) throw std::domain_error("sigma2_general: requires sup |lambda| < 1");
  std::vector<double> cuts(breaks.begin(), breaks.end());
  const auto jumps = c.basis().discontinuities();
  cuts.insert(cuts.end(), jumps.begin(), jumps.end());
  const quad::Rule rule = functional_rule(cuts);
  const double m = quad::integrate(rule, f);
  double total = quad::integrate(rule, [&](double x) { return f(x) * f(x); }) - m * m;
  for (const Term& t : c.terms()) {
    const double proj = quad::integrate(rule, [&](double x) { return f(x) * c.basis().phi(t.index, x); });
    total += 2.0 * t.lambda * proj * proj / (1.0 - t.lambda);
  }
  return total;
}

double zero_effect_threshold(double mu1) {
  check_mu1(mu1);
  // the gap is negative near 0 and positive at 1/2 on this range of mu1
  double a = 1e-3;
  double b = 0.5;
  for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
    const double mid = 0.5 * (a + b);
    if (zero_effect_gap(mid, mu1) < 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

double zero_effect_threshold_closed(double mu1) {
  check_mu1(mu1);
  return std::acos(std::pow((1.0 + 4.0 * mu1) / (16.0 * (1.0 - mu1)), 0.25)) / kPi;
}

double zero_effect_threshold_printed(double mu1) {
  check_mu1(mu1);
  return std::acos(std::pow((1.0 - 4.0 * mu1) / (4.0 * (1.0 - mu1)), 0.25)) / kPi;
}

double mu_w_variance_printed(double w, double mu1) { return 1.0 - 2.0 * (1.0 - 4.0 * mu1 * mu1) * (w - w * w); }

double mu_w_variance_exact(double w, double mu1, double mu2) {
  return w * w + (1.0 - w) * (1.0 - w) / 16.0 + 0.5 * w * (1.0 - w) * mu1 * mu2;
}

WeightedEstimate estimate_mu_weighted(std::span<const double> u, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("estimate_mu_weighted: w must lie in [0,1]");
  const MuEstimate e = estimate_mu(u);
  WeightedEstimate r;
  r.w = w;
  r.n = e.n;
  // 2 sin sin = phi phi, so the statistic is w mu1_hat - (1-w)/4 mu2_hat
  r.estimate = w * e.mu1_hat - 0.25 * (1.0 - w) * e.mu2_hat;
  r.variance_printed = mu_w_variance_printed(w, r.estimate);
  r.variance_exact = mu_w_variance_exact(w, r.estimate, -4.0 * r.estimate);
  return r;
}

MeanCI interval(double estimate, std::size_t n, double sigma2, double level, VarianceFormula formula) {
  if (n == 0) throw std::invalid_argument("interval: empty sample");
  if (!(sigma2 > 0.0)) throw std::domain_error("interval: variance must be positive");
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("interval: level must lie in (0,1)");
  const double z = stats::normal_quantile(0.5 * (1.0 + level));
  const double half = z * std::sqrt(sigma2 / static_cast<double>(n));
  MeanCI ci;
  ci.estimate = estimate;
  ci.variance = sigma2;
  ci.level = level;
  ci.lo = estimate - half;
  ci.hi = estimate + half;
  ci.formula = formula;
  return ci;
}

MeanCI mean_ci(std::span<const double> series, double sigma2, double level, VarianceFormula formula) {
  if (series.empty()) throw std::invalid_argument("mean_ci: empty series");
  return interval(stats::mean(series), series.size(), sigma2, level, formula);
}

}  // namespace spectral
