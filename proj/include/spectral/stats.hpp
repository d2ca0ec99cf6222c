#pragma once

// Distribution helpers used by the estimators and the simulation harness.

#include <functional>
#include <span>
#include <vector>

namespace spectral::stats {

double normal_cdf(double x);
/// Inverse standard normal CDF; rational start refined by Halley steps on erfc.
double normal_quantile(double p);

/// chi-square with 2 degrees of freedom: 1 - exp(-x/2).
double chi2_2_cdf(double x);
double chi2_2_quantile(double p);

/// Kolmogorov survival function Q(t) = 2 sum (-1)^{j-1} exp(-2 j^2 t^2).
double kolmogorov_q(double t);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
/// One-sample test against a continuous CDF.
KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);

double binomial_cdf(int k, int n, double p);

/// Equal-tailed band of success counts: P(X < lo) <= (1-conf)/2 and P(X > hi) <= (1-conf)/2.
struct CountBand {
  int lo = 0;
  int hi = 0;
};
CountBand binomial_band(int n, double p, double confidence);

double mean(std::span<const double> x);
/// Pearson correlation of (x_i, x_{i+lag}).
double lag_correlation(std::span<const double> x, int lag);
/// Empirical quantile by linear interpolation between order statistics.
double quantile(std::vector<double> x, double p);

}  // namespace spectral::stats
