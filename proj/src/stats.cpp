#include "spectral/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spectral::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0,1)");
  if (p > 0.5) return -normal_quantile(1.0 - p);
  // Acklam's rational approximation (relative error ~1e-9)
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double low = 0.02425;
  double x = 0.0;
  if (p < low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double chi2_2_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-0.5 * x); }

double chi2_2_quantile(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw std::domain_error("chi2_2_quantile: p must lie in [0,1)");
  return -2.0 * std::log1p(-p);
}

double kolmogorov_q(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 0.2) return 1.0;  // series converges too slowly; Q is 1 to double precision here
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * t * t);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double ne = std::sqrt(n);
  return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

double binomial_cdf(int k, int n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_cdf: bad parameters");
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  double sum = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * lp + (n - i) * lq;
    sum += std::exp(log_pmf);
  }
  return std::min(sum, 1.0);
}

CountBand binomial_band(int n, double p, double confidence) {
  if (n < 1 || !(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("binomial_band: bad parameters");
  const double tail = 0.5 * (1.0 - confidence);
  CountBand band{0, n};
  // lo: largest k with P(X < k) <= tail
  for (int k = 0; k <= n; ++k) {
    if (binomial_cdf(k - 1, n, p) <= tail) {
      band.lo = k;
    } else {
      break;
    }
  }
  // hi: smallest k with P(X > k) <= tail
  for (int k = n; k >= 0; --k) {
    if (1.0 - binomial_cdf(k, n, p) <= tail) {
      band.hi = k;
    } else {
      break;
    }
  }
  return band;
}

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean: empty input");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double lag_correlation(std::span<const double> x, int lag) {
  if (lag < 0 || x.size() <= static_cast<std::size_t>(lag) + 1)
    throw std::invalid_argument("lag_correlation: series too short");
  const std::size_t m = x.size() - static_cast<std::size_t>(lag);
  const auto head = x.first(m);
  const auto tail = x.subspan(static_cast<std::size_t>(lag), m);
  const double ma = mean(head);
  const double mb = mean(tail);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sab += (head[i] - ma) * (tail[i] - mb);
    saa += (head[i] - ma) * (head[i] - ma);
    sbb += (tail[i] - mb) * (tail[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double quantile(std::vector<double> x, double p) {
  if (x.empty()) throw std::invalid_argument("quantile: empty input");
  std::sort(x.begin(), x.end());
  const double pos = p * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

}  // namespace spectral::stats
