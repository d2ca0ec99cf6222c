#pragma once

// Estimators of the sine coefficients of model(mu1, mu2) and confidence intervals for
// means of functionals along the chain.

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "spectral/copula.hpp"

namespace spectral {

struct MuEstimate {
  double mu1_hat = 0.0;
  double mu2_hat = 0.0;
  std::size_t n = 0;
  /// [[1, -mu1 mu2], [-mu1 mu2, 1]] / (n - 1), evaluated at the estimates.
  std::array<std::array<double, 2>, 2> covariance{};
};

/// mu_k_hat = (1/(n-1)) sum phi_k(U_i) phi_k(U_{i+1}) with phi_k = sqrt(2) sin(2 pi k x). Requires n >= 2.
MuEstimate estimate_mu(std::span<const double> u);

enum class Chi2Normalization {
  exact,       ///< inverse covariance, divisor 1 - (mu1 mu2)^2
  published,  ///< printed divisor 1 - mu1 mu2
};

struct Chi2Options {
  Chi2Normalization normalization = Chi2Normalization::exact;
  /// Use mu1_hat * mu2_hat in the normalization instead of the hypothesised product.
  bool plug_in = false;
};

/// X_n = (n-1)/D * (d1^2 + d2^2 + 2 p d1 d2), d_k = mu_k_hat - mu0_k, p = mu1 mu2.
double chi2_statistic(const MuEstimate& est, std::array<double, 2> mu0, Chi2Options options = {});

// -- asymptotic variances -------------------------------------------------------

enum class VarianceFormula { bernoulli, exponential, uniform, custom };
std::string_view to_string(VarianceFormula f);

/// taurho(mu1) chain, f = 1{x <= a}:
/// a(1-a) + (4 mu1 / pi^2) (sin^4(pi a)/(1-mu1) - sin^4(2 pi a)/(1+4 mu1)).
double sigma2_bernoulli(double a, double mu1);

/// (int sin(2 pi t) ln(1-t) dt)^2 and 4 (int sin(4 pi t) ln(1-t) dt)^2.
struct LogIntegralConstants {
  double first = 0.0;
  double second = 0.0;
};
inline constexpr LogIntegralConstants kPrintedLogConstants{0.1505165, 0.245684};
/// Published value of sigma_f^2 / lambda^2 at mu1 = 0.05; it disagrees with the formula (0.99074).
inline constexpr double kPrintedExponentialSigma2 = 0.9702667;
/// Recomputed from int_0^1 sin(w s) ln s ds = -Cin(w)/w with Cin evaluated by quadrature.
LogIntegralConstants log_integral_constants();

/// taurho(mu1) chain, f = -lambda ln(1-x):
/// lambda^2 + 4 mu1 lambda^2 (K1/(1-mu1) - K2/(1+4 mu1)).
double sigma2_exponential(double lambda, double mu1, LogIntegralConstants k = kPrintedLogConstants);

/// taurho(mu1) chain, f(x) = x: 1/12 + 5 mu1^2 / (pi^2 (1-mu1)(1+4 mu1)).
double sigma2_uniform(double mu1);

using Functional = std::function<double(double)>;

/// sigma^2 + 2 (mu1 A1^2/(1-mu1) + mu2 A2^2/(1-mu2)), A_i^2 = 2 (int sin(2 i pi u) f(u) du)^2,
/// sigma^2 = Var f(U). Integrals use 256-node Gauss-Legendre split at `breaks`.
double sigma2_custom(const Functional& f, double mu1, double mu2, std::span<const double> breaks = {});

/// Var f(U) + 2 sum_k lambda_k (int f phi_k)^2 / (1 - lambda_k) for any copula with sup|lambda| < 1.
double sigma2_general(const SpectralCopula& c, const Functional& f, std::span<const double> breaks = {});

/// Threshold a in (0, 1/2) where sigma2_bernoulli(a, mu1) = a(1-a), found by root-finding
/// sin^4(pi a)/(1-mu1) - sin^4(2 pi a)/(1+4 mu1) = 0. Requires 0 < mu1 < 0.75.
double zero_effect_threshold(double mu1);
/// Closed form of the same root: cos^4(pi a) = (1+4 mu1) / (16 (1-mu1)).
double zero_effect_threshold_closed(double mu1);
/// Published closed form (1/pi) arccos(((1-4 mu1)/(4(1-mu1)))^{1/4}); not a root of the identity.
double zero_effect_threshold_printed(double mu1);

// -- weighted estimator of mu1 ----------------------------------------------------

struct WeightedEstimate {
  double estimate = 0.0;
  double w = 0.0;
  std::size_t n = 0;
  /// Published plug-in 1 - 2 (1 - 4 mu1^2)(w - w^2).
  double variance_printed = 0.0;
  /// w^2 + (1-w)^2/16 - 2 w (1-w) mu1^2 from the bivariate covariance at mu2 = -4 mu1.
  double variance_exact = 0.0;
};

double mu_w_variance_printed(double w, double mu1);
/// w^2 + (1-w)^2/16 + w (1-w) mu1 mu2 / 2.
double mu_w_variance_exact(double w, double mu1, double mu2);

/// (1/(n-1)) sum [2w sin(2 pi U_{i-1}) sin(2 pi U_i) - (1-w)/2 sin(4 pi U_{i-1}) sin(4 pi U_i)],
/// variances plugged in at the estimate. Requires n >= 2 and w in [0,1].
WeightedEstimate estimate_mu_weighted(std::span<const double> u, double w);

// -- intervals --------------------------------------------------------------------

struct CustomVariance {
  double a1_sq = 0.0;
  double a2_sq = 0.0;
  double sigma2 = 0.0;
};

struct MeanCI {
  double estimate = 0.0;
  double variance = 0.0;
  double level = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  VarianceFormula formula = VarianceFormula::custom;
  std::optional<CustomVariance> custom;

  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// estimate +- z_{(1+level)/2} sqrt(sigma2 / n) around an already computed estimate.
MeanCI interval(double estimate, std::size_t n, double sigma2, double level,
                VarianceFormula formula = VarianceFormula::custom);
/// interval() around the sample mean of `series`.
MeanCI mean_ci(std::span<const double> series, double sigma2, double level,
               VarianceFormula formula = VarianceFormula::custom);

}  // namespace spectral
