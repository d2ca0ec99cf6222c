#pragma once

// Symmetric copulas C(u,v) = uv + sum_k lambda_k Phi_k(u) Phi_k(v) over a fixed basis.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "spectral/basis.hpp"
#include "spectral/quadrature.hpp"

namespace spectral {

struct Term {
  BasisIndex index;
  double lambda = 0.0;
};

class SpectralCopula {
 public:
  /// Terms are sorted by index; zero coefficients are kept. Throws
  /// std::out_of_range for foreign indices and std::invalid_argument for duplicates.
  SpectralCopula(Basis basis, std::vector<Term> terms);

  static SpectralCopula independence(Basis basis) { return {std::move(basis), {}}; }

  const Basis& basis() const { return basis_; }
  std::span<const Term> terms() const { return terms_; }
  /// lambda for `index`, 0 when absent.
  double coefficient(BasisIndex index) const;

  double sup_abs_lambda() const;
  double sum_sq_lambda() const;

  /// c(u,v) = 1 + sum lambda_k phi_k(u) phi_k(v)
  double density(double u, double v) const;
  /// C(u,v)
  double cdf(double u, double v) const;
  /// dC/du (u,v) = v + sum lambda_k phi_k(u) Phi_k(v)
  double conditional_cdf(double u, double v) const;
  /// dC/dv (u,v); equals conditional_cdf(v,u) by symmetry.
  double partial_v(double u, double v) const { return conditional_cdf(v, u); }

 private:
  Basis basis_;
  std::vector<Term> terms_;
};

/// Quadrature matched to the basis: 64-point Gauss-Legendre for smooth families,
/// a low-order rule per constancy cell for step families (exact there).
quad::Rule quadrature_for(const Basis& basis);

/// Copula of (U_0, U_n): same basis, coefficients lambda_k^n. Throws for n < 1.
SpectralCopula fold(const SpectralCopula& c, int n);

/// Mixture sum w_i C_i of copulas on the same basis; weights must be positive and sum to 1.
SpectralCopula convex_combination(std::span<const double> weights, std::span<const SpectralCopula> parts);

/// Numeric density of a * b: integral over t of c_a(u,t) c_b(t,v).
class StarProduct {
 public:
  StarProduct(SpectralCopula a, SpectralCopula b, int nodes_per_piece = 64);
  double operator()(double u, double v) const;

 private:
  SpectralCopula a_;
  SpectralCopula b_;
  quad::Rule rule_;
};

inline StarProduct star_product(const SpectralCopula& a, const SpectralCopula& b, int nodes_per_piece = 64) {
  return {a, b, nodes_per_piece};
}

// -- named constructors -------------------------------------------------------

/// Step copula C_{alpha,lambda}.
SpectralCopula two_value_step(double alpha, double lambda);
/// Local sign perturbations of size theta_i on the diagonal cells; lambda_i = theta_i (a_{i+1} - a_i).
SpectralCopula piecewise_sign(std::vector<double> breakpoints, std::span<const double> thetas);
/// FGM copula uv + 3 lambda (u-u^2)(v-v^2), i.e. theta = 3 lambda.
SpectralCopula fgm(double lambda);
/// Two-term shifted-Legendre extension.
SpectralCopula legendre_fgm(double lambda1, double lambda2);
/// uv + (2 lambda / pi^2) sin(pi u) sin(pi v)
SpectralCopula cosine_single(double lambda);
/// Sine-cosine copula on the sine functions k = 1, 2. Requires 2|mu1| + 2|mu2| <= 1.
SpectralCopula model(double mu1, double mu2);
/// model(mu1, -4 mu1): zero Spearman rho and Kendall tau. Requires |mu1| <= 0.11.
SpectralCopula taurho(double mu1);

// -- validity -----------------------------------------------------------------

enum class Verdict { valid, valid_boundary, invalid };
std::string_view to_string(Verdict v);

struct ValidityReport {
  bool analytic_ok = false;
  /// 1 + sum lambda_k alpha_k (family-specific); NaN when no analytic condition exists.
  double analytic_margin = 0.0;
  double grid_min_density = 0.0;
  double grid_max_density = 0.0;
  /// max over the grid of |C(u,1) - u| and |C(1,v) - v|.
  double margin_deviation = 0.0;
  /// Analytic condition failed but the grid found no negative density.
  bool grid_adjudicated = false;
  int grid_size = 0;
  Verdict verdict = Verdict::invalid;
};

inline constexpr int kValidityGrid = 512;

ValidityReport validate(const SpectralCopula& c, int grid = kValidityGrid);

/// Grid-only check for candidates without a Type-I representation.
ValidityReport validate_candidate(const std::function<double(double, double)>& density,
                                  const std::function<double(double, double)>& cdf,
                                  std::optional<double> analytic_margin, int grid = kValidityGrid);

/// min and max of c on the grid x midpoints of [0,1]^2, computed from tabulated basis values.
struct DensityRange {
  double min = 0.0;
  double max = 0.0;
};
DensityRange density_grid_range(const SpectralCopula& c, int grid = kValidityGrid);

// -- the sine-basis counterexample -----------------------------------------------

/// C(u,v) = (2/pi^2) sum_{k odd < 2K} (1 - cos k pi u)(1 - cos k pi v) / k^2, all lambda = 1.
struct SineCounterexample {
  int terms = 0;
  double max_margin_deviation = 0.0;  ///< max_u |C(u,1) - u| on a 10^4-point grid
  double deviation_at_half = 0.0;     ///< |C(1/2,1) - 1/2|
  ValidityReport validity;
};

SineCounterexample reject_sine_counterexample(int terms);

}  // namespace spectral
