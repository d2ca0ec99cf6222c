#include "spectral/mixing.hpp"

#include <cmath>
#include <stdexcept>

#include "spectral/parallel.hpp"

namespace spectral {
namespace {

constexpr double kCertTol = 1e-9;
constexpr double kUnderflow = 1e-300;
constexpr double kBoundaryTol = 1e-12;

}  // namespace

std::vector<double> rho_sequence(const SpectralCopula& c, int N) {
  if (N < 0) throw std::invalid_argument("rho_sequence: N must be non-negative");
  const double sup = c.sup_abs_lambda();
  std::vector<double> rho(static_cast<std::size_t>(N));
  double p = 1.0;
  for (double& r : rho) {
    p *= sup;
    r = p;
  }
  return rho;
}

std::string_view to_string(PsiCertificate p) {
  switch (p) {
    case PsiCertificate::bounded_density: return "CertifiedByBoundedDensity";
    case PsiCertificate::less_than_two: return "CertifiedByLessThanTwo";
    case PsiCertificate::boundary_non_mixing: return "BoundaryNonMixing";
    case PsiCertificate::inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

bool decomposition_bound_applies(const SpectralCopula& c) {
  if (!std::holds_alternative<family::ShiftedLegendre>(c.basis().family())) return false;
  if (!(c.sup_abs_lambda() < 1.0)) return false;
  double total = 0.0;
  for (const Term& t : c.terms()) {
    const int k = t.index.k;
    const double weight = 2.0 * k + 1.0;
    const double alpha = k % 2 == 1 ? 1.0 : std::abs(legendre_min(k));
    total += std::abs(t.lambda) * weight * alpha;
    if (std::abs(t.lambda) * weight > 1.0) return false;
  }
  return total <= 1.0;
}

MixingReport certify_psi(const SpectralCopula& c, int max_n, int grid, unsigned threads) {
  if (max_n < 1) throw std::invalid_argument("certify_psi: max_n must be at least 1");
  MixingReport r;
  r.sup_lambda = c.sup_abs_lambda();
  r.sum_sq_lambda = c.sum_sq_lambda();
  r.grid_size = grid;
  r.decomp_applies = decomposition_bound_applies(c);

  int last = max_n;
  for (int n = 4; n <= max_n; ++n) {
    if (std::pow(r.sup_lambda, n - 3) < kUnderflow) {
      last = n - 1;
      r.truncated = true;
      break;
    }
  }
  r.max_n = last;
  r.rho_n = rho_sequence(c, last);

  r.folds.resize(static_cast<std::size_t>(last));
  parallel_for(r.folds.size(), threads, [&](std::size_t i) {
    const int n = static_cast<int>(i) + 1;
    const DensityRange range = density_grid_range(fold(c, n), grid);
    FoldBounds& b = r.folds[i];
    b.n = n;
    b.grid_min = range.min;
    b.grid_max = range.max;
    if (r.decomp_applies && n >= 3) {
      const double spread = r.sum_sq_lambda * std::pow(r.sup_lambda, n - 3);
      b.decomp_lo = 1.0 - spread;
      b.decomp_hi = 1.0 + spread;
    }
  });

  if (r.sup_lambda >= 1.0 - kBoundaryTol) {
    r.certificate = PsiCertificate::boundary_non_mixing;
    return r;
  }
  for (const FoldBounds& b : r.folds) {
    if (b.grid_max < 2.0 - kCertTol) {
      r.certificate = PsiCertificate::less_than_two;
      r.certified_at = b.n;
      return r;
    }
  }
  for (const FoldBounds& b : r.folds) {
    if (b.grid_min > kCertTol) {
      r.certificate = PsiCertificate::bounded_density;
      r.certified_at = b.n;
      return r;
    }
  }
  return r;
}

ConvexCombinationRecord convex_combination_regression(double lambda, int max_n, unsigned threads) {
  if (!(std::abs(lambda) < 1.0)) throw std::invalid_argument("convex_combination_regression: requires |lambda| < 1");
  const SpectralCopula c1 = two_value_step(1.0, 1.0);
  const SpectralCopula c2 = two_value_step(1.0, -1.0);
  const double weights[] = {0.5 * (1.0 + lambda), 0.5 * (1.0 - lambda)};
  const SpectralCopula parts[] = {c1, c2};
  SpectralCopula combined = convex_combination(weights, parts);
  return {lambda, certify_psi(c1, max_n, kValidityGrid, threads), certify_psi(c2, max_n, kValidityGrid, threads),
          certify_psi(combined, max_n, kValidityGrid, threads), std::move(combined)};
}

}  // namespace spectral
