#pragma once

// Mixing diagnostics for chains generated by a spectral copula. Certificates are
// numerical evidence at grid resolution.

#include <optional>
#include <string_view>
#include <vector>

#include "spectral/copula.hpp"

namespace spectral {

/// (sup_k |lambda_k|)^n for n = 1..N.
std::vector<double> rho_sequence(const SpectralCopula& c, int N);

enum class PsiCertificate { bounded_density, less_than_two, boundary_non_mixing, inconclusive };
std::string_view to_string(PsiCertificate p);

struct FoldBounds {
  int n = 0;
  double grid_min = 0.0;
  double grid_max = 0.0;
  /// [1 - M lambda_bar^{n-3}, 1 + M lambda_bar^{n-3}] when the decomposition bound applies.
  std::optional<double> decomp_lo;
  std::optional<double> decomp_hi;
};

struct MixingReport {
  std::vector<double> rho_n;
  double sup_lambda = 0.0;
  double sum_sq_lambda = 0.0;
  PsiCertificate certificate = PsiCertificate::inconclusive;
  /// First n whose fold density witnessed the certificate; 0 when none.
  int certified_at = 0;
  std::vector<FoldBounds> folds;
  bool decomp_applies = false;
  /// Stopped before max_n because lambda_bar^{n-3} fell below 1e-300.
  bool truncated = false;
  int grid_size = 0;
  int max_n = 0;

  bool certified() const {
    return certificate == PsiCertificate::bounded_density || certificate == PsiCertificate::less_than_two;
  }
};

inline constexpr int kDefaultMaxFold = 20;

/// Shifted-Legendre copula with sup|lambda| < 1, sum |lambda_k| (2k+1) alpha_k <= 1 and,
/// in addition, |lambda_k| (2k+1) <= 1 for every k; alpha_k = 1 for odd k, |min P_k| for even k.
bool decomposition_bound_applies(const SpectralCopula& c);

/// Evaluates fold(c, n) on the grid for n = 1..max_n (in parallel) and issues a certificate.
MixingReport certify_psi(const SpectralCopula& c, int max_n = kDefaultMaxFold, int grid = kValidityGrid,
                         unsigned threads = 0);

/// C1 and C2 are the lambda = +1 and -1 step copulas; C3 = ((1+lambda)/2) C1 + ((1-lambda)/2) C2.
struct ConvexCombinationRecord {
  double lambda = 0.0;
  MixingReport c1;
  MixingReport c2;
  MixingReport combination;
  SpectralCopula combined;
};

ConvexCombinationRecord convex_combination_regression(double lambda, int max_n = kDefaultMaxFold,
                                                      unsigned threads = 0);

}  // namespace spectral
