#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "spectral/mixing.hpp"

using namespace spectral;

TEST_SUITE("mixing") {
  TEST_CASE("rho sequence") {
    for (double r : rho_sequence(SpectralCopula::independence(Basis::cosine()), 5)) CHECK(r == 0.0);
    for (double r : rho_sequence(two_value_step(1.0, 1.0), 6)) CHECK(r == 1.0);
    const SpectralCopula c(Basis::cosine(), {{{1}, 0.6}, {{2}, -0.3}});
    const auto rho = rho_sequence(c, 4);
    REQUIRE(rho.size() == 4);
    const double expected[] = {0.6, 0.36, 0.216, 0.1296};
    for (int i = 0; i < 4; ++i) CHECK(rho[static_cast<std::size_t>(i)] == doctest::Approx(expected[i]).epsilon(1e-14));
  }

  TEST_CASE("FGM at the parameter boundary is certified") {
    for (double theta : {1.0, -1.0}) {
      const MixingReport r = certify_psi(fgm(theta / 3.0), 6);
      CHECK(r.certified());
      CHECK(r.folds.back().grid_max < 2.0);
      CHECK(r.grid_size == kValidityGrid);
    }
  }

  TEST_CASE("extreme step copulas are boundary non-mixing") {
    for (double lam : {1.0, -1.0}) {
      const MixingReport r = certify_psi(two_value_step(1.0, lam), 4);
      CHECK(r.certificate == PsiCertificate::boundary_non_mixing);
      CHECK_FALSE(r.certified());
      CHECK(to_string(r.certificate) == "BoundaryNonMixing");
    }
  }

  TEST_CASE("taurho at its limit is certified at the first fold") {
    const MixingReport r = certify_psi(taurho(0.11), 3);
    CHECK(r.certificate == PsiCertificate::less_than_two);
    CHECK(r.certified_at == 1);
  }

  TEST_CASE("grid range contracts toward one") {
    const MixingReport r = certify_psi(cosine_single(0.5), 10);
    for (std::size_t i = 1; i < r.folds.size(); ++i) {
      CHECK(r.folds[i].grid_max <= r.folds[i - 1].grid_max + 1e-15);
      CHECK(r.folds[i].grid_min >= r.folds[i - 1].grid_min - 1e-15);
      CHECK(r.rho_n[i] <= r.rho_n[i - 1]);
    }
  }

  TEST_CASE("decomposition bound") {
    const SpectralCopula c = legendre_fgm(0.25, 0.1);
    CHECK(decomposition_bound_applies(c));
    const MixingReport r = certify_psi(c, 12);
    CHECK(r.decomp_applies);
    for (const FoldBounds& b : r.folds) {
      if (b.n < 4) continue;
      REQUIRE(b.decomp_lo.has_value());
      CHECK(b.grid_min >= *b.decomp_lo);
      CHECK(b.grid_max <= *b.decomp_hi);
    }
    // a large even coefficient breaks the per-term hypothesis and the sup bound with it
    const SpectralCopula wide = legendre_fgm(0.0, 0.4);
    CHECK_FALSE(decomposition_bound_applies(wide));
    const MixingReport w = certify_psi(wide, 6);
    const double m = wide.sum_sq_lambda();
    const double lam = wide.sup_abs_lambda();
    CHECK(w.folds[3].grid_max > 1.0 + m * std::pow(lam, 1));
    CHECK_FALSE(decomposition_bound_applies(fgm(0.5)));
    CHECK_FALSE(decomposition_bound_applies(cosine_single(0.1)));
  }

  TEST_CASE("underflow truncates the report") {
    const MixingReport r = certify_psi(fgm(1e-30), 20);
    CHECK(r.truncated);
    CHECK(r.max_n < 20);
    const MixingReport id = certify_psi(SpectralCopula::independence(Basis::cosine()), 20);
    CHECK(id.truncated);
    CHECK(id.certified());
  }

  TEST_CASE("thread count does not change the report") {
    const SpectralCopula c = legendre_fgm(0.25, 0.1);
    const MixingReport a = certify_psi(c, 6, 128, 1);
    const MixingReport b = certify_psi(c, 6, 128, 3);
    for (std::size_t i = 0; i < a.folds.size(); ++i) {
      CHECK(a.folds[i].grid_min == b.folds[i].grid_min);
      CHECK(a.folds[i].grid_max == b.folds[i].grid_max);
    }
  }

  TEST_CASE("convex combinations of non-mixing step copulas") {
    const ConvexCombinationRecord zero = convex_combination_regression(0.0, 4);
    CHECK(zero.combined.sup_abs_lambda() == 0.0);
    CHECK(zero.combination.certified());
    for (double lam : {0.9, 0.999}) {
      const ConvexCombinationRecord r = convex_combination_regression(lam, 4);
      CHECK(r.c1.certificate == PsiCertificate::boundary_non_mixing);
      CHECK(r.c2.certificate == PsiCertificate::boundary_non_mixing);
      CHECK(r.combination.certified());
      CHECK(r.combined.coefficient({1}) == doctest::Approx(lam).epsilon(1e-12));
      CHECK(r.combination.folds[0].grid_min == doctest::Approx(1.0 - lam).epsilon(1e-9));
    }
    CHECK_THROWS_AS(convex_combination_regression(1.0), std::invalid_argument);
  }
}
