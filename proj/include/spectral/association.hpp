#pragma once

#include "spectral/copula.hpp"

namespace spectral {

enum class AssociationMode { closed, numeric };

struct AssociationValue {
  double value = 0.0;
  /// Mode actually used: closed requests fall back to numeric where no closed form exists.
  AssociationMode used = AssociationMode::numeric;
};

/// Spearman rho. numeric = 12 * integral of C over [0,1]^2 - 3.
AssociationValue rho_spearman(const SpectralCopula& c, AssociationMode mode);
/// Kendall tau. numeric = 1 - 4 * integral of dC/du * dC/dv, both derivatives in closed form.
AssociationValue tau_kendall(const SpectralCopula& c, AssociationMode mode);

bool has_closed_association(const Basis& basis);

struct AssociationReport {
  bool closed_available = false;
  double rho_closed = 0.0;
  double tau_closed = 0.0;
  double rho_numeric = 0.0;
  double tau_numeric = 0.0;
  double rho_gap = 0.0;
  double tau_gap = 0.0;
  /// 1e-8 for smooth families, 1e-6 for step families.
  double tolerance = 0.0;

  bool within_tolerance() const { return rho_gap <= tolerance && tau_gap <= tolerance; }
};

AssociationReport associate(const SpectralCopula& c);

}  // namespace spectral
