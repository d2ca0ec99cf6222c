#pragma once

// Orthonormal systems of L^2(0,1) whose members are all orthogonal to the
// constant function. The constant itself is implicit and never indexed.

#include <compare>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace spectral {

/// Sub-index for the sine-cosine system; every other family uses `none`.
enum class Wave { none, cosine, sine };

/// 1-based position of a function inside its family.
struct BasisIndex {
  int k = 1;
  Wave wave = Wave::none;

  friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;
};

std::string to_string(BasisIndex index);

namespace family {

/// {sqrt2 cos 2 pi k x, sqrt2 sin 2 pi k x}
struct SineCosine {
  friend bool operator==(const SineCosine&, const SineCosine&) = default;
};
/// {sqrt2 cos k pi x}
struct Cosine {
  friend bool operator==(const Cosine&, const Cosine&) = default;
};
/// {sqrt(2k+1) P_k(2x-1)}
struct ShiftedLegendre {
  friend bool operator==(const ShiftedLegendre&, const ShiftedLegendre&) = default;
};
/// Single function: sqrt(alpha) on [0, 1/(alpha+1)), -1/sqrt(alpha) on the rest.
struct TwoValueStep {
  double alpha = 1.0;
  friend bool operator==(const TwoValueStep&, const TwoValueStep&) = default;
};
/// One sign-changing function per cell [a_i, a_{i+1}), i = 1..s, with a_{s+1} = 1.
struct PiecewiseSign {
  std::vector<double> breakpoints;
  friend bool operator==(const PiecewiseSign&, const PiecewiseSign&) = default;
};

}  // namespace family

using BasisFamily = std::variant<family::SineCosine, family::Cosine, family::ShiftedLegendre,
                                 family::TwoValueStep, family::PiecewiseSign>;

struct Extrema {
  double min_phi = 0.0;
  double max_phi = 0.0;
};

/// Immutable handle on one of the five supported families.
class Basis {
 public:
  /// Throws std::invalid_argument on alpha <= 0 or malformed breakpoints.
  explicit Basis(BasisFamily family);

  static Basis sine_cosine() { return Basis(family::SineCosine{}); }
  static Basis cosine() { return Basis(family::Cosine{}); }
  static Basis shifted_legendre() { return Basis(family::ShiftedLegendre{}); }
  static Basis two_value_step(double alpha) { return Basis(family::TwoValueStep{alpha}); }
  static Basis piecewise_sign(std::vector<double> breakpoints) {
    return Basis(family::PiecewiseSign{std::move(breakpoints)});
  }

  const BasisFamily& family() const { return family_; }
  std::string_view name() const;

  bool contains(BasisIndex index) const;
  /// Throws std::out_of_range when `index` is not a member of the family.
  void require(BasisIndex index) const;

  /// phi_k(x). Throws std::domain_error for x outside [0,1].
  double phi(BasisIndex index, double x) const;
  /// Phi_k(x) = integral of phi_k over [0,x], in closed form.
  double antiderivative(BasisIndex index, double x) const;
  Extrema extrema(BasisIndex index) const;

  /// True for the step families, whose functions are constant between breakpoints.
  bool piecewise_constant() const;
  /// Points in (0,1) where some phi_k jumps; empty for smooth families.
  std::vector<double> discontinuities() const;
  /// Number of functions in a finite family, 0 when unbounded.
  int finite_size() const;

  friend bool operator==(const Basis&, const Basis&) = default;

 private:
  BasisFamily family_;
};

/// Legendre polynomial P_k(y) by the three-term recurrence.
double legendre_p(int k, double y);
/// P_k'(y) via P'_{k+1} = P'_{k-1} + (2k+1) P_k.
double legendre_dp(int k, double y);
/// min of P_k over [-1,1]. Odd k gives -1; even k is found numerically and cached.
double legendre_min(int k);

}  // namespace spectral
