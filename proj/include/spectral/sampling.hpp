#pragma once

// Stationary Markov chains U_1, U_2, ... with uniform marginals and copula C.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "spectral/copula.hpp"

namespace spectral {

using Rng = std::mt19937_64;

/// Independent stream for replicate r of experiment e; the result does not depend on scheduling.
Rng make_stream(std::uint64_t master_seed, std::uint64_t experiment, std::uint64_t replicate);

/// Uniform draw strictly inside (0,1) with 53 random bits.
double uniform_open(Rng& rng);

/// Solves dC/du(u_prev, v) = w for v. Smooth families use bisection followed by secant
/// refinement; step families invert the piecewise linear conditional CDF exactly.
/// Throws std::runtime_error when the root finder does not converge.
double next_state(const SpectralCopula& c, double u_prev, double w);

/// Closed-form four-branch sampler for the step copula with alpha = 1. Requires |lambda| < 1.
double sample_wl(double lambda, double u_prev, double q);

class MarginalTransform {
 public:
  enum class Kind { uniform, exponential, bernoulli };

  static MarginalTransform uniform() { return {Kind::uniform, 0.0}; }
  /// f(x) = -lambda ln(1 - x); lambda > 0.
  static MarginalTransform exponential(double lambda);
  /// f(x) = 1 when x <= a; a in (0,1).
  static MarginalTransform bernoulli(double a);

  Kind kind() const { return kind_; }
  double parameter() const { return parameter_; }
  std::string name() const;

  double operator()(double x) const;
  std::vector<double> apply(std::span<const double> values) const;

 private:
  MarginalTransform(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}

  Kind kind_;
  double parameter_;
};

struct ChainSample {
  std::vector<double> values;
  std::uint64_t seed = 0;

  std::size_t size() const { return values.size(); }
};

/// Fills n states: U_1 uniform, then U_i = next_state(c, U_{i-1}, W_i), all draws from `rng`.
std::vector<double> generate_states(const SpectralCopula& c, std::size_t n, Rng& rng);

/// generate_states on make_stream(seed, 0, 0). Requires n >= 2.
ChainSample generate_chain(const SpectralCopula& c, std::size_t n, std::uint64_t seed);

}  // namespace spectral
