#include "spectral/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spectral {
namespace {

constexpr double kValueTol = 1e-12;
constexpr double kWidthTol = 1e-14;
constexpr double kSecantSwitch = 1e-6;
constexpr int kMaxIterations = 100;

std::uint32_t lo32(std::uint64_t x) { return static_cast<std::uint32_t>(x); }
std::uint32_t hi32(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

double invert_smooth(const SpectralCopula& c, double u, double w) {
  double a = 0.0;
  double b = 1.0;
  double fa = -w;
  double fb = 1.0 - w;
  for (int it = 0; it < kMaxIterations; ++it) {
    double x;
    if (b - a > kSecantSwitch || fb == fa) {
      x = 0.5 * (a + b);
    } else {
      x = b - fb * (b - a) / (fb - fa);
      if (!(x > a && x < b)) x = 0.5 * (a + b);
    }
    const double fx = c.conditional_cdf(u, x) - w;
    if (std::abs(fx) <= kValueTol) return x;
    if (fx < 0.0) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    if (b - a <= kWidthTol) return 0.5 * (a + b);
  }
  throw std::runtime_error("next_state: root finder did not converge");
}

double invert_piecewise_linear(const SpectralCopula& c, double u, double w) {
  std::vector<double> knots = c.basis().discontinuities();
  knots.insert(knots.begin(), 0.0);
  knots.push_back(1.0);
  double left = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double right = i + 1 == knots.size() ? 1.0 : c.conditional_cdf(u, knots[i]);
    if (w <= right) {
      if (right <= left) return knots[i - 1];
      const double t = (w - left) / (right - left);
      return std::clamp(knots[i - 1] + t * (knots[i] - knots[i - 1]), knots[i - 1], knots[i]);
    }
    left = right;
  }
  return 1.0;
}

}  // namespace

Rng make_stream(std::uint64_t master_seed, std::uint64_t experiment, std::uint64_t replicate) {
  std::seed_seq seq{lo32(master_seed), hi32(master_seed), lo32(experiment),
                    hi32(experiment),  lo32(replicate),   hi32(replicate)};
  return Rng(seq);
}

double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double next_state(const SpectralCopula& c, double u_prev, double w) {
  if (!(u_prev >= 0.0 && u_prev <= 1.0)) throw std::domain_error("next_state: u_prev outside [0,1]");
  if (!(w > 0.0 && w < 1.0)) throw std::domain_error("next_state: w outside (0,1)");
  if (c.terms().empty()) return w;
  if (c.basis().piecewise_constant()) return invert_piecewise_linear(c, u_prev, w);
  return invert_smooth(c, u_prev, w);
}

double sample_wl(double lambda, double u_prev, double q) {
  if (!(std::abs(lambda) < 1.0)) throw std::domain_error("sample_wl: requires |lambda| < 1");
  if (u_prev < 0.5) {
    return q < 0.5 + 0.5 * lambda ? q / (1.0 + lambda) : (q - lambda) / (1.0 - lambda);
  }
  return q < 0.5 - 0.5 * lambda ? q / (1.0 - lambda) : (q + lambda) / (1.0 + lambda);
}

MarginalTransform MarginalTransform::exponential(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("exponential transform: lambda must be positive");
  return {Kind::exponential, lambda};
}

MarginalTransform MarginalTransform::bernoulli(double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("bernoulli transform: threshold must lie in (0,1)");
  return {Kind::bernoulli, a};
}

std::string MarginalTransform::name() const {
  switch (kind_) {
    case Kind::uniform: return "uniform";
    case Kind::exponential: return "exponential";
    case Kind::bernoulli: return "bernoulli";
  }
  return "uniform";
}

double MarginalTransform::operator()(double x) const {
  switch (kind_) {
    case Kind::uniform: return x;
    case Kind::exponential: return -parameter_ * std::log1p(-x);
    case Kind::bernoulli: return x <= parameter_ ? 1.0 : 0.0;
  }
  return x;
}

std::vector<double> MarginalTransform::apply(std::span<const double> values) const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [this](double x) { return (*this)(x); });
  return out;
}

std::vector<double> generate_states(const SpectralCopula& c, std::size_t n, Rng& rng) {
  std::vector<double> u(n);
  if (n == 0) return u;
  u[0] = uniform_open(rng);
  for (std::size_t i = 1; i < n; ++i) u[i] = next_state(c, u[i - 1], uniform_open(rng));
  return u;
}

ChainSample generate_chain(const SpectralCopula& c, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_chain: n must be at least 2");
  Rng rng = make_stream(seed, 0, 0);
  return {generate_states(c, n, rng), seed};
}

}  // namespace spectral
