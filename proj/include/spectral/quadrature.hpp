#pragma once

#include <span>
#include <vector>

namespace spectral::quad {

/// Nodes and weights of a quadrature rule on [0,1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule mapped to [0,1]: exact for polynomials of degree 2n-1.
Rule gauss_legendre(int n);

/// Copies `base` onto every piece of [0,1] cut at `breaks` (interior points, any order).
/// Integrands that are smooth on each piece keep the base rule's accuracy.
Rule composite(const Rule& base, std::span<const double> breaks);

template <typename F>
double integrate(const Rule& rule, F&& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

/// Tensor-product rule over [0,1]^2.
template <typename F>
double integrate2(const Rule& rule, F&& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) row += rule.weights[j] * f(rule.nodes[i], rule.nodes[j]);
    sum += rule.weights[i] * row;
  }
  return sum;
}

}  // namespace spectral::quad
