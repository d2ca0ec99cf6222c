#include "spectral/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace spectral::quad {

Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Rule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  // P_n(y) and P_n'(y) by the three-term recurrence.
  const auto legendre = [n](double y) {
    double p0 = 1.0;
    double p1 = y;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * y * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (y * p1 - p0) / (y * y - 1.0)};
  };
  for (int i = 0; i < half; ++i) {
    double y = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(y);
      const double dy = p / dp;
      y -= dy;
      if (std::abs(dy) < 1e-16) break;
    }
    const double dp = legendre(y).second;
    const double w = 2.0 / ((1.0 - y * y) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = 0.5 * (1.0 - y);
    rule.nodes[hi] = 0.5 * (1.0 + y);
    rule.weights[lo] = 0.5 * w;
    rule.weights[hi] = 0.5 * w;
  }
  return rule;
}

Rule composite(const Rule& base, std::span<const double> breaks) {
  std::vector<double> cuts{0.0};
  for (double b : breaks)
    if (b > 0.0 && b < 1.0) cuts.push_back(b);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Rule rule;
  rule.nodes.reserve(base.size() * (cuts.size() - 1));
  rule.weights.reserve(base.size() * (cuts.size() - 1));
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p];
    const double h = cuts[p + 1] - a;
    for (std::size_t i = 0; i < base.size(); ++i) {
      rule.nodes.push_back(a + h * base.nodes[i]);
      rule.weights.push_back(h * base.weights[i]);
    }
  }
  return rule;
}

}  // namespace spectral::quad
